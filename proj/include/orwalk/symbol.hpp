#pragma once

// Lattice Laplacian symbol on the torus and small helpers shared by the
// bound integrands.

#include <cmath>
#include <span>

namespace orwalk {

// sin^2(x/2)
inline double sin_sq_half(double x) noexcept {
    const double s = std::sin(0.5 * x);
    return s * s;
}

// d_hat(p) = sum_j 4 sin^2(p_j / 2)
inline double symbol_d_hat(std::span<const double> p) noexcept {
    double acc = 0.0;
    for (double x : p) acc += 4.0 * sin_sq_half(x);
    return acc;
}

// d_hat(p^{(j)}) with the j-th coordinate (1-based) zeroed.
inline double symbol_d_hat_punctured(std::span<const double> p, int j) noexcept {
    double acc = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k)
        if (static_cast<int>(k) != j - 1) acc += 4.0 * sin_sq_half(p[k]);
    return acc;
}

}  // namespace orwalk
