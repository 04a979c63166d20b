#pragma once

// Exponentially scaled modified Bessel function e^{-x} I_0(x), needed for
// the separable time-domain form of the resolvent integrals: one torus
// dimension contributes a factor e^{-2t} I_0(2t) to the heat kernel trace.

#include <cmath>

namespace orwalk {

inline double bessel_i0_scaled(double x) noexcept {
    if (x < 0.0) x = -x;
    if (x < 30.0) {
        // power series of I_0 times e^{-x}; all terms positive
        const double q = 0.25 * x * x;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (term < 1e-18 * sum) break;
        }
        return std::exp(-x) * sum;
    }
    // asymptotic series: (2 pi x)^{-1/2} sum_k prod (2j-1)^2 / (k! 8^k x^k)
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < 12; ++k) {
        const double odd = 2.0 * k + 1.0;
        const double next = term * odd * odd / (8.0 * (k + 1.0) * x);
        if (next >= term) break;  // asymptotic: stop at the smallest term
        term = next;
        sum += term;
    }
    return sum / std::sqrt(2.0 * M_PI * x);
}

}  // namespace orwalk
