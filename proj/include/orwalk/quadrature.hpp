#pragma once

// Composite Gauss-Legendre quadrature on dyadically graded panels.
//
// The bound integrands are smooth away from the origin but peak at a
// lambda-dependent scale there; panels shrink geometrically toward the
// graded endpoint so any power-law feature is resolved once the minimum
// width is below its scale. Error estimates come from one refinement step
// (every panel split in two).

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "orwalk/stats.hpp"

namespace orwalk {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels = 0;
    double lambda = 0.0;
};

// Gauss-Legendre nodes/weights on [-1, 1], Newton iteration, cached per order.
struct GaussLegendre {
    std::vector<double> x, w;

    static const GaussLegendre& order(int n) {
        static std::map<int, GaussLegendre> cache;
        static std::mutex mu;
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
        GaussLegendre gl;
        gl.x.resize(static_cast<std::size_t>(n));
        gl.w.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            // Chebyshev initial guess for the i-th root
            double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it2 = 0; it2 < 100; ++it2) {
                double p0 = 1.0, p1 = xi;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
                const double dx = p1 / dp;
                xi -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            gl.x[static_cast<std::size_t>(i)] = xi;
            gl.w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - xi * xi) * dp * dp);
        }
        return cache.emplace(n, std::move(gl)).first->second;
    }
};

// Dyadic panels on [a, b] graded toward a with minimum width `min_width`.
inline std::vector<std::pair<double, double>> graded_panels(double a, double b, double min_width) {
    if (!(b > a)) throw std::invalid_argument("graded_panels: empty interval");
    std::vector<std::pair<double, double>> out;
    if (min_width >= b - a) {
        out.emplace_back(a, b);
        return out;
    }
    double lo = a, w = min_width;
    for (;;) {
        const double hi = lo + w;
        if (hi >= b || b - hi < 0.25 * w) {
            out.emplace_back(lo, b);
            break;
        }
        out.emplace_back(lo, hi);
        lo = hi;
        w *= 2.0;
    }
    return out;
}

namespace detail {

template <class F>
double integrate_on_panels(F&& f, const std::vector<std::pair<double, double>>& panels,
                           const GaussLegendre& gl) {
    KahanSum total;
    for (const auto& [lo, hi] : panels) {
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        KahanSum panel;
        for (std::size_t i = 0; i < gl.x.size(); ++i)
            panel.add(gl.w[i] * f(mid + half * gl.x[i]));
        total.add(half * panel.value());
    }
    return total.value();
}

inline std::vector<std::pair<double, double>> split_panels(
    const std::vector<std::pair<double, double>>& panels) {
    std::vector<std::pair<double, double>> out;
    out.reserve(panels.size() * 2);
    for (const auto& [lo, hi] : panels) {
        const double mid = 0.5 * (lo + hi);
        out.emplace_back(lo, mid);
        out.emplace_back(mid, hi);
    }
    return out;
}

}  // namespace detail

// 1D integral over [a, b], graded toward a.
template <class F>
QuadratureResult integrate_graded(F&& f, double a, double b, double min_width, int gl_order = 24) {
    const auto& gl = GaussLegendre::order(gl_order);
    const auto coarse = graded_panels(a, b, min_width);
    const auto fine = detail::split_panels(coarse);
    const double v0 = detail::integrate_on_panels(f, coarse, gl);
    const double v1 = detail::integrate_on_panels(f, fine, gl);
    QuadratureResult r;
    r.value = v1;
    r.error_estimate = std::abs(v1 - v0);
    r.panels = static_cast<int>(fine.size());
    return r;
}

// 2D tensor-product integral over [a, b]^2, graded toward a in each axis.
template <class F2>
QuadratureResult integrate_graded_2d(F2&& f, double a, double b, double min_width,
                                     int gl_order = 12) {
    const auto& gl = GaussLegendre::order(gl_order);
    auto eval = [&](const std::vector<std::pair<double, double>>& panels) {
        KahanSum total;
        const std::size_t ng = gl.x.size();
        std::vector<double> xs(ng), wx(ng);
        for (const auto& [lo1, hi1] : panels) {
            const double mid1 = 0.5 * (lo1 + hi1);
            const double half1 = 0.5 * (hi1 - lo1);
            for (std::size_t i = 0; i < ng; ++i) {
                xs[i] = mid1 + half1 * gl.x[i];
                wx[i] = half1 * gl.w[i];
            }
            for (const auto& [lo2, hi2] : panels) {
                const double mid2 = 0.5 * (lo2 + hi2);
                const double half2 = 0.5 * (hi2 - lo2);
                KahanSum cell;
                for (std::size_t i = 0; i < ng; ++i) {
                    double row = 0.0;
                    for (std::size_t j = 0; j < ng; ++j)
                        row += gl.w[j] * f(xs[i], mid2 + half2 * gl.x[j]);
                    cell.add(wx[i] * half2 * row);
                }
                total.add(cell.value());
            }
        }
        return total.value();
    };
    const auto coarse = graded_panels(a, b, min_width);
    const auto fine = detail::split_panels(coarse);
    const double v0 = eval(coarse);
    const double v1 = eval(fine);
    QuadratureResult r;
    r.value = v1;
    r.error_estimate = std::abs(v1 - v0);
    r.panels = static_cast<int>(fine.size() * fine.size());
    return r;
}

// Geometric panels [0,1],[1,2],[2,4],... up to T; for time-domain integrals
// whose integrand decays polynomially then exponentially.
template <class F>
QuadratureResult integrate_geometric(F&& f, double t_end, int gl_order = 24) {
    const auto& gl = GaussLegendre::order(gl_order);
    std::vector<std::pair<double, double>> panels;
    double lo = 0.0, hi = 1.0;
    while (lo < t_end) {
        panels.emplace_back(lo, std::min(hi, t_end));
        lo = hi;
        hi *= 2.0;
    }
    const auto fine = detail::split_panels(panels);
    const double v0 = detail::integrate_on_panels(f, panels, gl);
    const double v1 = detail::integrate_on_panels(f, fine, gl);
    QuadratureResult r;
    r.value = v1;
    r.error_estimate = std::abs(v1 - v0);
    r.panels = static_cast<int>(fine.size());
    return r;
}

}  // namespace orwalk
