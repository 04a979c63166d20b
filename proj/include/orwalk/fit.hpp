#pragma once

// Growth-law fits for curves against lambda -> 0 (or t -> infinity):
// linear least squares in the transformed coordinates of each model.
//   power:   log v  vs log x        (parameter = exponent)
//   log:     v      vs log(1/x)     (parameter = amplitude of the log law)
//   loglog:  v      vs log log(1/x)
//   sqrtlog: v^2    vs log(1/x)     (v ~ sqrt(a + b log(1/x)))

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace orwalk {

enum class FitModel { power, log_law, loglog, sqrtlog };

inline const char* fit_model_str(FitModel m) {
    switch (m) {
        case FitModel::power: return "power";
        case FitModel::log_law: return "log";
        case FitModel::loglog: return "loglog";
        case FitModel::sqrtlog: return "sqrtlog";
    }
    return "?";
}

inline FitModel fit_model_from(const std::string& s) {
    if (s == "power") return FitModel::power;
    if (s == "log") return FitModel::log_law;
    if (s == "loglog") return FitModel::loglog;
    if (s == "sqrtlog") return FitModel::sqrtlog;
    throw std::invalid_argument("unknown fit model: " + s);
}

struct FitResult {
    FitModel model = FitModel::power;
    double parameter = 0.0;        // slope in transformed coordinates
    double intercept = 0.0;
    double max_rel_residual = 0.0; // of the back-transformed fit over the grid
    std::pair<double, double> x_range{0.0, 0.0};
    int points = 0;
};

inline FitResult fit_growth(std::span<const double> xs, std::span<const double> values,
                            FitModel model) {
    const std::size_t n = xs.size();
    if (n != values.size()) throw std::invalid_argument("fit_growth: size mismatch");
    if (n < 4) throw std::invalid_argument("fit_growth: need at least 4 points");
    bool increasing = xs[1] > xs[0];
    for (std::size_t k = 0; k < n; ++k) {
        if (!(xs[k] > 0.0)) throw std::invalid_argument("fit_growth: abscissae must be positive");
        if (!(values[k] > 0.0)) throw std::invalid_argument("fit_growth: values must be positive");
        if (k > 0 && ((increasing && xs[k] <= xs[k - 1]) || (!increasing && xs[k] >= xs[k - 1])))
            throw std::invalid_argument("fit_growth: abscissae must be strictly monotone");
    }
    const auto [vmin, vmax] = std::minmax_element(values.begin(), values.end());
    if (*vmax - *vmin < 1e-9 * *vmax)
        throw std::invalid_argument("fit_growth: values are constant; no growth law to fit");

    auto transform_x = [&](double x) -> double {
        switch (model) {
            case FitModel::power: return std::log(x);
            case FitModel::log_law: return std::log(1.0 / x);
            case FitModel::loglog: {
                const double l = std::log(1.0 / x);
                if (!(l > 1.0))
                    throw std::invalid_argument("fit_growth: loglog model needs x < 1/e");
                return std::log(l);
            }
            case FitModel::sqrtlog: return std::log(1.0 / x);
        }
        return 0.0;
    };
    auto transform_y = [&](double v) -> double {
        switch (model) {
            case FitModel::power: return std::log(v);
            case FitModel::sqrtlog: return v * v;
            default: return v;
        }
    };

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double tx = transform_x(xs[k]);
        const double ty = transform_y(values[k]);
        sx += tx;
        sy += ty;
        sxx += tx * tx;
        sxy += tx * ty;
    }
    const double nn = static_cast<double>(n);
    const double denom = nn * sxx - sx * sx;
    if (std::abs(denom) < 1e-30) throw std::invalid_argument("fit_growth: degenerate abscissae");
    const double slope = (nn * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / nn;

    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double ty = intercept + slope * transform_x(xs[k]);
        double fitted;
        switch (model) {
            case FitModel::power: fitted = std::exp(ty); break;
            case FitModel::sqrtlog: fitted = ty > 0.0 ? std::sqrt(ty) : 0.0; break;
            default: fitted = ty; break;
        }
        worst = std::max(worst, std::abs(fitted - values[k]) / values[k]);
    }

    FitResult r;
    r.model = model;
    r.parameter = slope;
    r.intercept = intercept;
    r.max_rel_residual = worst;
    r.x_range = {xs.front(), xs.back()};
    r.points = static_cast<int>(n);
    return r;
}

// Back-transformed prediction of a fit at abscissa x.
inline double fit_predict(const FitResult& f, double x) {
    double tx;
    switch (f.model) {
        case FitModel::power: tx = std::log(x); break;
        case FitModel::loglog: tx = std::log(std::log(1.0 / x)); break;
        default: tx = std::log(1.0 / x); break;
    }
    const double ty = f.intercept + f.parameter * tx;
    switch (f.model) {
        case FitModel::power: return std::exp(ty);
        case FitModel::sqrtlog: return ty > 0.0 ? std::sqrt(ty) : 0.0;
        default: return ty;
    }
}

}  // namespace orwalk
