#pragma once

// Ensemble estimators over independent (environment, path) pairs:
// mean-square displacement E(t), its Laplace transform, Cesaro averages,
// and the martingale decomposition diagnostic.
//
// Annealed mode draws a fresh environment per path; quenched mode shares
// one environment across paths. Seeds: path_seed = mix(master ^ index),
// environment seed = mix(path_seed ^ salt).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "orwalk/model.hpp"
#include "orwalk/stats.hpp"
#include "orwalk/walker.hpp"

namespace orwalk {

inline constexpr std::uint64_t kEnvSeedSalt = 0xD1B54A32D192ED03ULL;

enum class Averaging { annealed, quenched };

struct EnsembleOptions {
    int n_paths = 1000;
    std::uint64_t master_seed = 0;
    Averaging averaging = Averaging::annealed;
    int threads = 0;  // 0 = hardware concurrency
    std::uint64_t event_cap = 100'000'000;
};

struct MsdEstimate {
    std::vector<double> times;
    std::vector<double> mean_sq;  // estimate of E(t)
    std::vector<double> std_err;
    std::vector<double> cesaro;   // (1/t) int_0^t E(s) ds, trapezoid with E(0)=0 anchor
    int n_paths = 0;
    std::uint64_t master_seed = 0;
    Averaging averaging = Averaging::annealed;
};

struct LaplaceEstimate {
    std::vector<double> lambdas;
    std::vector<double> values;  // estimate of int_0^inf e^{-lam t} E(t) dt
    std::vector<double> std_err;
    std::vector<double> truncation_time;
    int n_paths = 0;
    std::uint64_t master_seed = 0;
};

struct MartingaleDiagnostic {
    std::vector<double> times;
    std::vector<double> mart_mean;         // ensemble mean of M_t = X^1_t - drift
    std::vector<double> mart_mean_stderr;
    std::vector<double> mart_sq;           // ensemble mean of M_t^2
    std::vector<double> mart_sq_stderr;
    double fitted_rate = 0.0;              // c in E[M_t^2] ~ c t (least squares through origin)
    double fit_rel_residual = 0.0;         // max |c t - y| / y over the fit window
    int n_paths = 0;
};

namespace detail {

inline std::uint64_t path_seed_for(std::uint64_t master, std::int64_t index) {
    return mix64(master ^ static_cast<std::uint64_t>(index));
}

inline std::uint64_t env_seed_for(std::uint64_t master, std::uint64_t path_seed, Averaging mode) {
    return mode == Averaging::annealed ? mix64(path_seed ^ kEnvSeedSalt)
                                       : mix64(master ^ kEnvSeedSalt);
}

struct MomentBlock {
    std::vector<KahanSum> sum;
    std::vector<KahanSum> sum_sq;
    explicit MomentBlock(std::size_t n) : sum(n), sum_sq(n) {}
};

}  // namespace detail

// Annealed (or quenched) estimate of E(t) = E|X_t|^2 on the given grid.
// Deterministic for fixed (master_seed, n_paths, grid) regardless of threads.
inline MsdEstimate estimate_msd(const ModelSpec& spec, std::span<const double> times,
                                const EnsembleOptions& opts) {
    spec.validate();
    detail::check_sample_times(times);
    if (opts.n_paths < 2) throw std::invalid_argument("estimate_msd: n_paths must be >= 2");

    const std::size_t nt = times.size();
    SimulateOptions sim{opts.event_cap};
    auto blocks = run_blocks<detail::MomentBlock>(
        opts.n_paths, opts.threads, [&] { return detail::MomentBlock(nt); },
        [&](std::int64_t i, detail::MomentBlock& acc) {
            const std::uint64_t ps = detail::path_seed_for(opts.master_seed, i);
            ModelSpec env = spec;
            env.master_seed = detail::env_seed_for(opts.master_seed, ps, opts.averaging);
            OrientationOracle oracle(env);
            detail::walk(oracle, ps, times, sim,
                         [&](std::size_t k, const Coord& pos, double, std::uint64_t) {
                             double r2 = 0.0;
                             for (int c = 0; c < spec.dimension; ++c) {
                                 const double x = static_cast<double>(pos[c]);
                                 r2 += x * x;
                             }
                             acc.sum[k].add(r2);
                             acc.sum_sq[k].add(r2 * r2);
                         });
        });

    MsdEstimate est;
    est.times.assign(times.begin(), times.end());
    est.mean_sq.resize(nt);
    est.std_err.resize(nt);
    est.cesaro.resize(nt);
    est.n_paths = opts.n_paths;
    est.master_seed = opts.master_seed;
    est.averaging = opts.averaging;

    for (std::size_t k = 0; k < nt; ++k) {
        KahanSum s, sq;
        for (const auto& b : blocks) {
            s.add(b.sum[k].value());
            sq.add(b.sum_sq[k].value());
        }
        const auto ms = mean_stderr(s.value(), sq.value(), opts.n_paths);
        est.mean_sq[k] = ms.mean;
        est.std_err[k] = ms.std_err;
    }

    // Cesaro average by trapezoid, anchored at E(0) = 0.
    double acc = 0.0, prev_t = 0.0, prev_e = 0.0;
    for (std::size_t k = 0; k < nt; ++k) {
        acc += 0.5 * (prev_e + est.mean_sq[k]) * (est.times[k] - prev_t);
        prev_t = est.times[k];
        prev_e = est.mean_sq[k];
        est.cesaro[k] = est.times[k] > 0.0 ? acc / est.times[k] : 0.0;
    }
    return est;
}

// Per-path exact Laplace functional int_0^T e^{-lam t} |X_t|^2 dt with
// T = trunc_factor / lam; |X_t|^2 is piecewise constant so each inter-event
// interval contributes in closed form. One walk serves every lambda.
inline LaplaceEstimate estimate_laplace(const ModelSpec& spec, std::span<const double> lambdas,
                                        const EnsembleOptions& opts, double trunc_factor = 40.0) {
    spec.validate();
    if (opts.n_paths < 2) throw std::invalid_argument("estimate_laplace: n_paths must be >= 2");
    if (lambdas.empty()) throw std::invalid_argument("estimate_laplace: no lambdas");
    for (double l : lambdas)
        if (!(l > 0.0)) throw std::invalid_argument("estimate_laplace: lambdas must be positive");
    if (!(trunc_factor > 0.0)) throw std::invalid_argument("estimate_laplace: bad trunc_factor");

    const std::size_t nl = lambdas.size();
    std::vector<double> horizon(nl);
    double t_max = 0.0;
    for (std::size_t j = 0; j < nl; ++j) {
        horizon[j] = trunc_factor / lambdas[j];
        t_max = std::max(t_max, horizon[j]);
    }

    const int d = spec.dimension;
    const double rate = static_cast<double>(d);
    SimulateOptions sim{opts.event_cap};

    auto blocks = run_blocks<detail::MomentBlock>(
        opts.n_paths, opts.threads, [&] { return detail::MomentBlock(nl); },
        [&](std::int64_t i, detail::MomentBlock& acc) {
            const std::uint64_t ps = detail::path_seed_for(opts.master_seed, i);
            ModelSpec env = spec;
            env.master_seed = detail::env_seed_for(opts.master_seed, ps, opts.averaging);
            OrientationOracle oracle(env);

            SplitMix64 rng(ps);
            Coord pos = origin_coord();
            double r2 = 0.0;
            double t = 0.0;
            std::uint64_t events = 0;
            std::vector<double> integral(nl, 0.0);

            while (t < t_max) {
                const double dt = rng.exponential(rate);
                const double t_end = std::min(t + dt, t_max);
                if (r2 != 0.0) {
                    for (std::size_t j = 0; j < nl; ++j) {
                        const double lam = lambdas[j];
                        if (t >= horizon[j]) continue;
                        const double hi = std::min(t_end, horizon[j]);
                        // r2 * (e^{-lam t} - e^{-lam hi}) / lam
                        integral[j] += r2 * std::exp(-lam * t) * (-std::expm1(-lam * (hi - t))) / lam;
                    }
                }
                t += dt;
                if (t >= t_max) break;
                if (++events > sim.event_cap)
                    throw ResourceCapError("estimate_laplace: event cap exceeded");
                const int axis = 1 + static_cast<int>(rng.below(static_cast<std::uint32_t>(d)));
                const int step =
                    spec.oriented(axis) ? oracle.orientation(axis, pos) : rng.sign_flip();
                const double old = static_cast<double>(pos[axis - 1]);
                pos[axis - 1] += step;
                r2 += 2.0 * old * step + 1.0;
            }
            for (std::size_t j = 0; j < nl; ++j) {
                acc.sum[j].add(integral[j]);
                acc.sum_sq[j].add(integral[j] * integral[j]);
            }
        });

    LaplaceEstimate est;
    est.lambdas.assign(lambdas.begin(), lambdas.end());
    est.values.resize(nl);
    est.std_err.resize(nl);
    est.truncation_time = horizon;
    est.n_paths = opts.n_paths;
    est.master_seed = opts.master_seed;
    for (std::size_t j = 0; j < nl; ++j) {
        KahanSum s, sq;
        for (const auto& b : blocks) {
            s.add(b.sum[j].value());
            sq.add(b.sum_sq[j].value());
        }
        const auto ms = mean_stderr(s.value(), sq.value(), opts.n_paths);
        est.values[j] = ms.mean;
        est.std_err[j] = ms.std_err;
    }
    return est;
}

// Ensemble statistics of M_t = X^1_t - int_0^t omega(1, X_s) ds.
// All paths must share one sample grid. The rate c of E[M_t^2] ~ c t is
// fitted by least squares through the origin over [fit_t_min, fit_t_max].
inline MartingaleDiagnostic martingale_diagnostic(std::span<const PathObserver> paths,
                                                  double fit_t_min = 0.0,
                                                  double fit_t_max =
                                                      std::numeric_limits<double>::infinity()) {
    if (paths.size() < 2) throw std::invalid_argument("martingale_diagnostic: need >= 2 paths");
    const auto& grid = paths.front().sample_times;
    for (const auto& p : paths)
        if (p.sample_times != grid)
            throw std::invalid_argument("martingale_diagnostic: mismatched sample grids");

    const std::size_t nt = grid.size();
    const auto n = static_cast<std::int64_t>(paths.size());
    MartingaleDiagnostic diag;
    diag.times = grid;
    diag.mart_mean.resize(nt);
    diag.mart_mean_stderr.resize(nt);
    diag.mart_sq.resize(nt);
    diag.mart_sq_stderr.resize(nt);
    diag.n_paths = static_cast<int>(n);

    for (std::size_t k = 0; k < nt; ++k) {
        KahanSum s1, s2, s4;
        for (const auto& p : paths) {
            const double m =
                static_cast<double>(p.positions[k][0]) - p.drift_integral[k];
            s1.add(m);
            s2.add(m * m);
            s4.add(m * m * m * m);
        }
        const auto mm = mean_stderr(s1.value(), s2.value(), n);
        diag.mart_mean[k] = mm.mean;
        diag.mart_mean_stderr[k] = mm.std_err;
        const auto ms = mean_stderr(s2.value(), s4.value(), n);
        diag.mart_sq[k] = ms.mean;
        diag.mart_sq_stderr[k] = ms.std_err;
    }

    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < nt; ++k) {
        const double t = grid[k];
        if (t <= 0.0 || t < fit_t_min || t > fit_t_max) continue;
        num += t * diag.mart_sq[k];
        den += t * t;
    }
    diag.fitted_rate = den > 0.0 ? num / den : 0.0;
    double worst = 0.0;
    for (std::size_t k = 0; k < nt; ++k) {
        const double t = grid[k];
        if (t <= 0.0 || t < fit_t_min || t > fit_t_max || diag.mart_sq[k] <= 0.0) continue;
        worst = std::max(worst, std::abs(diag.fitted_rate * t - diag.mart_sq[k]) / diag.mart_sq[k]);
    }
    diag.fit_rel_residual = worst;
    return diag;
}

// Simulates n paths on a shared grid with the ensemble seeding scheme
// (for the martingale diagnostic and path-level tests).
inline std::vector<PathObserver> simulate_ensemble(const ModelSpec& spec,
                                                   std::span<const double> times,
                                                   const EnsembleOptions& opts) {
    spec.validate();
    detail::check_sample_times(times);
    std::vector<PathObserver> paths(static_cast<std::size_t>(opts.n_paths));
    SimulateOptions sim{opts.event_cap};
    struct Nothing {};
    run_blocks<Nothing>(
        opts.n_paths, opts.threads, [] { return Nothing{}; },
        [&](std::int64_t i, Nothing&) {
            const std::uint64_t ps = detail::path_seed_for(opts.master_seed, i);
            ModelSpec env = spec;
            env.master_seed = detail::env_seed_for(opts.master_seed, ps, opts.averaging);
            OrientationOracle oracle(env);
            paths[static_cast<std::size_t>(i)] = simulate_path(oracle, ps, times, sim);
        });
    return paths;
}

}  // namespace orwalk
