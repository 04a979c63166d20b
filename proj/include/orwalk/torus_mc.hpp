#pragma once

// Monte Carlo of the walk on a torus-wrapped environment, used as an
// independent dynamical oracle for the torus generator: estimates
// E[phi(eta_0) phi(eta_t)] by simulating the walker against freshly
// sampled environments. Deliberately shares no code with TorusProcess
// beyond the model definition.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "orwalk/model.hpp"
#include "orwalk/splitmix.hpp"
#include "orwalk/stats.hpp"

namespace orwalk {

struct TorusCorrelationEstimate {
    std::vector<double> times;
    std::vector<double> values;  // estimate of E[phi(eta_0) phi(eta_t)]
    std::vector<double> std_err;
    int n_paths = 0;
};

inline TorusCorrelationEstimate torus_correlation_mc(int dimension, int side,
                                                     std::uint32_t oriented_mask,
                                                     std::span<const double> times, int n_paths,
                                                     std::uint64_t master_seed, int threads = 0) {
    if (dimension < 1 || dimension > kMaxDimension || side < 2)
        throw std::invalid_argument("torus_correlation_mc: bad torus");
    if ((oriented_mask & 1u) == 0)
        throw std::invalid_argument("torus_correlation_mc: axis 1 must be oriented");
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < 0.0 || (k > 0 && times[k] <= times[k - 1]))
            throw std::invalid_argument("torus_correlation_mc: times must be increasing, >= 0");
    }

    const int d = dimension;
    const int L = side;
    int base_count = 1;
    for (int k = 1; k < d; ++k) base_count *= L;
    std::vector<int> axis_offset(static_cast<std::size_t>(d) + 1, -1);
    int m = 0;
    for (int i = 1; i <= d; ++i) {
        if ((oriented_mask >> (i - 1)) & 1u) {
            axis_offset[i] = m;
            m += base_count;
        }
    }

    // line id of the axis-i line through `pos`, mixed-radix over other coords
    auto line_of = [&](int axis, const std::array<int, kMaxDimension>& pos) {
        int idx = 0, mul = 1;
        for (int k = 0; k < d; ++k) {
            if (k == axis - 1) continue;
            idx += pos[k] * mul;
            mul *= L;
        }
        return axis_offset[axis] + idx;
    };

    const std::size_t nt = times.size();
    struct Block {
        std::vector<KahanSum> sum, sum_sq;
        explicit Block(std::size_t n) : sum(n), sum_sq(n) {}
    };
    const double rate = static_cast<double>(d);

    auto blocks = run_blocks<Block>(
        n_paths, threads, [&] { return Block(nt); },
        [&](std::int64_t i, Block& acc) {
            SplitMix64 rng(mix64(master_seed ^ static_cast<std::uint64_t>(i)));
            std::vector<int> env(static_cast<std::size_t>(m));
            for (int l = 0; l < m; ++l) env[static_cast<std::size_t>(l)] = rng.sign_flip();

            std::array<int, kMaxDimension> pos{};
            const double phi0 = env[static_cast<std::size_t>(line_of(1, pos))];
            double t_next = rng.exponential(rate);
            std::size_t k = 0;
            while (k < nt) {
                if (times[k] < t_next) {
                    const double phi_t = env[static_cast<std::size_t>(line_of(1, pos))];
                    const double prod = phi0 * phi_t;
                    acc.sum[k].add(prod);
                    acc.sum_sq[k].add(prod * prod);
                    ++k;
                    continue;
                }
                const int axis = 1 + static_cast<int>(rng.below(static_cast<std::uint32_t>(d)));
                int step;
                if ((oriented_mask >> (axis - 1)) & 1u)
                    step = env[static_cast<std::size_t>(line_of(axis, pos))];
                else
                    step = rng.sign_flip();
                pos[axis - 1] = ((pos[axis - 1] + step) % L + L) % L;
                t_next += rng.exponential(rate);
            }
        });

    TorusCorrelationEstimate est;
    est.times.assign(times.begin(), times.end());
    est.values.resize(nt);
    est.std_err.resize(nt);
    est.n_paths = n_paths;
    for (std::size_t k = 0; k < nt; ++k) {
        KahanSum s, sq;
        for (const auto& b : blocks) {
            s.add(b.sum[k].value());
            sq.add(b.sum_sq[k].value());
        }
        const auto ms = mean_stderr(s.value(), sq.value(), n_paths);
        est.values[k] = ms.mean;
        est.std_err[k] = ms.std_err;
    }
    return est;
}

}  // namespace orwalk
