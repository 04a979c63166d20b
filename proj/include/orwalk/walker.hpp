#pragma once

// Continuous-time walk on Z^d in a quenched orientation environment.
//
// The walker jumps at total rate d (exponential holding times); at each
// event an axis is chosen uniformly, oriented axes move by their line's
// direction, free axes move +-1 with probability 1/2. Positions are
// piecewise constant between events; the drift functional
// integral of omega(1, X_s) ds is accumulated in closed form.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "orwalk/errors.hpp"
#include "orwalk/model.hpp"
#include "orwalk/splitmix.hpp"

namespace orwalk {

// Snapshot of one simulated path at the requested sample times.
struct PathObserver {
    int dimension = 0;
    std::uint64_t path_seed = 0;
    std::vector<double> sample_times;
    std::vector<Coord> positions;
    std::vector<double> drift_integral;       // int_0^t omega(1, X_s) ds (0 if axis 1 free)
    std::vector<std::uint64_t> event_counts;  // Poisson events up to each sample time
};

struct SimulateOptions {
    std::uint64_t event_cap = 100'000'000;  // per path; exceeding it throws
};

namespace detail {

inline void check_sample_times(std::span<const double> ts) {
    for (std::size_t k = 0; k < ts.size(); ++k) {
        if (ts[k] < 0.0) throw std::invalid_argument("sample_times must be nonnegative");
        if (k > 0 && ts[k] <= ts[k - 1])
            throw std::invalid_argument("sample_times must be strictly increasing");
    }
}

// Core walk loop shared by the observer and the streaming estimators.
// Calls on_sample(k, pos, drift, events) for each sample time, in order.
template <class OnSample>
void walk(const OrientationOracle& oracle, std::uint64_t path_seed,
          std::span<const double> sample_times, const SimulateOptions& opts,
          OnSample on_sample) {
    const ModelSpec& spec = oracle.spec();
    const int d = spec.dimension;
    const double rate = static_cast<double>(d);
    const bool track_drift = spec.oriented(1);

    SplitMix64 rng(path_seed);
    Coord pos = origin_coord();
    double drift = 0.0;     // accumulated up to the last event
    double t_event = 0.0;   // time of the last event
    std::uint64_t events = 0;
    int sign1 = track_drift ? oracle.orientation(1, pos) : 0;

    double t_next = rng.exponential(rate);
    std::size_t k = 0;
    while (k < sample_times.size()) {
        const double ts = sample_times[k];
        if (ts < t_next) {
            on_sample(k, pos, drift + sign1 * (ts - t_event), events);
            ++k;
            continue;
        }
        // advance to the event at t_next
        drift += sign1 * (t_next - t_event);
        t_event = t_next;
        if (++events > opts.event_cap)
            throw ResourceCapError("simulate_path: event cap " + std::to_string(opts.event_cap) +
                                   " exceeded at t=" + std::to_string(t_event));
        const int axis = 1 + static_cast<int>(rng.below(static_cast<std::uint32_t>(d)));
        const int step = spec.oriented(axis) ? oracle.orientation(axis, pos) : rng.sign_flip();
        pos[axis - 1] += step;
        if (axis != 1 && track_drift) sign1 = oracle.orientation(1, pos);
        t_next += rng.exponential(rate);
    }
}

}  // namespace detail

inline PathObserver simulate_path(const OrientationOracle& oracle, std::uint64_t path_seed,
                                  std::span<const double> sample_times,
                                  const SimulateOptions& opts = {}) {
    detail::check_sample_times(sample_times);
    PathObserver obs;
    obs.dimension = oracle.spec().dimension;
    obs.path_seed = path_seed;
    obs.sample_times.assign(sample_times.begin(), sample_times.end());
    obs.positions.resize(sample_times.size());
    obs.drift_integral.resize(sample_times.size());
    obs.event_counts.resize(sample_times.size());
    detail::walk(oracle, path_seed, sample_times, opts,
                 [&](std::size_t k, const Coord& pos, double drift, std::uint64_t events) {
                     obs.positions[k] = pos;
                     obs.drift_integral[k] = drift;
                     obs.event_counts[k] = events;
                 });
    return obs;
}

}  // namespace orwalk
