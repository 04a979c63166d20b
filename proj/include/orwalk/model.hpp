#pragma once

// Lattice geometry and the lazy random environment of line orientations.
//
// Every axis-parallel line of Z^d is identified by its axis and the
// projection of any of its points onto the hyperplane U_i = {x : x_i = 0}.
// Oriented axes carry a quenched direction per line, realized as a pure
// hash of (master_seed, axis, projected base), so the environment needs
// no storage and regenerates bit-exactly on every query.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "orwalk/errors.hpp"
#include "orwalk/splitmix.hpp"

namespace orwalk {

inline constexpr int kMaxDimension = 8;

// Lattice point; only the first `dimension` entries are meaningful.
using Coord = std::array<std::int64_t, kMaxDimension>;

inline Coord origin_coord() noexcept { return Coord{}; }

// Which model: dimension, set of directed axes, seed of the environment.
// oriented_axes == {1..d} is the Manhattan lattice, a single oriented axis
// is the MdM model, anything in between is an interpolation.
struct ModelSpec {
    int dimension = 2;
    std::uint32_t oriented_mask = 0x3;  // bit (i-1) set <=> axis i oriented
    std::uint64_t master_seed = 0;

    bool oriented(int axis) const noexcept {
        return axis >= 1 && axis <= dimension && (oriented_mask >> (axis - 1)) & 1u;
    }

    int fixed_axis_count() const noexcept {
        int n = 0;
        for (int i = 1; i <= dimension; ++i) n += oriented(i) ? 1 : 0;
        return n;
    }

    std::vector<int> oriented_axes() const {
        std::vector<int> out;
        for (int i = 1; i <= dimension; ++i)
            if (oriented(i)) out.push_back(i);
        return out;
    }

    void validate() const {
        if (dimension < 1 || dimension > kMaxDimension)
            throw std::invalid_argument("ModelSpec: dimension must be in [1, 8], got " +
                                        std::to_string(dimension));
        if ((oriented_mask >> dimension) != 0)
            throw std::invalid_argument("ModelSpec: oriented axis outside 1..d");
        if (oriented_mask == 0)
            throw std::invalid_argument("ModelSpec: at least one axis must be oriented");
    }

    static ModelSpec manhattan(int d, std::uint64_t seed) {
        ModelSpec s{d, d >= 32 ? 0u : ((1u << d) - 1u), seed};
        s.validate();
        return s;
    }

    // MdM: only the first axis is directed.
    static ModelSpec mdm(int d, std::uint64_t seed) {
        ModelSpec s{d, 1u, seed};
        s.validate();
        return s;
    }

    static ModelSpec with_axes(int d, const std::vector<int>& axes, std::uint64_t seed) {
        std::uint32_t mask = 0;
        for (int a : axes) {
            if (a < 1 || a > d)
                throw std::invalid_argument("ModelSpec: axis " + std::to_string(a) +
                                            " outside 1.." + std::to_string(d));
            mask |= 1u << (a - 1);
        }
        ModelSpec s{d, mask, seed};
        s.validate();
        return s;
    }
};

// A line V(i, x) = {x + t e_i}, identified by axis and the projected base.
struct LineKey {
    int axis = 1;       // 1-based
    int dimension = 0;  // number of meaningful base coordinates
    Coord base{};       // base[axis-1] == 0

    friend bool operator==(const LineKey& a, const LineKey& b) noexcept {
        if (a.axis != b.axis || a.dimension != b.dimension) return false;
        for (int k = 0; k < a.dimension; ++k)
            if (a.base[k] != b.base[k]) return false;
        return true;
    }
};

// Projects a lattice point onto the line key of its axis-parallel line.
inline LineKey line_key(const ModelSpec& spec, int axis, const Coord& point) {
    if (axis < 1 || axis > spec.dimension)
        throw std::invalid_argument("line_key: axis " + std::to_string(axis) +
                                    " outside 1.." + std::to_string(spec.dimension));
    LineKey key;
    key.axis = axis;
    key.dimension = spec.dimension;
    key.base = point;
    key.base[axis - 1] = 0;
    for (int k = spec.dimension; k < kMaxDimension; ++k) key.base[k] = 0;
    return key;
}

// Stateless view of the quenched orientation field. Immutable, safe for
// concurrent reads; memory use is independent of how many lines are queried.
class OrientationOracle {
public:
    explicit OrientationOracle(ModelSpec spec) : spec_(spec) { spec_.validate(); }

    const ModelSpec& spec() const noexcept { return spec_; }

    // Orientation of the line through `point` along `axis`; the axis
    // coordinate of `point` is irrelevant by construction.
    //
    // Normative hash pipeline:
    //   h = mix(seed ^ axis); for each base coord c: h = mix(h ^ zigzag(c));
    //   sign = +1 if bit 63 of h is clear.
    int orientation(int axis, const Coord& point) const {
        if (!spec_.oriented(axis))
            throw UnorientedAxisError("orientation: axis " + std::to_string(axis) +
                                      " carries no line direction");
        std::uint64_t h = mix64(spec_.master_seed ^ static_cast<std::uint64_t>(axis));
        for (int k = 0; k < spec_.dimension; ++k) {
            const std::int64_t c = (k == axis - 1) ? 0 : point[k];
            h = mix64(h ^ zigzag64(c));
        }
        return (h >> 63) ? -1 : +1;
    }

    int orientation(const LineKey& key) const { return orientation(key.axis, key.base); }

private:
    ModelSpec spec_;
};

// One entry of the legal move multiset: either a resolved step along an
// oriented axis or a "free" marker (symmetric +-e_axis resolved at step time).
struct Move {
    int axis = 1;
    int sign = 0;  // +-1 for oriented axes, 0 for free entries
    bool free_axis = false;
};

// The d legal displacements out of `point`: oriented axes contribute their
// line's direction, free axes contribute a symmetric marker.
inline std::vector<Move> legal_moves(const OrientationOracle& oracle, const ModelSpec& spec,
                                     const Coord& point) {
    std::vector<Move> moves;
    moves.reserve(static_cast<std::size_t>(spec.dimension));
    for (int axis = 1; axis <= spec.dimension; ++axis) {
        if (spec.oriented(axis))
            moves.push_back({axis, oracle.orientation(axis, point), false});
        else
            moves.push_back({axis, 0, true});
    }
    return moves;
}

}  // namespace orwalk
