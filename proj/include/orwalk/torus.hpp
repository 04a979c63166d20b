#pragma once

// Exact finite-state realization of the environment seen from the walker
// on a d-dimensional torus of side L.
//
// State space: all sign assignments of the oriented axes' lines,
// m = d_fix * L^(d-1) lines, 2^m states. A jump of the walker translates
// the whole environment, so the generator acts through the cyclic shift
// permutations tau_i. Oriented axes shift in the direction of the line
// through the origin; free axes hop symmetrically. All matrices are dense;
// this is a correctness oracle, not a scalability target.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "orwalk/errors.hpp"
#include "orwalk/model.hpp"

namespace orwalk {

struct TorusOptions {
    int max_lines = 14;  // reject state spaces above 2^max_lines
};

class TorusProcess {
public:
    TorusProcess(int dimension, int side, std::uint32_t oriented_mask, TorusOptions opts = {})
        : d_(dimension), side_(side), oriented_mask_(oriented_mask) {
        if (d_ < 1 || d_ > kMaxDimension)
            throw std::invalid_argument("TorusProcess: dimension must be in [1, 8]");
        if (side_ < 2) throw std::invalid_argument("TorusProcess: side must be >= 2");
        if (oriented_mask_ == 0 || (oriented_mask_ >> d_) != 0)
            throw std::invalid_argument("TorusProcess: bad oriented axis set");

        base_count_ = 1;
        for (int k = 1; k < d_; ++k) base_count_ *= side_;
        m_ = 0;
        for (int i = 1; i <= d_; ++i)
            if (oriented(i)) m_ += base_count_;
        if (m_ > opts.max_lines)
            throw ResourceCapError("TorusProcess: " + std::to_string(m_) + " lines exceed cap of " +
                                   std::to_string(opts.max_lines) + " (2^m states)");
        n_states_ = std::size_t{1} << m_;

        enumerate_lines();
        build_matrices();
    }

    int dimension() const noexcept { return d_; }
    int side() const noexcept { return side_; }
    bool oriented(int axis) const noexcept { return (oriented_mask_ >> (axis - 1)) & 1u; }
    int line_count() const noexcept { return m_; }
    int base_count() const noexcept { return base_count_; }  // lines per oriented axis, L^(d-1)
    std::size_t state_count() const noexcept { return n_states_; }

    // L = 2 makes tau_i and tau_i^{-1} coincide, so the centered differences
    // that drive the antisymmetric part degenerate. Allowed but flagged.
    bool degenerate_side() const noexcept { return side_ == 2; }

    const Eigen::MatrixXd& generator() const noexcept { return g_; }
    const Eigen::MatrixXd& adjoint_generator() const noexcept { return gstar_; }
    const Eigen::MatrixXd& symmetric_part() const noexcept { return s_; }
    const Eigen::MatrixXd& antisymmetric_part() const noexcept { return a_; }

    Eigen::VectorXd stationary() const {
        return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n_states_),
                                         1.0 / static_cast<double>(n_states_));
    }

    double inner(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const {
        return f.dot(g) / static_cast<double>(n_states_);
    }

    // Composition operator (P_axis f)(w) = f(tau_axis w) as a 0/1 matrix.
    Eigen::MatrixXd shift_matrix(int axis, bool inverse) const {
        Eigen::MatrixXd p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_states_),
                                                  static_cast<Eigen::Index>(n_states_));
        const auto& perm = inverse ? line_perm_bwd_[axis - 1] : line_perm_fwd_[axis - 1];
        for (std::size_t s = 0; s < n_states_; ++s)
            p(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(shift_state(s, perm))) = 1.0;
        return p;
    }

    // --- line / base indexing (oriented axes only) ---

    // Bases of U_axis enumerated with mixed-radix digits over the other
    // coordinates, ascending coordinate order, least significant first.
    Coord base_at(int axis, int index) const {
        Coord b = origin_coord();
        int r = index;
        for (int k = 0; k < d_; ++k) {
            if (k == axis - 1) continue;
            b[k] = r % side_;
            r /= side_;
        }
        return b;
    }

    int base_index(int axis, const Coord& base) const {
        int idx = 0, mul = 1;
        for (int k = 0; k < d_; ++k) {
            if (k == axis - 1) continue;
            const int c = static_cast<int>(((base[k] % side_) + side_) % side_);
            idx += c * mul;
            mul *= side_;
        }
        return idx;
    }

    int line_index(int axis, const Coord& base) const {
        if (!oriented(axis)) throw UnorientedAxisError("TorusProcess: axis carries no lines");
        int offset = 0;
        for (int i = 1; i < axis; ++i)
            if (oriented(i)) offset += base_count_;
        return offset + base_index(axis, base);
    }

    double sign_of(std::size_t state, int line) const noexcept {
        return ((state >> line) & 1u) ? -1.0 : +1.0;
    }

    // --- observables ---

    Eigen::VectorXd line_observable(int axis, const Coord& base) const {
        const int line = line_index(axis, base);
        Eigen::VectorXd f(static_cast<Eigen::Index>(n_states_));
        for (std::size_t s = 0; s < n_states_; ++s)
            f(static_cast<Eigen::Index>(s)) = sign_of(s, line);
        return f;
    }

    // phi(w) = w(1, 0), the drift observable.
    Eigen::VectorXd observable_phi() const { return line_observable(1, origin_coord()); }

    // psi(w) = sum_x u(x) w(1, x) for a profile u on U_1 (indexed by base_at(1, .)).
    Eigen::VectorXd profile_observable(const Eigen::VectorXd& u) const {
        if (u.size() != base_count_)
            throw std::invalid_argument("profile_observable: u must have L^(d-1) entries");
        Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_states_));
        for (int x = 0; x < base_count_; ++x) {
            if (u(x) == 0.0) continue;
            const int line = line_index(1, base_at(1, x));
            for (std::size_t s = 0; s < n_states_; ++s)
                f(static_cast<Eigen::Index>(s)) += u(x) * sign_of(s, line);
        }
        return f;
    }

    // zeta(w) = sum_{x,y} v(x, y) w(i, x) w(j, y) for coefficients on U_i x U_j.
    Eigen::VectorXd two_line_observable(int axis_i, int axis_j, const Eigen::MatrixXd& v) const {
        if (axis_i == axis_j) throw std::invalid_argument("two_line_observable: axes must differ");
        if (v.rows() != base_count_ || v.cols() != base_count_)
            throw std::invalid_argument("two_line_observable: v must be L^(d-1) x L^(d-1)");
        Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_states_));
        for (int x = 0; x < base_count_; ++x) {
            const int li = line_index(axis_i, base_at(axis_i, x));
            for (int y = 0; y < base_count_; ++y) {
                const double c = v(x, y);
                if (c == 0.0) continue;
                const int lj = line_index(axis_j, base_at(axis_j, y));
                for (std::size_t s = 0; s < n_states_; ++s)
                    f(static_cast<Eigen::Index>(s)) += c * sign_of(s, li) * sign_of(s, lj);
            }
        }
        return f;
    }

    // Shift a base index along `axis_k` by +-1 (cyclic), within U_axis.
    int shifted_base_index(int axis, int base_idx, int axis_k, int delta) const {
        Coord b = base_at(axis, base_idx);
        b[axis_k - 1] = ((b[axis_k - 1] + delta) % side_ + side_) % side_;
        return base_index(axis, b);
    }

private:
    void enumerate_lines() {
        line_perm_fwd_.assign(static_cast<std::size_t>(d_), {});
        line_perm_bwd_.assign(static_cast<std::size_t>(d_), {});
        for (int j = 1; j <= d_; ++j) {
            auto& fwd = line_perm_fwd_[j - 1];
            auto& bwd = line_perm_bwd_[j - 1];
            fwd.resize(static_cast<std::size_t>(m_));
            bwd.resize(static_cast<std::size_t>(m_));
            for (int i = 1; i <= d_; ++i) {
                if (!oriented(i)) continue;
                const int offset = line_index(i, origin_coord());
                for (int x = 0; x < base_count_; ++x) {
                    if (i == j) {
                        fwd[offset + x] = offset + x;
                        bwd[offset + x] = offset + x;
                    } else {
                        // tau_j w (i, x) = w(i, x + e_j)
                        fwd[offset + x] = offset + shifted_base_index(i, x, j, +1);
                        bwd[offset + x] = offset + shifted_base_index(i, x, j, -1);
                    }
                }
            }
        }
    }

    std::size_t shift_state(std::size_t s, const std::vector<int>& perm) const noexcept {
        // new sign at line l = old sign at perm[l]
        std::size_t t = 0;
        for (int l = 0; l < m_; ++l)
            if ((s >> perm[l]) & 1u) t |= std::size_t{1} << l;
        return t;
    }

    void build_matrices() {
        const auto n = static_cast<Eigen::Index>(n_states_);
        g_ = Eigen::MatrixXd::Zero(n, n);
        gstar_ = Eigen::MatrixXd::Zero(n, n);
        std::vector<int> origin_line(static_cast<std::size_t>(d_) + 1, -1);
        for (int i = 1; i <= d_; ++i)
            if (oriented(i)) origin_line[i] = line_index(i, origin_coord());

        for (std::size_t s = 0; s < n_states_; ++s) {
            const auto row = static_cast<Eigen::Index>(s);
            for (int i = 1; i <= d_; ++i) {
                const auto fwd = static_cast<Eigen::Index>(shift_state(s, line_perm_fwd_[i - 1]));
                const auto bwd = static_cast<Eigen::Index>(shift_state(s, line_perm_bwd_[i - 1]));
                double w_fwd = 0.5, w_bwd = 0.5;
                if (oriented(i)) {
                    const double w0 = sign_of(s, origin_line[i]);
                    w_fwd = 0.5 * (1.0 + w0);
                    w_bwd = 0.5 * (1.0 - w0);
                }
                g_(row, fwd) += w_fwd;
                g_(row, bwd) += w_bwd;
                g_(row, row) -= 1.0;
                // adjoint swaps the oriented weights
                gstar_(row, fwd) += w_bwd;
                gstar_(row, bwd) += w_fwd;
                gstar_(row, row) -= 1.0;
            }
        }
        s_ = 0.5 * (g_ + gstar_);
        a_ = 0.5 * (g_ - gstar_);
    }

    int d_;
    int side_;
    std::uint32_t oriented_mask_;
    int base_count_ = 0;
    int m_ = 0;
    std::size_t n_states_ = 0;
    std::vector<std::vector<int>> line_perm_fwd_;
    std::vector<std::vector<int>> line_perm_bwd_;
    Eigen::MatrixXd g_, gstar_, s_, a_;
};

}  // namespace orwalk
