#pragma once

// Resolvent and variational computations on the finite torus process,
// plus the algebraic identity checks that make it an exact oracle.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "orwalk/expm.hpp"
#include "orwalk/torus.hpp"

namespace orwalk {

enum class GeneratorKind { full, symmetric };

// (f, (lambda - G)^{-1} f)_pi by dense linear solve.
inline double resolvent_quadratic(const TorusProcess& tp, const Eigen::VectorXd& f, double lambda,
                                  GeneratorKind kind = GeneratorKind::full) {
    if (!(lambda > 0.0)) throw std::invalid_argument("resolvent_quadratic: lambda must be > 0");
    const auto n = static_cast<Eigen::Index>(tp.state_count());
    const Eigen::MatrixXd& op =
        kind == GeneratorKind::full ? tp.generator() : tp.symmetric_part();
    const Eigen::MatrixXd lhs = lambda * Eigen::MatrixXd::Identity(n, n) - op;
    const Eigen::VectorXd x = lhs.partialPivLu().solve(f);
    return tp.inner(f, x);
}

// Value of the variational functional
//   2 (phi, psi)_pi - (psi, (lambda - S) psi)_pi - (A psi, (lambda - S)^{-1} A psi)_pi,
// whose supremum over psi equals (phi, (lambda - G)^{-1} phi)_pi.
inline double variational_value(const TorusProcess& tp, const Eigen::VectorXd& psi,
                                const Eigen::VectorXd& phi, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("variational_value: lambda must be > 0");
    const auto n = static_cast<Eigen::Index>(tp.state_count());
    const Eigen::MatrixXd b =
        lambda * Eigen::MatrixXd::Identity(n, n) - tp.symmetric_part();
    const Eigen::VectorXd a_psi = tp.antisymmetric_part() * psi;
    const Eigen::VectorXd b_inv_a_psi = b.llt().solve(a_psi);
    return 2.0 * tp.inner(phi, psi) - tp.inner(psi, b * psi) - tp.inner(a_psi, b_inv_a_psi);
}

// Maximizer of the variational functional: solves the stationarity system
// (B - A B^{-1} A) psi = phi with B = lambda - S.
inline Eigen::VectorXd variational_maximizer(const TorusProcess& tp, const Eigen::VectorXd& phi,
                                             double lambda) {
    const auto n = static_cast<Eigen::Index>(tp.state_count());
    const Eigen::MatrixXd b =
        lambda * Eigen::MatrixXd::Identity(n, n) - tp.symmetric_part();
    const Eigen::MatrixXd& a = tp.antisymmetric_part();
    const Eigen::MatrixXd m = b - a * b.llt().solve(a);
    return m.llt().solve(phi);
}

// E[f(eta_0) f(eta_t)] = (f, e^{tG} f)_pi via matrix exponential.
inline std::vector<double> correlation_curve(const TorusProcess& tp, const Eigen::VectorXd& f,
                                             std::span<const double> times) {
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        if (t < 0.0) throw std::invalid_argument("correlation_curve: times must be >= 0");
        out.push_back(tp.inner(f, expm(t * tp.generator()) * f));
    }
    return out;
}

// Exact drift functional E_G(t) = 2 int_0^t (t-s) (f, e^{sG} f)_pi ds,
// through the block augmentation
//   M = [[G, f, 0], [0, 0, 1], [0, 0, 0]],
// whose exponential carries int_0^t (t-s) e^{sG} f ds in its last column.
inline std::vector<double> drift_functional_curve(const TorusProcess& tp,
                                                  const Eigen::VectorXd& f,
                                                  std::span<const double> times) {
    const auto n = static_cast<Eigen::Index>(tp.state_count());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 2, n + 2);
    m.topLeftCorner(n, n) = tp.generator();
    m.block(0, n, n, 1) = f;
    m(n, n + 1) = 1.0;
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        if (t < 0.0) throw std::invalid_argument("drift_functional_curve: times must be >= 0");
        const Eigen::MatrixXd e = expm(t * m);
        out.push_back(2.0 * tp.inner(f, e.block(0, n + 1, n, 1)));
    }
    return out;
}

// One named identity check: residual against a tolerance.
struct IdentityReport {
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

inline IdentityReport make_report(std::string name, double residual, double tol) {
    return {std::move(name), residual, tol, residual < tol};
}

// Structural generator checks: row sums, stationarity of pi, symmetry of S,
// antisymmetry of A, the S + A split, sign of off-diagonal rates, and the
// adjoint formula against the transpose.
inline std::vector<IdentityReport> check_generator_invariants(const TorusProcess& tp,
                                                              double tol = 1e-12) {
    const Eigen::MatrixXd& g = tp.generator();
    const Eigen::MatrixXd& gs = tp.adjoint_generator();
    const Eigen::MatrixXd& s = tp.symmetric_part();
    const Eigen::MatrixXd& a = tp.antisymmetric_part();
    const auto n = static_cast<Eigen::Index>(tp.state_count());

    std::vector<IdentityReport> out;
    out.push_back(make_report("row_sums_zero_G", g.rowwise().sum().cwiseAbs().maxCoeff(), tol));
    out.push_back(make_report("row_sums_zero_Gstar", gs.rowwise().sum().cwiseAbs().maxCoeff(), tol));
    out.push_back(make_report("pi_invariant_G", g.colwise().sum().cwiseAbs().maxCoeff() /
                              static_cast<double>(n), tol));
    out.push_back(make_report("pi_invariant_Gstar", gs.colwise().sum().cwiseAbs().maxCoeff() /
                              static_cast<double>(n), tol));
    out.push_back(make_report("adjoint_is_transpose", (gs - g.transpose()).cwiseAbs().maxCoeff(), tol));
    out.push_back(make_report("S_symmetric", (s - s.transpose()).cwiseAbs().maxCoeff(), tol));
    out.push_back(make_report("A_antisymmetric", (a + a.transpose()).cwiseAbs().maxCoeff(), tol));
    out.push_back(make_report("G_equals_S_plus_A", (g - s - a).cwiseAbs().maxCoeff(), tol));

    double neg = 0.0;
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c)
            if (r != c) neg = std::max(neg, std::max(0.0, -g(r, c)));
    out.push_back(make_report("offdiagonal_nonnegative", neg, tol));
    return out;
}

// Identities for profile observables psi = sum_x u(x) w(1, x):
//   (i)   (phi, psi)_pi = u(0) and (psi, psi)_pi = |u|^2
//   (ii)  (psi, S psi)_pi = -(1/2) sum_{i>=2} |grad+_i u|^2  (cyclic gradients)
//   (iii) A psi = -(1/2) sum_{i>=2} sum_x w(i,0) w(1,x) (u(x+e_i) - u(x-e_i))
// The 1/2 factors are forced by the normalizations S = (G + G*)/2 and
// A = (G - G*)/2; with them the variational identity is exact.
inline std::vector<IdentityReport> check_lemma_calculations(const TorusProcess& tp,
                                                            const Eigen::VectorXd& u,
                                                            double tol = 1e-12) {
    if (!tp.oriented(1))
        throw UnorientedAxisError("check_lemma_calculations: axis 1 must be oriented");
    const Eigen::VectorXd psi = tp.profile_observable(u);
    const Eigen::VectorXd phi = tp.observable_phi();

    std::vector<IdentityReport> out;
    const int u0_index = tp.base_index(1, origin_coord());
    out.push_back(make_report("lemma_i_phi_psi",
                              std::abs(tp.inner(phi, psi) - u(u0_index)), tol));
    out.push_back(make_report("lemma_i_psi_psi",
                              std::abs(tp.inner(psi, psi) - u.squaredNorm()), tol));

    double dirichlet = 0.0;
    for (int axis = 2; axis <= tp.dimension(); ++axis) {
        for (int x = 0; x < tp.base_count(); ++x) {
            const double diff = u(tp.shifted_base_index(1, x, axis, +1)) - u(x);
            dirichlet += diff * diff;
        }
    }
    out.push_back(make_report(
        "lemma_ii_dirichlet",
        std::abs(tp.inner(psi, tp.symmetric_part() * psi) + 0.5 * dirichlet), tol));

    // entrywise check of (iii)
    Eigen::VectorXd formula = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(tp.state_count()));
    for (int axis = 2; axis <= tp.dimension(); ++axis) {
        if (!tp.oriented(axis)) continue;
        const Eigen::VectorXd w_axis0 = tp.line_observable(axis, origin_coord());
        for (int x = 0; x < tp.base_count(); ++x) {
            const double grad = u(tp.shifted_base_index(1, x, axis, +1)) -
                                u(tp.shifted_base_index(1, x, axis, -1));
            if (grad == 0.0) continue;
            const Eigen::VectorXd w_1x = tp.line_observable(1, tp.base_at(1, x));
            formula -= 0.5 * grad * w_axis0.cwiseProduct(w_1x);
        }
    }
    const Eigen::VectorXd a_psi = tp.antisymmetric_part() * psi;
    out.push_back(make_report("lemma_iii_A_psi", (a_psi - formula).cwiseAbs().maxCoeff(), tol));
    return out;
}

// Coefficient-space action of S on two-line observables
// zeta = sum v(x,y) w(i,x) w(j,y): second differences of v in e_j on x,
// e_i on y, and diagonal e_k shifts for k != i, j (cyclic), each weighted 1/2.
inline Eigen::MatrixXd two_line_coefficient_action(const TorusProcess& tp, int axis_i, int axis_j,
                                                   const Eigen::MatrixXd& v) {
    const int nb = tp.base_count();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(nb, nb);
    for (int x = 0; x < nb; ++x) {
        for (int y = 0; y < nb; ++y) {
            double acc = 0.0;
            acc += 0.5 * (v(tp.shifted_base_index(axis_i, x, axis_j, +1), y) +
                          v(tp.shifted_base_index(axis_i, x, axis_j, -1), y) - 2.0 * v(x, y));
            acc += 0.5 * (v(x, tp.shifted_base_index(axis_j, y, axis_i, +1)) +
                          v(x, tp.shifted_base_index(axis_j, y, axis_i, -1)) - 2.0 * v(x, y));
            for (int k = 1; k <= tp.dimension(); ++k) {
                if (k == axis_i || k == axis_j) continue;
                acc += 0.5 * (v(tp.shifted_base_index(axis_i, x, k, +1),
                                tp.shifted_base_index(axis_j, y, k, +1)) +
                              v(tp.shifted_base_index(axis_i, x, k, -1),
                                tp.shifted_base_index(axis_j, y, k, -1)) - 2.0 * v(x, y));
            }
            out(x, y) = acc;
        }
    }
    return out;
}

// Checks that matrix-level S (and its resolvent) agree with the
// coefficient-space formula on two-line observables.
inline std::vector<IdentityReport> check_S_on_two_line(const TorusProcess& tp, int axis_i,
                                                       int axis_j, const Eigen::MatrixXd& v,
                                                       double lambda = 1.0, double tol = 1e-10) {
    if (tp.dimension() < 2) throw std::invalid_argument("check_S_on_two_line: need d >= 2");
    std::vector<IdentityReport> out;

    const Eigen::VectorXd zeta = tp.two_line_observable(axis_i, axis_j, v);
    const Eigen::VectorXd s_zeta = tp.symmetric_part() * zeta;
    const Eigen::VectorXd s_formula =
        tp.two_line_observable(axis_i, axis_j, two_line_coefficient_action(tp, axis_i, axis_j, v));
    out.push_back(make_report("two_line_S_action",
                              (s_zeta - s_formula).cwiseAbs().maxCoeff(), tol));

    // resolvent coefficients: solve (lambda - S_coeff) s = v on coefficient space
    const int nb = tp.base_count();
    const int nn = nb * nb;
    Eigen::MatrixXd coeff_op(nn, nn);
    for (int col = 0; col < nn; ++col) {
        Eigen::MatrixXd e = Eigen::MatrixXd::Zero(nb, nb);
        e(col % nb, col / nb) = 1.0;
        const Eigen::MatrixXd se = two_line_coefficient_action(tp, axis_i, axis_j, e);
        for (int row = 0; row < nn; ++row)
            coeff_op(row, col) = lambda * (row == col ? 1.0 : 0.0) - se(row % nb, row / nb);
    }
    Eigen::VectorXd v_flat(nn);
    for (int col = 0; col < nb; ++col)
        for (int row = 0; row < nb; ++row) v_flat(col * nb + row) = v(row, col);
    const Eigen::VectorXd s_flat = coeff_op.partialPivLu().solve(v_flat);
    Eigen::MatrixXd s_coeffs(nb, nb);
    for (int col = 0; col < nb; ++col)
        for (int row = 0; row < nb; ++row) s_coeffs(row, col) = s_flat(col * nb + row);

    const auto n = static_cast<Eigen::Index>(tp.state_count());
    const Eigen::MatrixXd lhs =
        lambda * Eigen::MatrixXd::Identity(n, n) - tp.symmetric_part();
    const Eigen::VectorXd resolvent_zeta = lhs.llt().solve(zeta);
    const Eigen::VectorXd induced = tp.two_line_observable(axis_i, axis_j, s_coeffs);
    out.push_back(make_report("two_line_resolvent_coefficients",
                              (resolvent_zeta - induced).cwiseAbs().maxCoeff(), tol));
    return out;
}

// Plain-text sparse triplet export (row col value per line, 0-based).
inline void export_triplets(const Eigen::MatrixXd& m, std::ostream& os) {
    os << m.rows() << " " << m.cols() << "\n";
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            if (m(r, c) != 0.0) {
                char buf[96];
                std::snprintf(buf, sizeof(buf), "%lld %lld %.17g\n",
                              static_cast<long long>(r), static_cast<long long>(c), m(r, c));
                os << buf;
            }
}

}  // namespace orwalk
