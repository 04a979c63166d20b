// Torus environment process: generator structure, the preliminary-calculation
// identities, variational formula, resolvent oracles, correlation curve.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "orwalk/quadrature.hpp"
#include "orwalk/spectral.hpp"
#include "orwalk/splitmix.hpp"
#include "orwalk/torus.hpp"
#include "orwalk/torus_mc.hpp"

using namespace orwalk;

namespace {

Eigen::VectorXd random_vector(Eigen::Index n, SplitMix64& rng) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = 2.0 * rng.uniform01() - 1.0;
    return v;
}

// Brute-force resolvent oracle: long-double Gauss-Jordan with full pivoting,
// independent of Eigen's solver path and of double rounding.
double resolvent_longdouble(const TorusProcess& tp, const Eigen::VectorXd& f, double lambda,
                            const Eigen::MatrixXd& op) {
    const int n = static_cast<int>(tp.state_count());
    std::vector<std::vector<long double>> m(n, std::vector<long double>(n + 1, 0.0L));
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c)
            m[r][c] = (r == c ? static_cast<long double>(lambda) : 0.0L) -
                      static_cast<long double>(op(r, c));
        m[r][n] = static_cast<long double>(f(r));
    }
    std::vector<int> col_of(n);
    std::vector<bool> used_row(n, false), used_col(n, false);
    for (int step = 0; step < n; ++step) {
        int pr = -1, pc = -1;
        long double best = -1.0L;
        for (int r = 0; r < n; ++r) {
            if (used_row[r]) continue;
            for (int c = 0; c < n; ++c) {
                if (used_col[c]) continue;
                const long double a = std::abs(m[r][c]);
                if (a > best) {
                    best = a;
                    pr = r;
                    pc = c;
                }
            }
        }
        used_row[pr] = true;
        used_col[pc] = true;
        col_of[pc] = pr;
        const long double piv = m[pr][pc];
        for (int c = 0; c <= n; ++c) m[pr][c] /= piv;
        for (int r = 0; r < n; ++r) {
            if (r == pr) continue;
            const long double factor = m[r][pc];
            if (factor == 0.0L) continue;
            for (int c = 0; c <= n; ++c) m[r][c] -= factor * m[pr][c];
        }
    }
    long double acc = 0.0L;
    for (int c = 0; c < n; ++c)
        acc += static_cast<long double>(f(c)) * m[col_of[c]][n];
    return static_cast<double>(acc / n);
}

}  // namespace

TEST_CASE("generator structure on the acceptance tori") {
    struct Case {
        int d, L;
        std::uint32_t mask;
        int lines;
    };
    const Case cases[] = {{2, 3, 0x3, 6}, {2, 4, 0x3, 8}, {3, 2, 0x7, 12}, {3, 2, 0x3, 8}};
    for (const auto& c : cases) {
        CAPTURE(c.d, c.L, c.mask);
        const TorusProcess tp(c.d, c.L, c.mask);
        CHECK(tp.line_count() == c.lines);
        CHECK(tp.state_count() == (std::size_t{1} << c.lines));
        for (const auto& rep : check_generator_invariants(tp)) {
            CAPTURE(rep.name, rep.max_residual);
            CHECK(rep.pass);
        }
    }
    CHECK(TorusProcess(3, 2, 0x7).degenerate_side());
    CHECK_FALSE(TorusProcess(2, 3, 0x3).degenerate_side());
}

TEST_CASE("state-space cap is enforced") {
    CHECK_THROWS_AS(TorusProcess(3, 3, 0x7), ResourceCapError);  // 27 lines
    TorusOptions opts;
    opts.max_lines = 8;
    CHECK_THROWS_AS(TorusProcess(2, 5, 0x3, opts), ResourceCapError);
}

TEST_CASE("antisymmetric part carries only the oriented axes") {
    // A = (1/2) sum over oriented axes of diag(w(i,0)) (P_i - P_i^{-1})
    for (std::uint32_t mask : {0x3u, 0x7u}) {
        const TorusProcess tp(3, 2, mask);
        const auto n = static_cast<Eigen::Index>(tp.state_count());
        Eigen::MatrixXd a_formula = Eigen::MatrixXd::Zero(n, n);
        for (int axis = 1; axis <= 3; ++axis) {
            if (!tp.oriented(axis)) continue;
            const Eigen::VectorXd w0 = tp.line_observable(axis, origin_coord());
            const Eigen::MatrixXd diff =
                tp.shift_matrix(axis, false) - tp.shift_matrix(axis, true);
            a_formula += 0.5 * w0.asDiagonal() * diff;
        }
        CHECK((tp.antisymmetric_part() - a_formula).cwiseAbs().maxCoeff() < 1e-14);
    }
    // shift matrices are mutually transposed permutations
    const TorusProcess tp(2, 3, 0x3);
    const Eigen::MatrixXd p = tp.shift_matrix(2, false);
    const Eigen::MatrixXd pinv = tp.shift_matrix(2, true);
    CHECK((p * pinv - Eigen::MatrixXd::Identity(p.rows(), p.cols())).cwiseAbs().maxCoeff() == 0.0);
    CHECK((p.transpose() - pinv).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("profile observable identities, delta profile by hand") {
    const TorusProcess tp(2, 3, 0x3);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(tp.base_count());
    u(tp.base_index(1, origin_coord())) = 1.0;

    const Eigen::VectorXd psi = tp.profile_observable(u);
    const Eigen::VectorXd phi = tp.observable_phi();
    CHECK(tp.inner(phi, psi) == Catch::Approx(1.0).margin(1e-14));
    CHECK(tp.inner(psi, psi) == Catch::Approx(1.0).margin(1e-14));
    // wrapped gradient of the delta has two unit jumps; with S = (G+G*)/2
    // the Dirichlet form is half their squared sum: -(1/2) * 2 = -1
    CHECK(tp.inner(psi, tp.symmetric_part() * psi) == Catch::Approx(-1.0).margin(1e-13));

    for (const auto& rep : check_lemma_calculations(tp, u)) {
        CAPTURE(rep.name, rep.max_residual);
        CHECK(rep.pass);
    }
}

TEST_CASE("profile observable identities, random profiles") {
    SplitMix64 rng(2718);
    for (const auto& [d, L, mask] : {std::tuple<int, int, std::uint32_t>{2, 3, 0x3},
                                     {2, 4, 0x3},
                                     {3, 2, 0x7},
                                     {3, 2, 0x3}}) {
        const TorusProcess tp(d, L, mask);
        for (int trial = 0; trial < 20; ++trial) {
            const Eigen::VectorXd u = random_vector(tp.base_count(), rng);
            for (const auto& rep : check_lemma_calculations(tp, u, 1e-10)) {
                CAPTURE(d, L, mask, trial, rep.name, rep.max_residual);
                CHECK(rep.pass);
            }
        }
    }
}

TEST_CASE("S action on two-line observables") {
    SplitMix64 rng(31415);
    SECTION("single indicator coefficient, d=3 L=2") {
        const TorusProcess tp(3, 2, 0x7);
        Eigen::MatrixXd v = Eigen::MatrixXd::Zero(tp.base_count(), tp.base_count());
        v(1, 2) = 1.0;
        for (const auto& rep : check_S_on_two_line(tp, 1, 2, v)) {
            CAPTURE(rep.name, rep.max_residual);
            CHECK(rep.pass);
        }
    }
    SECTION("constant coefficients are harmonic") {
        const TorusProcess tp(2, 3, 0x3);
        const Eigen::MatrixXd v =
            Eigen::MatrixXd::Constant(tp.base_count(), tp.base_count(), 0.7);
        const Eigen::VectorXd zeta = tp.two_line_observable(1, 2, v);
        CHECK((tp.symmetric_part() * zeta).cwiseAbs().maxCoeff() < 1e-12);
    }
    SECTION("random coefficients, both tori") {
        for (const auto& [d, L, mask] : {std::tuple<int, int, std::uint32_t>{2, 3, 0x3},
                                         {3, 2, 0x7}}) {
            const TorusProcess tp(d, L, mask);
            for (int trial = 0; trial < 5; ++trial) {
                Eigen::MatrixXd v(tp.base_count(), tp.base_count());
                for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = 2.0 * rng.uniform01() - 1.0;
                for (const auto& rep : check_S_on_two_line(tp, 1, 2, v, 1.0)) {
                    CAPTURE(d, L, trial, rep.name, rep.max_residual);
                    CHECK(rep.pass);
                }
            }
        }
    }
}

TEST_CASE("resolvent quadratic form") {
    const TorusProcess tp(2, 3, 0x3);
    const Eigen::VectorXd phi = tp.observable_phi();

    SECTION("frozen cross-implementation value at lambda=1") {
        CHECK(resolvent_quadratic(tp, phi, 1.0) ==
              Catch::Approx(0.578559605095918).margin(1e-9));
    }
    SECTION("large-lambda asymptote") {
        const double lam = 1e6;
        CHECK(std::abs(lam * resolvent_quadratic(tp, phi, lam) - 1.0) < 1e-4);
    }
    SECTION("symmetrization only increases the form") {
        for (double lam : {0.1, 1.0}) {
            const double rg = resolvent_quadratic(tp, phi, lam, GeneratorKind::full);
            const double rs = resolvent_quadratic(tp, phi, lam, GeneratorKind::symmetric);
            CHECK(rg <= rs + 1e-12);
        }
    }
    SECTION("long-double full-pivot oracle") {
        const double rg = resolvent_quadratic(tp, phi, 1.0);
        const double oracle = resolvent_longdouble(tp, phi, 1.0, tp.generator());
        CHECK(std::abs(rg - oracle) < 1e-10);
    }
    SECTION("full-spectrum evaluation of the symmetric resolvent") {
        // G itself is nonnormal with eigenbasis condition ~1e12, so a
        // full-spectrum oracle is meaningful only for S; G is covered by
        // the long-double elimination above.
        const auto n = static_cast<Eigen::Index>(tp.state_count());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tp.symmetric_part());
        REQUIRE(es.info() == Eigen::Success);
        const Eigen::VectorXd coeffs = es.eigenvectors().transpose() * phi;
        double val = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            val += coeffs(i) * coeffs(i) / (1.0 - es.eigenvalues()(i));
        val /= static_cast<double>(tp.state_count());
        CHECK(std::abs(val - resolvent_quadratic(tp, phi, 1.0, GeneratorKind::symmetric)) <
              1e-10);
        CHECK(es.eigenvalues().maxCoeff() < 1e-12);  // S has nonpositive spectrum
    }
    SECTION("symmetric resolvent equals the half-weighted symbol sum") {
        // On the torus the profile space diagonalizes S with eigenvalues
        // -(1/2) d_hat at the discrete frequencies; phi is the delta profile.
        for (const auto& [d, L, mask] : {std::tuple<int, int, std::uint32_t>{2, 3, 0x3},
                                         {3, 2, 0x7},
                                         {3, 2, 0x3}}) {
            const TorusProcess t2(d, L, mask);
            const Eigen::VectorXd p2 = t2.observable_phi();
            for (double lam : {0.3, 1.0}) {
                double sum = 0.0;
                const int nb = t2.base_count();
                for (int k = 0; k < nb; ++k) {
                    int rem = k;
                    double dh = 0.0;
                    for (int axis = 2; axis <= d; ++axis) {
                        const int freq = rem % L;
                        rem /= L;
                        const double s = std::sin(M_PI * freq / L);
                        dh += 4.0 * s * s;
                    }
                    sum += 1.0 / (lam + 0.5 * dh);
                }
                sum /= nb;
                CHECK(resolvent_quadratic(t2, p2, lam, GeneratorKind::symmetric) ==
                      Catch::Approx(sum).margin(1e-12));
            }
        }
    }
    SECTION("lambda must be positive") {
        CHECK_THROWS_AS(resolvent_quadratic(tp, phi, 0.0), std::invalid_argument);
    }
}

TEST_CASE("variational formula") {
    const TorusProcess tp(2, 3, 0x3);
    const Eigen::VectorXd phi = tp.observable_phi();
    SplitMix64 rng(161803);

    SECTION("psi = 0 gives 0") {
        const Eigen::VectorXd zero =
            Eigen::VectorXd::Zero(static_cast<Eigen::Index>(tp.state_count()));
        CHECK(variational_value(tp, zero, phi, 1.0) == 0.0);
    }
    SECTION("every test function stays below the resolvent; the maximizer attains it") {
        for (double lam : {0.1, 1.0}) {
            const double rg = resolvent_quadratic(tp, phi, lam);
            for (int trial = 0; trial < 50; ++trial) {
                const Eigen::VectorXd psi =
                    random_vector(static_cast<Eigen::Index>(tp.state_count()), rng);
                CHECK(variational_value(tp, psi, phi, lam) <= rg + 1e-10);
            }
            const Eigen::VectorXd psi_star = variational_maximizer(tp, phi, lam);
            CHECK(std::abs(variational_value(tp, psi_star, phi, lam) - rg) < 1e-8);
        }
    }
    SECTION("the dropped term is nonnegative") {
        const auto n = static_cast<Eigen::Index>(tp.state_count());
        const Eigen::MatrixXd b = Eigen::MatrixXd::Identity(n, n) - tp.symmetric_part();
        for (int trial = 0; trial < 20; ++trial) {
            const Eigen::VectorXd psi = random_vector(n, rng);
            const Eigen::VectorXd a_psi = tp.antisymmetric_part() * psi;
            CHECK(tp.inner(a_psi, b.llt().solve(a_psi)) >= -1e-12);
        }
    }
}

TEST_CASE("matrix exponential") {
    SECTION("nilpotent block") {
        Eigen::MatrixXd a(2, 2);
        a << 0, 1, 0, 0;
        const Eigen::MatrixXd e = expm(a);
        CHECK(e(0, 0) == Catch::Approx(1.0).margin(1e-14));
        CHECK(e(0, 1) == Catch::Approx(1.0).margin(1e-14));
        CHECK(e(1, 0) == Catch::Approx(0.0).margin(1e-14));
        CHECK(e(1, 1) == Catch::Approx(1.0).margin(1e-14));
    }
    SECTION("against the symmetric eigendecomposition") {
        const TorusProcess tp(2, 3, 0x3);
        for (double t : {0.5, 3.0, 20.0}) {
            const Eigen::MatrixXd e = expm(t * tp.symmetric_part());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tp.symmetric_part());
            const Eigen::MatrixXd ref =
                es.eigenvectors() *
                (t * es.eigenvalues()).array().exp().matrix().asDiagonal() *
                es.eigenvectors().transpose();
            CHECK((e - ref).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("correlation curve") {
    const TorusProcess tp(2, 3, 0x3);
    const Eigen::VectorXd phi = tp.observable_phi();

    SECTION("t=0 gives the variance of phi") {
        const std::vector<double> ts{0.0};
        CHECK(correlation_curve(tp, phi, ts)[0] == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("frozen early values and the finite-torus plateau") {
        const std::vector<double> ts{0.5, 1.0, 2.0, 200.0, 400.0};
        const auto c = correlation_curve(tp, phi, ts);
        CHECK(c[0] == Catch::Approx(0.623417472693).margin(1e-9));
        CHECK(c[1] == Catch::Approx(0.442922698944).margin(1e-9));
        CHECK(c[2] == Catch::Approx(0.342403155669).margin(1e-9));
        // The shift dynamics is reducible on a finite torus (configurations
        // with all axis-1 lines aligned are invariant), so the correlation
        // converges to a positive plateau, 1/3 here, not to (E phi)^2 = 0.
        CHECK(std::abs(c[3] - c[4]) < 1e-10);
        CHECK(c[3] == Catch::Approx(1.0 / 3.0).margin(1e-9));
    }
    SECTION("torus Monte Carlo agrees with the matrix exponential") {
        const std::vector<double> ts{0.5, 1.0, 2.0};
        const auto exact = correlation_curve(tp, phi, ts);
        const auto mc = torus_correlation_mc(2, 3, 0x3, ts, 20'000, 424242);
        for (std::size_t k = 0; k < ts.size(); ++k) {
            CAPTURE(ts[k], mc.values[k], exact[k]);
            CHECK(std::abs(mc.values[k] - exact[k]) < 4.0 * mc.std_err[k]);
        }
    }
    SECTION("free-axis torus is also matched by its Monte Carlo") {
        const TorusProcess mixed(3, 2, 0x3);
        const Eigen::VectorXd phi3 = mixed.observable_phi();
        const std::vector<double> ts{0.5, 1.5};
        const auto exact = correlation_curve(mixed, phi3, ts);
        const auto mc = torus_correlation_mc(3, 2, 0x3, ts, 20'000, 777);
        for (std::size_t k = 0; k < ts.size(); ++k)
            CHECK(std::abs(mc.values[k] - exact[k]) < 4.0 * mc.std_err[k]);
    }
}

TEST_CASE("drift functional curve is the double integral of the correlation") {
    const TorusProcess tp(2, 3, 0x3);
    const Eigen::VectorXd phi = tp.observable_phi();
    // quadrature reference at a few times
    const auto& gl = GaussLegendre::order(32);
    for (double t : {0.5, 2.0, 7.0}) {
        double ref = 0.0;
        const int panels = 6;
        for (int p = 0; p < panels; ++p) {
            const double a = t * p / panels, b = t * (p + 1) / panels;
            for (std::size_t j = 0; j < gl.x.size(); ++j) {
                const double s = 0.5 * (a + b) + 0.5 * (b - a) * gl.x[j];
                const double w = 0.5 * (b - a) * gl.w[j];
                const std::vector<double> one{s};
                ref += w * (t - s) * correlation_curve(tp, phi, one)[0];
            }
        }
        const std::vector<double> tt{t};
        CHECK(drift_functional_curve(tp, phi, tt)[0] == Catch::Approx(2.0 * ref).epsilon(1e-9));
    }
}

TEST_CASE("resolvent matches the Laplace transform of the drift functional") {
    // 2/l^2 (phi,(l-G)^{-1}phi) vs int_0^T e^{-lt} E_G(t) dt at lambda = 1,
    // with E_G computed from the matrix exponential.
    const TorusProcess tp(2, 3, 0x3);
    const Eigen::VectorXd phi = tp.observable_phi();
    const double lambda = 1.0;
    const double resolvent_side =
        2.0 / (lambda * lambda) * resolvent_quadratic(tp, phi, lambda);

    const auto& gl = GaussLegendre::order(24);
    const double T = 40.0;
    const int panels = 40;
    std::vector<double> nodes, weights;
    for (int p = 0; p < panels; ++p) {
        const double lo = T * p / panels, hi = T * (p + 1) / panels;
        for (std::size_t i = 0; i < gl.x.size(); ++i) {
            nodes.push_back(0.5 * (lo + hi) + 0.5 * (hi - lo) * gl.x[i]);
            weights.push_back(0.5 * (hi - lo) * gl.w[i]);
        }
    }
    const std::vector<double> eg = drift_functional_curve(tp, phi, nodes);
    double total = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        total += weights[i] * std::exp(-lambda * nodes[i]) * eg[i];
    CHECK(std::abs(total - resolvent_side) / resolvent_side < 1e-6);
}
