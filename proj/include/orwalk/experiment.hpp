#pragma once

// Experiment runner: executes a validated config, writes CSV/JSON/SVG
// outputs atomically, and returns the manifest. Identical config + seed
// reproduce byte-identical data files for any thread count.

#include <chrono>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "orwalk/bounds.hpp"
#include "orwalk/config.hpp"
#include "orwalk/csv.hpp"
#include "orwalk/estimators.hpp"
#include "orwalk/fit.hpp"
#include "orwalk/manifest.hpp"
#include "orwalk/spectral.hpp"
#include "orwalk/svg.hpp"
#include "orwalk/torus.hpp"

namespace orwalk {

struct RunOptions {
    int threads = 0;  // 0 = hardware concurrency
    std::string out_override;
    std::optional<std::uint64_t> seed_override;
};

namespace detail {

using OutputList = std::vector<std::pair<std::string, std::string>>;  // (filename, content)

inline nlohmann::json model_json(const ModelSpec& m) {
    nlohmann::json j;
    j["dimension"] = m.dimension;
    j["oriented_axes"] = m.oriented_axes();
    j["master_seed"] = m.master_seed;
    return j;
}

inline void run_msd(const ExperimentConfig& cfg, const RunOptions& opts, OutputList& out) {
    EnsembleOptions eo;
    eo.n_paths = cfg.n_paths;
    eo.master_seed = cfg.model.master_seed;
    eo.averaging = cfg.averaging;
    eo.threads = opts.threads;
    eo.event_cap = cfg.event_cap;
    const MsdEstimate est = estimate_msd(cfg.model, cfg.times, eo);

    CsvTable t;
    t.header = {"t", "value", "std_err", "n_paths", "cesaro"};
    for (std::size_t k = 0; k < est.times.size(); ++k)
        t.rows.push_back({est.times[k], est.mean_sq[k], est.std_err[k],
                          static_cast<double>(est.n_paths), est.cesaro[k]});
    out.emplace_back("msd.csv", t.to_string());

    nlohmann::json j;
    j["model"] = model_json(cfg.model);
    j["estimator"] = "msd";
    j["n_paths"] = est.n_paths;
    j["averaging"] = cfg.averaging == Averaging::annealed ? "annealed" : "quenched";
    j["master_seed"] = est.master_seed;
    j["times"] = est.times;
    out.emplace_back("msd.json", j.dump(2) + "\n");

    if (cfg.plot) {
        PlotSeries data{"E(t)", est.times, est.mean_sq, est.std_err};
        PlotSeries ces{"Cesaro", est.times, est.cesaro, {}};
        ces.markers = false;
        out.emplace_back("msd.svg",
                         render_loglog_svg("mean-square displacement", "t", "E(t)", {data, ces}));
    }
}

inline void run_laplace(const ExperimentConfig& cfg, const RunOptions& opts, OutputList& out) {
    EnsembleOptions eo;
    eo.n_paths = cfg.n_paths;
    eo.master_seed = cfg.model.master_seed;
    eo.averaging = cfg.averaging;
    eo.threads = opts.threads;
    eo.event_cap = cfg.event_cap;
    const LaplaceEstimate est =
        estimate_laplace(cfg.model, cfg.lambdas, eo, cfg.truncation_factor);

    CsvTable t;
    t.header = {"lambda", "value", "std_err", "n_paths"};
    for (std::size_t k = 0; k < est.lambdas.size(); ++k)
        t.rows.push_back({est.lambdas[k], est.values[k], est.std_err[k],
                          static_cast<double>(est.n_paths)});
    out.emplace_back("laplace.csv", t.to_string());

    nlohmann::json j;
    j["model"] = model_json(cfg.model);
    j["estimator"] = "laplace";
    j["n_paths"] = est.n_paths;
    j["master_seed"] = est.master_seed;
    j["lambdas"] = est.lambdas;
    j["truncation_times"] = est.truncation_time;
    out.emplace_back("laplace.json", j.dump(2) + "\n");

    if (cfg.plot) {
        PlotSeries data{"laplace", est.lambdas, est.values, est.std_err};
        out.emplace_back("laplace.svg",
                         render_loglog_svg("Laplace transform of E", "lambda", "value", {data}));
    }
}

inline void run_torus_checks(const ExperimentConfig& cfg, const RunOptions&, OutputList& out) {
    TorusOptions topts;
    topts.max_lines = cfg.torus_max_lines;
    const TorusProcess tp(cfg.model.dimension, cfg.torus_side, cfg.model.oriented_mask, topts);
    const double lambda = cfg.torus_lambda;

    std::vector<IdentityReport> checks = check_generator_invariants(tp);

    SplitMix64 rng(mix64(cfg.model.master_seed ^ 0x70725573ULL));
    auto random_vector = [&](Eigen::Index n) {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = 2.0 * rng.uniform01() - 1.0;
        return v;
    };

    double worst_i = 0, worst_ii = 0, worst_iii = 0;
    for (int r = 0; r < cfg.torus_random_profiles; ++r) {
        const Eigen::VectorXd u = random_vector(tp.base_count());
        const auto rep = check_lemma_calculations(tp, u);
        worst_i = std::max({worst_i, rep[0].max_residual, rep[1].max_residual});
        worst_ii = std::max(worst_ii, rep[2].max_residual);
        worst_iii = std::max(worst_iii, rep[3].max_residual);
    }
    checks.push_back(make_report("lemma_i_random_profiles", worst_i, 1e-12));
    checks.push_back(make_report("lemma_ii_random_profiles", worst_ii, 1e-12));
    checks.push_back(make_report("lemma_iii_random_profiles", worst_iii, 1e-12));

    if (tp.dimension() >= 2 && tp.oriented(1) && tp.oriented(2)) {
        double worst_s = 0, worst_res = 0;
        for (int r = 0; r < cfg.torus_random_two_line; ++r) {
            Eigen::MatrixXd v(tp.base_count(), tp.base_count());
            for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = 2.0 * rng.uniform01() - 1.0;
            const auto rep = check_S_on_two_line(tp, 1, 2, v, lambda);
            worst_s = std::max(worst_s, rep[0].max_residual);
            worst_res = std::max(worst_res, rep[1].max_residual);
        }
        checks.push_back(make_report("two_line_S_action_random", worst_s, 1e-10));
        checks.push_back(make_report("two_line_resolvent_random", worst_res, 1e-10));
    }

    // variational checks against the resolvent
    const Eigen::VectorXd phi = tp.observable_phi();
    const double r_g = resolvent_quadratic(tp, phi, lambda, GeneratorKind::full);
    const double r_s = resolvent_quadratic(tp, phi, lambda, GeneratorKind::symmetric);
    double worst_dom = 0.0;
    for (int r = 0; r < 50; ++r) {
        const Eigen::VectorXd psi = random_vector(static_cast<Eigen::Index>(tp.state_count()));
        worst_dom = std::max(worst_dom, variational_value(tp, psi, phi, lambda) - r_g);
    }
    checks.push_back(make_report("variational_dominance", worst_dom, 1e-10));
    const Eigen::VectorXd psi_star = variational_maximizer(tp, phi, lambda);
    checks.push_back(make_report("variational_attainment",
                                 std::abs(variational_value(tp, psi_star, phi, lambda) - r_g),
                                 1e-8));
    checks.push_back(make_report("resolvent_G_below_S", std::max(0.0, r_g - r_s), 1e-12));

    bool all = true;
    nlohmann::json jchecks = nlohmann::json::array();
    for (const auto& c : checks) {
        all = all && c.pass;
        jchecks.push_back({{"identity", c.name},
                           {"max_residual", c.max_residual},
                           {"tolerance", c.tolerance},
                           {"pass", c.pass}});
    }
    nlohmann::json j;
    j["model"] = model_json(cfg.model);
    j["torus_side"] = tp.side();
    j["lines"] = tp.line_count();
    j["states"] = tp.state_count();
    j["degenerate_side"] = tp.degenerate_side();
    j["lambda"] = lambda;
    j["checks"] = jchecks;
    j["all_pass"] = all;
    out.emplace_back("torus_report.json", j.dump(2) + "\n");

    if (cfg.torus_export_matrices) {
        for (const auto& [name, mat] :
             {std::pair<const char*, const Eigen::MatrixXd*>{"torus_G.txt", &tp.generator()},
              {"torus_S.txt", &tp.symmetric_part()},
              {"torus_A.txt", &tp.antisymmetric_part()}}) {
            std::ostringstream os;
            export_triplets(*mat, os);
            out.emplace_back(name, os.str());
        }
    }
}

inline void run_bounds(const ExperimentConfig& cfg, const RunOptions&, OutputList& out) {
    const BoundName name = bound_name_from(cfg.bounds_integral);
    const BoundIntegral bi = make_bound_integral(name, cfg.bounds_dimension, cfg.bounds_constant);

    CsvTable t;
    t.header = {"lambda", "value", "error_estimate", "C_used"};
    for (double lam : cfg.lambdas) {
        const QuadratureResult r = evaluate_bound(bi, lam);
        t.rows.push_back({lam, r.value, r.error_estimate, bi.constant_c});
    }
    const std::string stem = "bounds_" + cfg.bounds_integral;
    out.emplace_back(stem + ".csv", t.to_string());

    nlohmann::json j;
    j["integral"] = cfg.bounds_integral;
    j["dimension"] = bi.dimension;
    j["effective_dims"] = bi.effective_dims;
    j["constant_C"] = bi.constant_c;
    j["lambdas"] = cfg.lambdas;
    out.emplace_back(stem + ".json", j.dump(2) + "\n");

    if (cfg.plot) {
        PlotSeries data{cfg.bounds_integral, cfg.lambdas, {}, {}};
        for (const auto& row : t.rows) data.y.push_back(row[1]);
        out.emplace_back(stem + ".svg",
                         render_loglog_svg("bound integral", "lambda", "value", {data}));
    }
}

inline void run_fit(const ExperimentConfig& cfg, const RunOptions&, OutputList& out) {
    const CsvTable table = read_csv(cfg.fit_input);
    std::string xcol = cfg.fit_x_column;
    if (xcol.empty()) {
        if (table.column("lambda") >= 0) xcol = "lambda";
        else if (table.column("t") >= 0) xcol = "t";
        else throw ConfigError("fit: no lambda/t column in " + cfg.fit_input +
                               "; set fit.x_column");
    }
    const std::vector<double> xs_all = table.column_values(xcol);
    const std::vector<double> ys_all = table.column_values(cfg.fit_series);

    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < xs_all.size(); ++k) {
        if (xs_all[k] < cfg.fit_x_min || xs_all[k] > cfg.fit_x_max) continue;
        if (!(xs_all[k] > 0.0) || !(ys_all[k] > 0.0)) continue;
        xs.push_back(xs_all[k]);
        ys.push_back(ys_all[k]);
    }
    const FitResult fit = fit_growth(xs, ys, fit_model_from(cfg.fit_model));

    nlohmann::json j;
    j["input"] = cfg.fit_input;
    j["x_column"] = xcol;
    j["series"] = cfg.fit_series;
    j["model"] = fit_model_str(fit.model);
    j["parameter"] = fit.parameter;
    j["intercept"] = fit.intercept;
    j["max_rel_residual"] = fit.max_rel_residual;
    j["window"] = {fit.x_range.first, fit.x_range.second};
    j["points"] = fit.points;
    out.emplace_back("fit.json", j.dump(2) + "\n");

    if (cfg.plot) {
        PlotSeries data{"data", xs, ys, {}};
        data.line = false;
        PlotSeries fitted{"fit", xs, {}, {}};
        fitted.markers = false;
        for (double x : xs) fitted.y.push_back(fit_predict(fit, x));
        out.emplace_back("fit.svg", render_loglog_svg("growth-law fit", xcol, cfg.fit_series,
                                                      {data, fitted}));
    }
}

}  // namespace detail

inline RunManifest run(ExperimentConfig cfg, const RunOptions& opts = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    if (opts.seed_override) {
        cfg.model.master_seed = *opts.seed_override;
        cfg.echo["model.master_seed"] = *opts.seed_override;
    }
    if (!opts.out_override.empty()) {
        cfg.out_dir = opts.out_override;
        cfg.echo["output.dir"] = opts.out_override;
    }

    detail::OutputList outputs;
    if (cfg.kind == "msd") detail::run_msd(cfg, opts, outputs);
    else if (cfg.kind == "laplace") detail::run_laplace(cfg, opts, outputs);
    else if (cfg.kind == "torus-checks") detail::run_torus_checks(cfg, opts, outputs);
    else if (cfg.kind == "bounds") detail::run_bounds(cfg, opts, outputs);
    else if (cfg.kind == "exponent-fit") detail::run_fit(cfg, opts, outputs);
    else throw ConfigError("run: unknown kind " + cfg.kind);

    RunManifest manifest;
    manifest.config_echo = cfg.echo;
    const std::filesystem::path dir(cfg.out_dir);
    for (const auto& [name, content] : outputs) {
        atomic_write(dir / name, content);
        manifest.record(dir / name, content);
    }
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    atomic_write(dir / "manifest.json", manifest.to_json().dump(2) + "\n");
    return manifest;
}

}  // namespace orwalk
