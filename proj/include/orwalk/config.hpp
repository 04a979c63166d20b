#pragma once

// Declarative experiment configs: flat "key = value" text with dotted
// section keys. Unknown keys and keys outside the experiment kind's schema
// are rejected, defaults are recorded back into the echoed config.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "orwalk/bounds.hpp"
#include "orwalk/errors.hpp"
#include "orwalk/estimators.hpp"
#include "orwalk/fit.hpp"
#include "orwalk/model.hpp"

namespace orwalk {

struct ExperimentConfig {
    std::string kind;  // msd | laplace | torus-checks | bounds | exponent-fit

    ModelSpec model = ModelSpec::manhattan(2, 0);

    std::vector<double> times;
    std::vector<double> lambdas;

    int n_paths = 1000;
    Averaging averaging = Averaging::annealed;
    std::uint64_t event_cap = 100'000'000;
    double truncation_factor = 40.0;

    int torus_side = 3;
    int torus_random_profiles = 20;
    int torus_random_two_line = 10;
    double torus_lambda = 1.0;
    bool torus_export_matrices = false;
    int torus_max_lines = 14;

    std::string bounds_integral;
    int bounds_dimension = 2;
    double bounds_constant = -1.0;  // < 0: instantiate from the lemma ratio

    std::string fit_input;
    std::string fit_x_column;
    std::string fit_series = "value";
    std::string fit_model;
    double fit_x_min = 0.0;
    double fit_x_max = std::numeric_limits<double>::infinity();

    std::string out_dir = "out";
    bool plot = false;

    nlohmann::json echo;  // fully resolved key set, defaults included
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<double> parse_list(const std::string& v, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cell = trim(cell);
        if (cell.empty()) continue;
        try {
            out.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw ConfigError("config: bad number '" + cell + "' in " + key);
        }
    }
    if (out.empty()) throw ConfigError("config: empty list for " + key);
    return out;
}

inline double parse_double(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad number '" + v + "' for " + key);
    }
}

inline std::int64_t parse_int(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const std::int64_t x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer '" + v + "' for " + key);
    }
}

inline std::uint64_t parse_uint64(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const std::uint64_t x = std::stoull(v, &pos, 0);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad unsigned integer '" + v + "' for " + key);
    }
}

inline bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: bad boolean '" + v + "' for " + key);
}

// Grid 10^(i / per_decade) for integer i covering [lo, hi]; hits decade
// boundaries exactly, ascending.
inline std::vector<double> log_grid(double lo, double hi, int per_decade,
                                    const std::string& what) {
    if (!(lo > 0.0) || !(hi > lo)) throw ConfigError("config: bad " + what + " range");
    if (per_decade < 1) throw ConfigError("config: " + what + ".per_decade must be >= 1");
    const auto i_lo = static_cast<std::int64_t>(std::lround(std::log10(lo) * per_decade));
    const auto i_hi = static_cast<std::int64_t>(std::lround(std::log10(hi) * per_decade));
    std::vector<double> out;
    for (std::int64_t i = i_lo; i <= i_hi; ++i)
        out.push_back(std::pow(10.0, static_cast<double>(i) / per_decade));
    return out;
}

}  // namespace detail

inline ExperimentConfig parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
        if (kv.count(key)) throw ConfigError("config: duplicate key " + key);
        kv[key] = val;
    }

    auto take = [&](const std::string& key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };

    ExperimentConfig cfg;
    const std::string* kind = take("experiment.kind");
    if (!kind) throw ConfigError("config: experiment.kind is required");
    cfg.kind = *kind;
    static const std::set<std::string> kKinds = {"msd", "laplace", "torus-checks", "bounds",
                                                 "exponent-fit"};
    if (!kKinds.count(cfg.kind))
        throw ConfigError("config: unknown experiment.kind '" + cfg.kind + "'");

    // keys each kind consumes
    static const std::set<std::string> kCommon = {"experiment.kind", "model.master_seed",
                                                  "output.dir", "output.plot"};
    static const std::map<std::string, std::set<std::string>> kSchema = {
        {"msd",
         {"model.dimension", "model.oriented_axes", "times.min", "times.max", "times.per_decade",
          "times.list", "paths.n", "paths.averaging", "paths.event_cap"}},
        {"laplace",
         {"model.dimension", "model.oriented_axes", "lambdas.min", "lambdas.max",
          "lambdas.per_decade", "lambdas.list", "paths.n", "paths.averaging", "paths.event_cap",
          "laplace.truncation_factor"}},
        {"torus-checks",
         {"model.dimension", "model.oriented_axes", "torus.side", "torus.random_profiles",
          "torus.random_two_line", "torus.lambda", "torus.export_matrices", "torus.max_lines"}},
        {"bounds",
         {"bounds.integral", "bounds.dimension", "bounds.constant", "lambdas.min", "lambdas.max",
          "lambdas.per_decade", "lambdas.list"}},
        {"exponent-fit",
         {"fit.input", "fit.x_column", "fit.series", "fit.model", "fit.x_min", "fit.x_max"}},
    };
    const auto& allowed = kSchema.at(cfg.kind);
    for (const auto& [key, val] : kv) {
        if (!kCommon.count(key) && !allowed.count(key))
            throw ConfigError("config: key '" + key + "' is not valid for kind '" + cfg.kind +
                              "'");
    }

    // model
    int dim = 2;
    if (const auto* v = take("model.dimension"))
        dim = static_cast<int>(detail::parse_int(*v, "model.dimension"));
    std::uint64_t seed = 0;
    if (const auto* v = take("model.master_seed")) seed = detail::parse_uint64(*v, "model.master_seed");
    std::vector<int> axes;
    if (const auto* v = take("model.oriented_axes")) {
        if (*v == "all") {
            for (int i = 1; i <= dim; ++i) axes.push_back(i);
        } else {
            for (double x : detail::parse_list(*v, "model.oriented_axes"))
                axes.push_back(static_cast<int>(x));
        }
    } else {
        for (int i = 1; i <= dim; ++i) axes.push_back(i);
    }
    try {
        cfg.model = ModelSpec::with_axes(dim, axes, seed);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    // grids
    if (const auto* v = take("times.list")) {
        cfg.times = detail::parse_list(*v, "times.list");
    } else if (take("times.min") || take("times.max")) {
        const auto* lo = take("times.min");
        const auto* hi = take("times.max");
        if (!lo || !hi) throw ConfigError("config: times.min and times.max must come together");
        int pd = 32;
        if (const auto* p = take("times.per_decade"))
            pd = static_cast<int>(detail::parse_int(*p, "times.per_decade"));
        cfg.times = detail::log_grid(detail::parse_double(*lo, "times.min"),
                                     detail::parse_double(*hi, "times.max"), pd, "times");
    }
    if (const auto* v = take("lambdas.list")) {
        cfg.lambdas = detail::parse_list(*v, "lambdas.list");
    } else {
        double lo = 1e-10, hi = 1e-1;
        if (const auto* v2 = take("lambdas.min")) lo = detail::parse_double(*v2, "lambdas.min");
        if (const auto* v2 = take("lambdas.max")) hi = detail::parse_double(*v2, "lambdas.max");
        int pd = 9;
        if (const auto* p = take("lambdas.per_decade"))
            pd = static_cast<int>(detail::parse_int(*p, "lambdas.per_decade"));
        auto grid = detail::log_grid(lo, hi, pd, "lambdas");
        cfg.lambdas.assign(grid.rbegin(), grid.rend());  // descending
    }

    // paths
    if (const auto* v = take("paths.n"))
        cfg.n_paths = static_cast<int>(detail::parse_int(*v, "paths.n"));
    if (const auto* v = take("paths.averaging")) {
        if (*v == "annealed") cfg.averaging = Averaging::annealed;
        else if (*v == "quenched") cfg.averaging = Averaging::quenched;
        else throw ConfigError("config: paths.averaging must be annealed or quenched");
    }
    if (const auto* v = take("paths.event_cap"))
        cfg.event_cap = detail::parse_uint64(*v, "paths.event_cap");
    if (const auto* v = take("laplace.truncation_factor"))
        cfg.truncation_factor = detail::parse_double(*v, "laplace.truncation_factor");

    // torus
    if (const auto* v = take("torus.side"))
        cfg.torus_side = static_cast<int>(detail::parse_int(*v, "torus.side"));
    if (const auto* v = take("torus.random_profiles"))
        cfg.torus_random_profiles = static_cast<int>(detail::parse_int(*v, "torus.random_profiles"));
    if (const auto* v = take("torus.random_two_line"))
        cfg.torus_random_two_line = static_cast<int>(detail::parse_int(*v, "torus.random_two_line"));
    if (const auto* v = take("torus.lambda"))
        cfg.torus_lambda = detail::parse_double(*v, "torus.lambda");
    if (const auto* v = take("torus.export_matrices"))
        cfg.torus_export_matrices = detail::parse_bool(*v, "torus.export_matrices");
    if (const auto* v = take("torus.max_lines"))
        cfg.torus_max_lines = static_cast<int>(detail::parse_int(*v, "torus.max_lines"));

    // bounds
    if (const auto* v = take("bounds.integral")) {
        try {
            bound_name_from(*v);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        cfg.bounds_integral = *v;
    }
    if (const auto* v = take("bounds.dimension"))
        cfg.bounds_dimension = static_cast<int>(detail::parse_int(*v, "bounds.dimension"));
    if (const auto* v = take("bounds.constant"))
        cfg.bounds_constant = detail::parse_double(*v, "bounds.constant");

    // fit
    if (const auto* v = take("fit.input")) cfg.fit_input = *v;
    if (const auto* v = take("fit.x_column")) cfg.fit_x_column = *v;
    if (const auto* v = take("fit.series")) cfg.fit_series = *v;
    if (const auto* v = take("fit.model")) {
        try {
            fit_model_from(*v);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        cfg.fit_model = *v;
    }
    if (const auto* v = take("fit.x_min")) cfg.fit_x_min = detail::parse_double(*v, "fit.x_min");
    if (const auto* v = take("fit.x_max")) cfg.fit_x_max = detail::parse_double(*v, "fit.x_max");

    // output
    if (const auto* v = take("output.dir")) cfg.out_dir = *v;
    if (const auto* v = take("output.plot")) cfg.plot = detail::parse_bool(*v, "output.plot");

    // kind-specific requirements
    if (cfg.kind == "msd" && cfg.times.empty())
        throw ConfigError("config: msd requires times.list or times.min/max");
    if (cfg.kind == "bounds" && cfg.bounds_integral.empty())
        throw ConfigError("config: bounds requires bounds.integral");
    if (cfg.kind == "exponent-fit") {
        if (cfg.fit_input.empty()) throw ConfigError("config: exponent-fit requires fit.input");
        if (cfg.fit_model.empty()) throw ConfigError("config: exponent-fit requires fit.model");
    }

    // echo with resolved defaults
    nlohmann::json& e = cfg.echo;
    e["experiment.kind"] = cfg.kind;
    e["model.dimension"] = cfg.model.dimension;
    e["model.oriented_axes"] = cfg.model.oriented_axes();
    e["model.master_seed"] = cfg.model.master_seed;
    e["output.dir"] = cfg.out_dir;
    e["output.plot"] = cfg.plot;
    if (cfg.kind == "msd" || cfg.kind == "laplace") {
        e["paths.n"] = cfg.n_paths;
        e["paths.averaging"] = cfg.averaging == Averaging::annealed ? "annealed" : "quenched";
        e["paths.event_cap"] = cfg.event_cap;
    }
    if (cfg.kind == "msd") e["times"] = cfg.times;
    if (cfg.kind == "laplace") {
        e["lambdas"] = cfg.lambdas;
        e["laplace.truncation_factor"] = cfg.truncation_factor;
    }
    if (cfg.kind == "bounds") {
        e["bounds.integral"] = cfg.bounds_integral;
        e["bounds.dimension"] = cfg.bounds_dimension;
        e["lambdas"] = cfg.lambdas;
    }
    if (cfg.kind == "torus-checks") {
        e["torus.side"] = cfg.torus_side;
        e["torus.random_profiles"] = cfg.torus_random_profiles;
        e["torus.random_two_line"] = cfg.torus_random_two_line;
        e["torus.lambda"] = cfg.torus_lambda;
        e["torus.export_matrices"] = cfg.torus_export_matrices;
    }
    if (cfg.kind == "exponent-fit") {
        e["fit.input"] = cfg.fit_input;
        e["fit.series"] = cfg.fit_series;
        e["fit.model"] = cfg.fit_model;
        e["fit.x_min"] = cfg.fit_x_min;
        e["fit.x_max"] = std::isfinite(cfg.fit_x_max) ? nlohmann::json(cfg.fit_x_max)
                                                      : nlohmann::json("inf");
        if (!cfg.fit_x_column.empty()) e["fit.x_column"] = cfg.fit_x_column;
    }
    return cfg;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config_text(text);
}

}  // namespace orwalk
