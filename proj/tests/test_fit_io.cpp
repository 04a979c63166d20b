// Config parsing, experiment orchestration, manifests, reproducibility,
// and a CLI round trip.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "orwalk/config.hpp"
#include "orwalk/csv.hpp"
#include "orwalk/experiment.hpp"
#include "orwalk/manifest.hpp"

using namespace orwalk;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("orwalk_test_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) { return read_file(p); }

}  // namespace

TEST_CASE("config parsing") {
    SECTION("a complete msd config") {
        const ExperimentConfig cfg = parse_config_text(R"(
# comment line
experiment.kind = msd
model.dimension = 2
model.oriented_axes = 1,2
model.master_seed = 12345
times.list = 1, 10, 100
paths.n = 50
output.dir = /tmp/x
)");
        CHECK(cfg.kind == "msd");
        CHECK(cfg.model.dimension == 2);
        CHECK(cfg.model.master_seed == 12345);
        CHECK(cfg.times == std::vector<double>{1.0, 10.0, 100.0});
        CHECK(cfg.n_paths == 50);
        CHECK(cfg.out_dir == "/tmp/x");
        CHECK(cfg.echo["model.master_seed"] == 12345);
    }
    SECTION("defaults are filled and echoed") {
        const ExperimentConfig cfg = parse_config_text(
            "experiment.kind = msd\ntimes.list = 1,2\n");
        CHECK(cfg.model.dimension == 2);
        CHECK(cfg.model.oriented_axes() == std::vector<int>{1, 2});
        CHECK(cfg.n_paths == 1000);
        CHECK(cfg.echo["model.master_seed"] == 0);
    }
    SECTION("unknown keys are rejected") {
        CHECK_THROWS_AS(parse_config_text("experiment.kind = msd\ntimes.list = 1\nmodle.dim = 2\n"),
                        ConfigError);
        // keys from another kind's schema are rejected too
        CHECK_THROWS_AS(
            parse_config_text("experiment.kind = msd\ntimes.list = 1\nbounds.integral = upper_S9\n"),
            ConfigError);
    }
    SECTION("malformed values are rejected") {
        CHECK_THROWS_AS(parse_config_text("experiment.kind = msd\ntimes.list = 1,zebra\n"),
                        ConfigError);
        CHECK_THROWS_AS(parse_config_text("experiment.kind = flight\n"), ConfigError);
        CHECK_THROWS_AS(parse_config_text("experiment.kind = msd\n"), ConfigError);  // no grid
        CHECK_THROWS_AS(parse_config_text("experiment.kind = msd\ntimes.list = 1\n"
                                          "model.dimension = 11\n"),
                        ConfigError);
        CHECK_THROWS_AS(parse_config_text("experiment.kind = msd\ntimes.list = 1\n"
                                          "times.list = 2\n"),
                        ConfigError);  // duplicate key
    }
    SECTION("log grids hit decades exactly") {
        const ExperimentConfig cfg = parse_config_text(
            "experiment.kind = msd\ntimes.min = 1\ntimes.max = 1e4\ntimes.per_decade = 32\n");
        CHECK(cfg.times.size() == 129);
        CHECK(cfg.times.front() == 1.0);
        CHECK(cfg.times[32] == 10.0);
        CHECK(cfg.times.back() == 10000.0);
    }
}

TEST_CASE("checksums and atomic writes") {
    CHECK(checksum_hex("") == "cbf29ce484222325");
    const fs::path dir = temp_dir("atomic");
    atomic_write(dir / "a.txt", "hello\n");
    CHECK(slurp(dir / "a.txt") == "hello\n");
    CHECK_FALSE(fs::exists(dir / "a.txt.tmp"));
}

TEST_CASE("msd run produces a complete, reproducible output set") {
    const fs::path dir1 = temp_dir("msd1");
    const fs::path dir2 = temp_dir("msd2");
    const std::string cfg_text =
        "experiment.kind = msd\nmodel.dimension = 1\nmodel.master_seed = 7\n"
        "times.list = 1, 10\npaths.n = 400\noutput.plot = true\n";

    ExperimentConfig cfg = parse_config_text(cfg_text);
    RunOptions o1;
    o1.threads = 1;
    o1.out_override = dir1.string();
    const RunManifest m1 = run(cfg, o1);

    RunOptions o2;
    o2.threads = 3;
    o2.out_override = dir2.string();
    const RunManifest m2 = run(parse_config_text(cfg_text), o2);

    // thread count must not leak into the data
    CHECK(slurp(dir1 / "msd.csv") == slurp(dir2 / "msd.csv"));
    CHECK(slurp(dir1 / "msd.json") == slurp(dir2 / "msd.json"));

    // manifest lists every produced file with a correct checksum
    std::set<std::string> listed;
    for (const auto& [f, sum] : m1.outputs) {
        listed.insert(f);
        CHECK(checksum_hex(slurp(dir1 / f)) == sum);
    }
    std::set<std::string> present;
    for (const auto& e : fs::directory_iterator(dir1)) {
        if (e.path().filename() != "manifest.json") present.insert(e.path().filename().string());
    }
    CHECK(listed == present);
    CHECK(fs::exists(dir1 / "manifest.json"));

    // the manifest echoes the resolved config
    const auto mj = nlohmann::json::parse(slurp(dir1 / "manifest.json"));
    CHECK(mj["config"]["model.master_seed"] == 7);
    CHECK(mj["outputs"].size() == m1.outputs.size());

    // plots are derived: data files identical whether or not plots are on
    const fs::path dir3 = temp_dir("msd3");
    ExperimentConfig cfg3 = parse_config_text(
        "experiment.kind = msd\nmodel.dimension = 1\nmodel.master_seed = 7\n"
        "times.list = 1, 10\npaths.n = 400\noutput.plot = false\n");
    RunOptions o3;
    o3.threads = 2;
    o3.out_override = dir3.string();
    run(cfg3, o3);
    CHECK(slurp(dir1 / "msd.csv") == slurp(dir3 / "msd.csv"));
    CHECK(slurp(dir1 / "msd.svg").substr(0, 4) == "<svg");

    // CSV columns per the interface
    const CsvTable t = read_csv((dir1 / "msd.csv").string());
    CHECK(t.header == std::vector<std::string>{"t", "value", "std_err", "n_paths", "cesaro"});
    CHECK(t.rows.size() == 2);

    // the d=1 oracle under the estimator's seed scheme
    const double v10 = t.rows[1][1];
    const double se10 = t.rows[1][2];
    CHECK(std::abs(v10 - 110.0) < 4.0 * se10);
}

TEST_CASE("seed override changes data, same seed reproduces it") {
    const std::string cfg_text =
        "experiment.kind = msd\nmodel.dimension = 2\ntimes.list = 5\npaths.n = 100\n";
    const fs::path a = temp_dir("seed_a"), b = temp_dir("seed_b"), c = temp_dir("seed_c");
    RunOptions oa;
    oa.out_override = a.string();
    oa.seed_override = 11;
    run(parse_config_text(cfg_text), oa);
    RunOptions ob;
    ob.out_override = b.string();
    ob.seed_override = 12;
    run(parse_config_text(cfg_text), ob);
    RunOptions oc;
    oc.out_override = c.string();
    oc.seed_override = 11;
    run(parse_config_text(cfg_text), oc);
    CHECK(slurp(a / "msd.csv") != slurp(b / "msd.csv"));
    CHECK(slurp(a / "msd.csv") == slurp(c / "msd.csv"));
}

TEST_CASE("laplace run and CSV schema") {
    const fs::path dir = temp_dir("laplace");
    ExperimentConfig cfg = parse_config_text(
        "experiment.kind = laplace\nmodel.dimension = 1\nmodel.master_seed = 3\n"
        "lambdas.list = 1\npaths.n = 2000\n");
    RunOptions o;
    o.out_override = dir.string();
    run(cfg, o);
    const CsvTable t = read_csv((dir / "laplace.csv").string());
    CHECK(t.header == std::vector<std::string>{"lambda", "value", "std_err", "n_paths"});
    CHECK(std::abs(t.rows[0][1] - 3.0) < 4.0 * t.rows[0][2]);
}

TEST_CASE("torus-checks run reports all identities green") {
    const fs::path dir = temp_dir("torus");
    ExperimentConfig cfg = parse_config_text(
        "experiment.kind = torus-checks\nmodel.dimension = 2\ntorus.side = 3\n"
        "torus.export_matrices = true\n");
    RunOptions o;
    o.out_override = dir.string();
    run(cfg, o);
    const auto j = nlohmann::json::parse(slurp(dir / "torus_report.json"));
    CHECK(j["all_pass"] == true);
    CHECK(j["lines"] == 6);
    CHECK(j["states"] == 64);
    for (const auto& c : j["checks"]) {
        CAPTURE(c["identity"], c["max_residual"]);
        CHECK(c["pass"] == true);
    }
    // triplet export present and parsable: header "rows cols"
    const std::string g = slurp(dir / "torus_G.txt");
    CHECK(g.substr(0, 5) == "64 64");
}

TEST_CASE("bounds run matches the closed form through the CLI surface") {
    const fs::path dir = temp_dir("bounds");
    ExperimentConfig cfg = parse_config_text(
        "experiment.kind = bounds\nbounds.integral = upper_S9\nbounds.dimension = 2\n"
        "lambdas.list = 1\n");
    RunOptions o;
    o.out_override = dir.string();
    run(cfg, o);
    const CsvTable t = read_csv((dir / "bounds_upper_S9.csv").string());
    CHECK(t.header ==
          std::vector<std::string>{"lambda", "value", "error_estimate", "C_used"});
    CHECK(std::abs(t.rows[0][1] - 1.0 / std::sqrt(5.0)) < 1e-8);
}

TEST_CASE("exponent-fit run on synthetic and produced data") {
    const fs::path dir = temp_dir("fit");
    // synthetic exact power CSV
    CsvTable t;
    t.header = {"lambda", "value"};
    for (double lam = 1e-2; lam > 0.9e-6; lam /= 2.0)
        t.rows.push_back({lam, 3.0 * std::pow(lam, -0.75)});
    atomic_write(dir / "power.csv", t.to_string());

    ExperimentConfig cfg = parse_config_text(
        "experiment.kind = exponent-fit\nfit.input = " + (dir / "power.csv").string() +
        "\nfit.model = power\noutput.plot = true\n");
    RunOptions o;
    o.out_override = dir.string();
    run(cfg, o);
    const auto j = nlohmann::json::parse(slurp(dir / "fit.json"));
    CHECK(std::abs(j["parameter"].get<double>() + 0.75) < 1e-12);
    CHECK(j["max_rel_residual"].get<double>() < 1e-12);
    CHECK(fs::exists(dir / "fit.svg"));

    // missing column is a config error
    ExperimentConfig bad = parse_config_text(
        "experiment.kind = exponent-fit\nfit.input = " + (dir / "power.csv").string() +
        "\nfit.model = power\nfit.series = wrong\n");
    RunOptions ob;
    ob.out_override = dir.string();
    CHECK_THROWS_AS(run(bad, ob), ConfigError);
}

TEST_CASE("shipped sample configs stay parseable") {
    const fs::path dir(ORWALK_CONFIG_DIR);
    REQUIRE(fs::exists(dir));
    int n = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() != ".cfg") continue;
        CAPTURE(e.path().filename().string());
        CHECK_NOTHROW(parse_config_file(e.path().string()));
        ++n;
    }
    CHECK(n >= 5);
}

TEST_CASE("CLI round trip with exit codes") {
    const fs::path dir = temp_dir("cli");
    {
        std::ofstream cfg(dir / "run.cfg");
        cfg << "experiment.kind = msd\nmodel.dimension = 1\nmodel.master_seed = 4\n"
            << "times.list = 1, 10\npaths.n = 200\n";
    }
    const std::string base = std::string(ORWALK_CLI_PATH);
    const std::string out = (dir / "out").string();
    const int rc = std::system(
        (base + " run " + (dir / "run.cfg").string() + " --out " + out + " >/dev/null").c_str());
    REQUIRE(rc != -1);
    CHECK(WEXITSTATUS(rc) == 0);
    CHECK(fs::exists(fs::path(out) / "msd.csv"));
    CHECK(fs::exists(fs::path(out) / "manifest.json"));

    {
        std::ofstream cfg(dir / "bad.cfg");
        cfg << "experiment.kind = msd\ntimes.list = 1\nnot.a.key = 1\n";
    }
    const int rc2 = std::system(
        (base + " run " + (dir / "bad.cfg").string() + " 2>/dev/null >/dev/null").c_str());
    CHECK(WEXITSTATUS(rc2) == 2);

    const int rc3 =
        std::system((base + " run " + (dir / "missing.cfg").string() + " 2>/dev/null").c_str());
    CHECK(WEXITSTATUS(rc3) == 4);

    // fit subcommand insists on an exponent-fit config
    const int rc4 = std::system(
        (base + " fit " + (dir / "run.cfg").string() + " 2>/dev/null >/dev/null").c_str());
    CHECK(WEXITSTATUS(rc4) == 2);

    // thread count from the environment changes nothing in the data
    const std::string out_env = (dir / "out_env").string();
    const int rc5 = std::system(("ORWALK_THREADS=2 " + base + " run " +
                                 (dir / "run.cfg").string() + " --out " + out_env +
                                 " >/dev/null")
                                    .c_str());
    CHECK(WEXITSTATUS(rc5) == 0);
    CHECK(slurp(fs::path(out) / "msd.csv") == slurp(fs::path(out_env) / "msd.csv"));

    // hitting the per-path event cap is a distinct exit code
    {
        std::ofstream cfg(dir / "capped.cfg");
        cfg << "experiment.kind = msd\nmodel.dimension = 2\ntimes.list = 1000\n"
            << "paths.n = 4\npaths.event_cap = 10\n";
    }
    const int rc6 = std::system(
        (base + " run " + (dir / "capped.cfg").string() + " 2>/dev/null >/dev/null").c_str());
    CHECK(WEXITSTATUS(rc6) == 3);
}
