// Command-line front end: runs experiments from config files.
//
// Exit codes: 0 ok, 2 config/validation failure, 3 resource cap exceeded,
// 4 I/O failure.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "orwalk/experiment.hpp"
#include "orwalk/version.hpp"

namespace {

int thread_count_from_env() {
    if (const char* env = std::getenv("ORWALK_THREADS")) {
        try {
            return std::max(0, std::stoi(env));
        } catch (const std::exception&) {
            std::cerr << "orwalk: ignoring bad ORWALK_THREADS value '" << env << "'\n";
        }
    }
    return 0;
}

int execute(const std::string& config_path, const orwalk::RunOptions& opts,
            const char* expected_kind) {
    try {
        orwalk::ExperimentConfig cfg = orwalk::parse_config_file(config_path);
        if (expected_kind && cfg.kind != expected_kind)
            throw orwalk::ConfigError("fit subcommand expects experiment.kind = exponent-fit");
        const orwalk::RunManifest manifest = orwalk::run(std::move(cfg), opts);
        std::cout << "wrote " << manifest.outputs.size() << " file(s) in "
                  << manifest.wall_seconds << " s\n";
        for (const auto& [file, sum] : manifest.outputs)
            std::cout << "  " << file << "  " << sum << "\n";
        return 0;
    } catch (const orwalk::ConfigError& e) {
        std::cerr << "orwalk: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "orwalk: " << e.what() << "\n";
        return 2;
    } catch (const orwalk::ResourceCapError& e) {
        std::cerr << "orwalk: " << e.what() << "\n";
        return 3;
    } catch (const orwalk::IoError& e) {
        std::cerr << "orwalk: " << e.what() << "\n";
        return 4;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "orwalk: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random walks on randomly-oriented lattices: simulation, "
                 "spectral checks, and bound integrals"};
    app.set_version_flag("--version", orwalk::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    orwalk::RunOptions opts;
    int threads_flag = -1;
    std::uint64_t seed_flag = 0;
    bool seed_given = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config_path, "experiment config file")->required();
        sub->add_option("--threads", threads_flag, "worker thread count (0 = hardware)");
        sub->add_option("--out", opts.out_override, "override output directory");
        sub->add_option("--seed", seed_flag, "override master seed")
            ->each([&](const std::string&) { seed_given = true; });
    };

    CLI::App* run_cmd = app.add_subcommand("run", "run an experiment config");
    add_common(run_cmd);
    CLI::App* fit_cmd = app.add_subcommand("fit", "fit a growth law to a produced CSV");
    add_common(fit_cmd);

    CLI11_PARSE(app, argc, argv);

    opts.threads = threads_flag >= 0 ? threads_flag : thread_count_from_env();
    if (seed_given) opts.seed_override = seed_flag;

    if (run_cmd->parsed()) return execute(config_path, opts, nullptr);
    return execute(config_path, opts, "exponent-fit");
}
