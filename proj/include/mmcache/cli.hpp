#pragma once

#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmcache/experiments.hpp"

namespace mmcache::experiments {

struct CliResult {
    std::optional<ExperimentSpec> spec;  // set on success
    int exit_code = 0;
    std::string message;  // help or error text when spec is empty
};

// Parses `run <experiment> [flags]` (program name excluded). The MMCACHE_OUT
// environment variable, when set, overrides --out.
inline CliResult cli_parse(const std::vector<std::string>& args) {
    CLI::App app{"Device-caching evaluation engine for mmWave cellular networks"};
    app.require_subcommand(1);

    ExperimentSpec spec;
    std::string config_path;
    std::string psi_mode = "random";

    CLI::App* run = app.add_subcommand("run", "run an experiment");
    run->add_option("experiment", spec.name, "one of: " + [] {
           std::string all;
           for (const auto& n : experiment_names()) all += n + " ";
           return all;
       }())
        ->required();
    run->add_option("--config", config_path, "parameter file (key = value)");
    run->add_option("--drops", spec.n_drops, "Monte-Carlo drops per campaign")
        ->check(CLI::PositiveNumber);
    run->add_option("--seed", spec.seed, "master seed");
    run->add_option("--jobs", spec.jobs, "worker threads (0 = hardware)");
    run->add_option("--out", spec.out_dir, "output directory");
    run->add_option("--K", spec.k_list, "cache sizes")->delimiter(',');
    run->add_option("--delta", spec.delta_list, "paired fractions")->delimiter(',');
    run->add_option("--xi", spec.xi_list, "popularity exponents")->delimiter(',');
    run->add_option("--psi-mode", psi_mode, "HD factor mode")
        ->check(CLI::IsMember({"random", "half", "one"}));
    run->add_option("--k-order", spec.k_order, "Laplace approximation order")
        ->check(CLI::NonNegativeNumber);
    run->add_option("--dump-records", spec.dump_records, "dump first N drop records");

    std::vector<const char*> argv;
    argv.push_back("mmcache");
    for (const auto& a : args) argv.push_back(a.c_str());

    CliResult result;
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        result.exit_code = e.get_exit_code();
        std::ostringstream os;
        if (result.exit_code == 0)
            os << app.help();
        else
            os << "error: " << e.what() << "\n" << app.help();
        result.message = os.str();
        return result;
    }

    try {
        if (!config_path.empty()) spec.params = load_params(config_path);
        bool known = false;
        for (const auto& n : experiment_names()) known = known || n == spec.name;
        if (!known) throw std::invalid_argument("unknown experiment '" + spec.name + "'");
    } catch (const std::exception& e) {
        result.exit_code = 1;
        result.message = std::string("error: ") + e.what() + "\n";
        return result;
    }

    if (psi_mode == "half") spec.psi_mode = PsiMode::half;
    else if (psi_mode == "one") spec.psi_mode = PsiMode::one;
    else spec.psi_mode = PsiMode::random;

    if (const char* env = std::getenv("MMCACHE_OUT")) spec.out_dir = env;

    result.spec = std::move(spec);
    return result;
}

}  // namespace mmcache::experiments
