// slablab: passive-scalar transport experiments in rigid and moving slab
// domains.  Subcommands:
//   run   <config.json>  full experiment with CSV/JSON outputs
//   check <config.json>  envelope gates only (CI mode)
//   sweep <config.json>  alias of run for sweep-kind configs
// Exit codes: 0 pass, 1 envelope failure, 2 config error, 3 numerical failure.

#include "slab/experiments.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw slab::ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

int execute(const std::string& config_path, const std::string& out_dir, std::uint64_t seed,
            bool seed_given, int threads, bool check_only) {
    slab::Scenario s = slab::parse_scenario(read_file(config_path));
    if (seed_given) s.seed = seed;
    if (check_only) s.experiment = slab::ExperimentKind::envelope_check;
    slab::ExperimentResult res = slab::run_experiment(s, out_dir, threads);
    std::cout << res.summary_json << std::endl;
    return res.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"slablab: passive scalar transport laboratory for slab domains"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    int threads = 1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("config", config_path, "scenario JSON file")->required();
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--seed", seed, "random seed override");
        cmd->add_option("--threads", threads, "worker threads for sweeps/audits");
    };

    CLI::App* run = app.add_subcommand("run", "run the configured experiment");
    CLI::App* check = app.add_subcommand("check", "run envelope gates only (CI mode)");
    CLI::App* sweep = app.add_subcommand("sweep", "run a sweep experiment");
    add_common(run);
    add_common(check);
    add_common(sweep);

    CLI11_PARSE(app, argc, argv);

    try {
        const bool check_only = check->parsed();
        const bool seed_given = run->count("--seed") || check->count("--seed") ||
                                sweep->count("--seed");
        return execute(config_path, out_dir, seed, seed_given, threads, check_only);
    } catch (const slab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << std::endl;
        return 2;
    } catch (const slab::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << std::endl;
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 3;
    }
}
