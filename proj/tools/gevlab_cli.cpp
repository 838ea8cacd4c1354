#include <iostream>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "gevlab/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"gevlab: Borel-Laplace solutions of singularly perturbed Cauchy problems"};
    app.require_subcommand(1, 1);

    std::string config, out = "out";
    int threads = 0;
    long long seed = -1;
    for (const char* name : {"check", "coeffs", "solve", "fit", "campaign"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config, "run configuration (JSON)")->required();
        sub->add_option("--out", out, "output directory");
        sub->add_option("--threads", threads, "OpenMP threads (0: runtime default)");
        sub->add_option("--seed", seed, "overrides the config seed");
    }
    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();
    if (threads > 0) omp_set_num_threads(threads);

    try {
        gevlab::RunConfig cfg = gevlab::load_config(config);
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
        gevlab::CommandResult r = gevlab::run_command(command, cfg, out);
        std::cout << r.summary.dump() << "\n";
        if (r.exit_code == gevlab::kExitAssumption)
            std::cerr << "assumption check failed; see " << out << "/assumptions.json or the summary\n";
        return r.exit_code;
    } catch (const gevlab::Error& e) {
        std::cerr << e.what() << "\n";
        switch (e.code()) {
            case gevlab::ErrorCode::Parse: return gevlab::kExitParse;
            case gevlab::ErrorCode::Assumption: return gevlab::kExitAssumption;
            default: return gevlab::kExitNumerical;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return gevlab::kExitNumerical;
    }
}
