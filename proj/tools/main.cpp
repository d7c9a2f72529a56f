#include "hadamard/runner.hpp"
#include "hadamard/version.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{
        "hadamard: ground states of aggregation-diffusion free energies on\n"
        "rotationally symmetric Cartan-Hadamard model manifolds.\n\n"
        "The command to run (solve-warp, ball-volume, distance, energy, check,\n"
        "spread, minimize, verify-inequalities) is named in the config file.\n"};
    app.footer(hadamard::output_schema_help());

    hadamard::CliOptions opt;
    app.add_option("--config", opt.config_path, "config file (key = value with [sections])")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--out", opt.out_dir, "output directory (overrides [output] dir)");
    app.add_option("--threads", opt.threads, "cap worker threads (0 = hardware)");
    app.add_option("--tol", opt.tol, "override numerics.ode_tol");
    app.add_option("--seed", opt.seed, "seed for the Monte Carlo validators");
    bool version = false;
    app.add_flag("--version", version, "print the library version and exit");

    CLI11_PARSE(app, argc, argv);
    if (version) {
        std::cout << "hadamard " << hadamard::kVersion << "\n";
        return 0;
    }
    return hadamard::run(opt);
}
