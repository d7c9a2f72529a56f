#ifndef HADAMARD_RUNNER_HPP
#define HADAMARD_RUNNER_HPP

#include "hadamard/config.hpp"

#include <string>

namespace hadamard {

struct CliOptions {
    std::string config_path;
    std::string out_dir;        // overrides [output] dir when non-empty
    int threads = 0;            // 0 = hardware default
    double tol = 0;             // overrides [numerics] ode_tol when > 0
    unsigned long seed = 20240811; // Monte Carlo validators
};

/// Executes the command named in the config.  Writes the command outputs and
/// a report.json into the output directory.  Returns the process exit code:
/// 0 success, 2 argument/config errors, 3 numerical failure.
int run(const CliOptions& opt);
int run_config(const RunConfig& cfg, const CliOptions& opt);

/// Schema documentation of every output file, shown by --help.
const char* output_schema_help();

} // namespace hadamard

#endif
