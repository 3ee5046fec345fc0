// Subcommand implementations behind the command-line binary, exposed as
// functions so they are testable in-process. Each command validates its
// inputs, runs the experiment, and writes CSV outputs plus manifest.json
// into out_dir. Exceptions signal failure; run_command maps them to exit
// codes (0 success, 2 config error, 3 solver failure).
#pragma once

#include <string>

#include "inswap/config.hpp"

namespace inswap {

// Checkpointed occupation/association accumulators for the configured
// dynamics (ins or pt), one run per replica.
void cmd_simulate(const Config& cfg, const std::string& out_dir);

// kappa per asymmetry, constrained rate per (asymmetry, deficit) cell, and
// the rates normalized to the reference asymmetry column.
void cmd_tables(const Config& cfg, const std::string& out_dir);

// Single-temperature constrained value function W with the controlled-rate
// tilt factors, one row per grid point.
void cmd_value_function(const Config& cfg, const std::string& out_dir);

// Association-constrained minimizers over the configured w1 grid: rate and
// the total-variation distance of the image from the product law.
void cmd_diagnose(const Config& cfg, const std::string& out_dir);

// One-off rate evaluation at a configured measure.
void cmd_rate(const Config& cfg, const std::string& out_dir);

// Dispatches name in {simulate, tables, value-function, diagnose, rate} and
// maps exceptions to exit codes; error text goes to stderr.
int run_command(const std::string& name, const Config& cfg,
                const std::string& out_dir);

}  // namespace inswap
