#pragma once

#include <iosfwd>

#include "cyclefem/config.hpp"

namespace cyclefem::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kConfigFailure = 2, kNumericalFailure = 3, kIoFailure = 4 };

// Each stage writes into config.out_dir. A stage that fails part way writes
// what it has and then throws.

/// equilibria.csv and hopf_brackets.txt.
void run_equilibria(const RunConfig& config, std::ostream& log);
/// hopf_point.txt, seeded from [hopf] seed_* or the bracket report.
void run_hopf(const RunConfig& config, std::ostream& log);
/// cycles.csv, cycles_summary.csv, one proj_<a>_<b>.dat per projection and manifest.txt.
void run_cycles(const RunConfig& config, std::ostream& log);

/// `<tool> equilibria|hopf|cycles --config <path> [--out <dir>]`.
int run(int argc, const char* const* argv, std::ostream& log);

}  // namespace cyclefem::cli
