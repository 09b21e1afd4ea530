#pragma once

#include "chwave/io.hpp"

namespace chwave::cli {

// Process exit codes shared by all subcommands.
enum Exit : int {
  kOk = 0,
  kError = 1,
  kNotRegular = 2,    // no regular reduced solution, or TENS not steady
  kNoConvergence = 3, // Newton failure or TENS blow-up
  kUsage = 64,
};

int solve_reduced(const RunConfig& cfg);
int solve_full(const RunConfig& cfg, const std::string& init_csv);
int tens(const RunConfig& cfg, const std::string& init_csv);
int scan(const RunConfig& cfg);

}  // namespace chwave::cli
