#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "chwave/cartographer.hpp"
#include "chwave/newton.hpp"
#include "chwave/params.hpp"
#include "chwave/profile.hpp"
#include "chwave/reduced.hpp"
#include "chwave/stability.hpp"
#include "chwave/tens.hpp"

namespace chwave {

enum class OutputFormat { Csv, Json, Both };

std::string to_string(OutputFormat f);
OutputFormat parse_output_format(const std::string& text);

/// Everything a single command-line run depends on. Serialised as JSON; the
/// round trip is exact.
struct RunConfig {
  std::string command;  ///< solve-reduced, solve-full, tens or scan
  ProblemParams params = make_params(0.0, 0.0, 1.0);
  int n = 512;
  std::string method = "shoot";  ///< solve-reduced: shoot or newton
  std::string guess = "a2";      ///< solve-full: a2, a1, a3, nspike:<n>
  bool stability = false;
  NewtonConfig newton;
  ShootingConfig shooting;
  TensConfig tens;
  std::string scan_mode = "full";  ///< reduced or full
  ScanGrid grid;
  int scan_n = 128;
  int phase_trials = 4;
  int tens_stride = 4;
  int jobs = 1;
  std::string output_dir = ".";
  OutputFormat format = OutputFormat::Both;
  std::uint64_t seed = 0;

  bool operator==(const RunConfig&) const = default;
};

/// Compact one-line JSON.
std::string to_json(const RunConfig& cfg);

/// Keys missing from `text` keep their defaults; unknown keys throw
/// std::invalid_argument.
RunConfig run_config_from_json(const std::string& text);

RunConfig load_run_config(const std::filesystem::path& path);
void save_run_config(const std::filesystem::path& path, const RunConfig& cfg);

/// 17 significant digits, "%.17g".
std::string format_double(double x);

/// Lines for the '#' header block of every output file: program version and
/// the full configuration.
std::vector<std::string> config_header(const RunConfig& cfg);

// CSV -----------------------------------------------------------------------

/// Comma-separated table with '#'-prefixed header lines and one column-name
/// row. Throws SolverError(Io) if the file cannot be written.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::string>& columns, const std::vector<std::vector<std::string>>& rows);

/// eta, psi.
void write_profile_csv(const std::filesystem::path& path, const Profile& p, const std::vector<std::string>& header);

/// Reads the psi column of an (eta, psi) file written by write_profile_csv
/// (or any two-column file with optional '#' and name lines).
Profile read_profile_csv(const std::filesystem::path& path, const ProblemParams& params);

/// index, re, im.
void write_spectrum_csv(const std::filesystem::path& path, const StabilityReport& report,
                        const std::vector<std::string>& header);

/// time, change_rate.
void write_tens_history_csv(const std::filesystem::path& path, const TensResult& result,
                            const std::vector<std::string>& header);

/// Long format: time, eta, psi for every snapshot.
void write_spacetime_csv(const std::filesystem::path& path, const TensResult& result, const ProblemParams& params,
                         const std::vector<std::string>& header);

void write_reduced_map_csv(const std::filesystem::path& path, const ReducedMap& map,
                           const std::vector<std::string>& header);

/// One row per cell; per-mode columns are prefixed with the guess label.
void write_flow_map_csv(const std::filesystem::path& path, const FlowMap& map, const std::vector<std::string>& header);

/// Long format: curve, mean, f0, f0_lo, f0_hi, max_re, stable_below, crossing.
void write_neutral_curves_csv(const std::filesystem::path& path, const FlowMap& map,
                              const std::vector<std::string>& header);

// JSON ----------------------------------------------------------------------

/// Documents embed `cfg` under "config". Profiles are not included.
std::string reduced_map_json(const ReducedMap& map, const RunConfig& cfg);
std::string flow_map_json(const FlowMap& map, const RunConfig& cfg);

/// Writes `text` plus a trailing newline. Throws SolverError(Io).
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace chwave
