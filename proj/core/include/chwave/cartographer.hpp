#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "chwave/newton.hpp"
#include "chwave/params.hpp"
#include "chwave/reduced.hpp"
#include "chwave/stability.hpp"
#include "chwave/tens.hpp"

namespace chwave {

/// Rectangular (<psi>, f0) grid, endpoints included.
struct ScanGrid {
  double mean_min = 0.0;
  double mean_max = 1.0;
  double mean_step = 0.05;
  double f0_min = 0.0;
  double f0_max = 2.0;
  double f0_step = 0.05;

  void validate() const;
  std::vector<double> means() const;
  std::vector<double> f0s() const;

  bool operator==(const ScanGrid&) const = default;
};

// Reduced-model map -------------------------------------------------------

struct ReducedCell {
  ProblemParams params;
  CaseLabel case_label;
  bool regular = false;
  int branch = -1;          ///< branch of the first regular solution, -1 if none
  int n_solutions = 0;      ///< regular solutions over all branches
  bool singular_only = false;
  bool near_singular = false;
  std::string error;        ///< non-empty if the cell could not be evaluated
};

struct ReducedMap {
  ScanGrid grid;
  double v = 1.0;
  /// Row-major in <psi>: index = i_mean * n_f0 + i_f0.
  std::vector<ReducedCell> cells;
  std::size_t n_mean = 0;
  std::size_t n_f0 = 0;

  const ReducedCell& at(std::size_t i_mean, std::size_t i_f0) const { return cells.at(i_mean * n_f0 + i_f0); }
  /// Cells with a Case 0/1/2 label that are not regular.
  std::size_t wedge_violations() const;
};

struct ReducedScanConfig {
  ShootingConfig shooting{256};
  int jobs = 1;
};

/// Shoots every branch at every cell. Per-cell failures are recorded, never thrown.
ReducedMap scan_reduced(const ScanGrid& grid, double v, const ReducedScanConfig& cfg = {});

// Full-model flow map -----------------------------------------------------

enum class CellClass { A1Stable, A2Stable, A1A2Both, NoStableWave, Unresolved };

std::string to_string(CellClass c);

struct WaveResult {
  GuessLabel guess;
  bool converged = false;
  int spikes = 0;  ///< count_spikes of the converged profile
  /// Index into the cell's waves of the result that owns the same profile, or
  /// -1. Anchored waves outrank the others; among equals A2 wins, then the
  /// earlier mode.
  int duplicate_of = -1;
  double max_re = 0.0;
  int iterations = 0;
  double final_residual = 0.0;
  bool from_continuation = false;
  /// Continuation chain reaches back to the mode's own guess at the first
  /// cell of the sweep (f0 min for A2, f0 max for spike modes).
  bool anchored = false;
  std::string error;
  std::vector<double> profile;  ///< converged profile (empty otherwise)
};

struct ScanCell {
  ProblemParams params;
  CaseLabel case_label;
  bool reduced_regular = false;
  int reduced_branch = -1;
  std::vector<WaveResult> waves;  ///< one per requested mode, in request order
  std::optional<bool> tens_steady;
  /// Whether TENS agreed with the spectra (steady iff some wave has max Re < 0).
  std::optional<bool> tens_agrees;
  CellClass classification = CellClass::Unresolved;

  const WaveResult* wave(GuessKind kind) const;
  /// Converged, non-duplicate result from `kind`, else nullptr.
  const WaveResult* mode(GuessKind kind) const;
};

enum class NeutralMode { NC1, NC2, NC3 };

std::string to_string(NeutralMode m);
NeutralMode parse_neutral_mode(const std::string& text);

/// Mode whose spectrum a neutral curve follows: NC1 -> A1, NC2 -> A3, NC3 -> A2.
GuessKind neutral_mode_kind(NeutralMode m);

struct NeutralPoint {
  double mean = 0.0;
  double f0 = 0.0;
  double f0_lo = 0.0;         ///< final bracket
  double f0_hi = 0.0;
  double max_re = 0.0;        ///< max Re lambda of the last stable wave in the bracket
  bool stable_below = false;  ///< stable side is f0_lo
  /// True if the mode converged on both sides of the final bracket (a
  /// crossing); false if it was lost on the unstable side (a fold).
  bool crossing = false;
};

struct NeutralCurve {
  NeutralMode mode = NeutralMode::NC1;
  std::vector<NeutralPoint> points;  ///< ordered by <psi>, then f0
};

struct FlowMap {
  ScanGrid grid;
  double v = 1.0;
  double eps = 0.0;
  int n = 0;
  std::vector<ScanCell> cells;  ///< index = i_mean * n_f0 + i_f0
  std::size_t n_mean = 0;
  std::size_t n_f0 = 0;
  std::vector<NeutralCurve> neutral_curves;

  const ScanCell& at(std::size_t i_mean, std::size_t i_f0) const { return cells.at(i_mean * n_f0 + i_f0); }
  const NeutralCurve* curve(NeutralMode m) const;
};

struct FullScanConfig {
  int n = 128;
  std::vector<GuessLabel> modes{{GuessKind::A1, 1, +1}, {GuessKind::A2, 0, +1}, {GuessKind::A3, 1, -1}};
  NewtonConfig newton;
  int phase_trials = 4;
  /// Start each cell from the converged wave of the neighbouring f0 cell
  /// (A2 upward, spike modes downward) before the fresh guess.
  bool continuation = true;
  double duplicate_tol = 1e-6;
  StabilityOptions stability;
  /// TENS cross-check on every k-th cell in both directions; 0 disables.
  int tens_stride = 4;
  TensConfig tens;
  bool neutral_curves = true;
  double neutral_tol = 1e-3;
  int jobs = 1;

  void validate() const;
};

/// Newton from every requested guess at every cell, spectrum of each
/// converged wave, optional TENS cross-check, classification, and (when
/// enabled) NC1-NC3. Columns of constant <psi> run in parallel on `jobs`
/// threads; the result does not depend on `jobs`.
FlowMap scan_full(const ScanGrid& grid, double v, double eps, const FullScanConfig& cfg = {});

/// For each <psi> column, brackets every change of stability of the mode
/// between adjacent f0 cells (stable on one side; unstable or absent on the
/// other) and bisects in f0 to `cfg.neutral_tol`, continuing the wave from the
/// stable end. An absent wave counts as not stable, so the boundary is either
/// a sign change of max Re lambda or the fold where the stable branch ends.
/// Columns without a change contribute nothing.
NeutralCurve trace_neutral_curve(const FlowMap& map, NeutralMode mode, const FullScanConfig& cfg = {});

/// Classification implied by the wave results (used by scan_full).
CellClass classify_cell(const std::vector<WaveResult>& waves);

}  // namespace chwave
