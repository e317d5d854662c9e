#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aim/metrics.hpp"

namespace aim {

/// (alpha, beta) lattice specification. Grid points are evenly spaced and
/// include both endpoints; a single-step axis collapses to its minimum.
struct GridSpec {
  double alpha_min = 0.5;
  double alpha_max = 1.0;
  double beta_min = 0.0;
  double beta_max = 0.5;
  int alpha_steps = 21;
  int beta_steps = 21;
  int runs_per_cell = 250;
  SimParams base;  // alpha, beta and seed are overridden per cell/run

  void validate() const;
  double alpha_value(int i) const;
  double beta_value(int j) const;
  int total_cells() const { return alpha_steps * beta_steps; }
};

/// TSR over every grid cell, alpha-major (beta varies fastest).
struct ScanResult {
  GridSpec grid;
  std::string problem_name;
  std::vector<TsrEstimate> tsr;

  const TsrEstimate& at(int alpha_idx, int beta_idx) const {
    return tsr[static_cast<std::size_t>(alpha_idx) * grid.beta_steps +
               beta_idx];
  }
  double h_used() const { return grid.base.h; }
};

/// Completeness-checked AOO of a scan.
AooResult aoo(const ScanResult& scan);

using ProgressFn = std::function<void(int done, int total)>;

/// Brute-force grid scan. Per-run seeds derive from a hash of (master_seed,
/// alpha index, beta index, run index); the result is byte-identical for any
/// worker count. workers <= 0 selects the hardware concurrency.
ScanResult grid_scan(const IsingProblem& problem, const GridSpec& spec,
                     std::uint64_t master_seed, int workers = 0,
                     const ProgressFn& progress = {});

/// Uncoupled-spin gain scan used to locate the pitchfork threshold.
struct BifurcationSpec {
  double alpha_min = 0.5;
  double alpha_max = 1.5;
  int alpha_steps = 21;
  int samples_per_alpha = 80;  // independent uncoupled spins per alpha
  /// Settle budget expressed in iterations of the h = 1 map (dimensionless
  /// time); the integrator takes ceil(iterations / h) Euler steps so the
  /// settled state is independent of h. beta must be zero.
  SimParams params;
  /// Median |x| must exceed this to count as bifurcated; 0 -> 10 * gamma.
  double detection_floor = 0.0;
  /// Starting amplitude (alternating sign across spins). Zero relies on
  /// noise to break symmetry.
  double init_amplitude = 0.0;

  void validate() const;
};

struct BifurcationScan {
  std::vector<double> alphas;
  std::vector<std::vector<double>> final_amplitudes;  // per alpha
  std::optional<double> detected_threshold;
  double floor_used = 0.0;
};

BifurcationScan bifurcation_scan(const BifurcationSpec& spec, int workers = 0);

/// One (value, AOO) row per swept parameter value.
struct SweepEntry {
  double value = 0.0;
  AooResult aoo;
};

struct SweepTable {
  std::string parameter;  // "h", "gamma" or "iterations"
  std::vector<SweepEntry> entries;
};

/// One grid_scan + aoo per h value, all derived from the same master seed.
SweepTable h_sweep(const IsingProblem& problem, const GridSpec& spec,
                   std::span<const double> h_values, std::uint64_t master_seed,
                   int workers = 0, const ProgressFn& progress = {});

SweepTable noise_sweep(const IsingProblem& problem, const GridSpec& spec,
                       std::span<const double> gamma_values,
                       std::uint64_t master_seed, int workers = 0,
                       const ProgressFn& progress = {});

SweepTable runtime_sweep(const IsingProblem& problem, const GridSpec& spec,
                         std::span<const long> iteration_values,
                         std::uint64_t master_seed, int workers = 0,
                         const ProgressFn& progress = {});

}  // namespace aim
