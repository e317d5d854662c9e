#pragma once

#include <span>

#include "aim/dynamics.hpp"

namespace aim {

/// Transient success rate: fraction of runs that reached the target at any
/// iteration. The exact count is carried next to the float value.
struct TsrEstimate {
  int successes = 0;
  int runs = 0;
  double value = 0.0;
};

TsrEstimate tsr(std::span<const RunRecord> records);

/// Area of operation: percentage of scan cells with nonzero TSR.
struct AooResult {
  int nonzero_cells = 0;
  int total_cells = 0;
  double percent = 0.0;
};

/// Over a fully evaluated grid (every cell must carry runs >= 1).
AooResult aoo(std::span<const TsrEstimate> cells);

/// Coefficients of the cubic (Taylor) truncation of the update map:
///   x' = linear x - cubic x^3 + coupling sum_j J_ij x_j
/// with linear = 1 - h + h alpha, cubic = h alpha^3 / 3, coupling = h beta.
/// At h = 1 this reduces to (alpha, alpha^3/3, beta).
struct EffectiveCoefficients {
  double linear = 0.0;
  double cubic = 0.0;
  double coupling = 0.0;
};

EffectiveCoefficients effective_coefficients(double alpha, double beta,
                                             double h);

}  // namespace aim
