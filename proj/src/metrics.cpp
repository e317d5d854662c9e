#include "aim/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace aim {

TsrEstimate tsr(std::span<const RunRecord> records) {
  if (records.empty())
    throw std::invalid_argument("tsr over an empty run collection");
  int successes = 0;
  for (const RunRecord& r : records) successes += r.success ? 1 : 0;
  const int runs = static_cast<int>(records.size());
  return {successes, runs, static_cast<double>(successes) / runs};
}

AooResult aoo(std::span<const TsrEstimate> cells) {
  if (cells.empty()) throw std::invalid_argument("aoo over an empty grid");
  int nonzero = 0;
  for (const TsrEstimate& c : cells) {
    if (c.runs < 1)
      throw std::invalid_argument("aoo over an incomplete grid");
    if (c.successes > 0) ++nonzero;
  }
  const int total = static_cast<int>(cells.size());
  return {nonzero, total, 100.0 * nonzero / total};
}

EffectiveCoefficients effective_coefficients(double alpha, double beta,
                                             double h) {
  if (!(h > 0.0) || h > 1.0 || !std::isfinite(h))
    throw std::invalid_argument("h must be in (0, 1]");
  return {1.0 - h + h * alpha, h * alpha * alpha * alpha / 3.0, h * beta};
}

}  // namespace aim
