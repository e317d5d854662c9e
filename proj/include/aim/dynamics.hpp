#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "aim/problem.hpp"
#include "aim/rng.hpp"

namespace aim {

/// How the coupling term of the feedback signal is computed: from the analog
/// amplitudes x_j, or from their signs (the spin-sign method).
enum class FeedbackMode { kAmplitude, kSpinSign };

/// Everything that defines one stochastic run.
struct SimParams {
  double alpha = 0.9;   // gain
  double beta = 0.1;    // coupling strength
  double gamma = 0.01;  // noise amplitude
  double h = 1.0;       // Euler step, in (0, 1]; h = 1 is the discrete map
  long iterations = 5000;
  FeedbackMode feedback_mode = FeedbackMode::kAmplitude;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(h > 0.0) || h > 1.0 || !std::isfinite(h))
      throw std::invalid_argument("h must be in (0, 1]");
    if (iterations < 1)
      throw std::invalid_argument("iterations must be >= 1");
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
      throw std::invalid_argument("gamma must be >= 0");
    if (!std::isfinite(alpha) || !std::isfinite(beta))
      throw std::invalid_argument("alpha and beta must be finite");
  }
};

/// Analog spin amplitudes plus the iteration counter.
struct SpinState {
  std::vector<double> x;
  long k = 0;
};

/// Outcome of a single run against a problem.
struct RunRecord {
  bool success = false;
  double best_energy = 0.0;
  std::optional<long> first_success_iteration;
  SpinConfiguration final_config;
};

/// Absolute slack for energy-target comparisons; absorbs float summation
/// order, exact for integer-weight instances.
inline constexpr double kEnergyTolerance = 1e-9;

namespace detail {

inline void feedback_into(std::span<const double> x, const IsingProblem& problem,
                          double alpha, double beta, FeedbackMode mode,
                          std::span<double> out) {
  const int n = problem.size();
  const std::span<const double> b = problem.field();
  if (mode == FeedbackMode::kAmplitude) {
    for (int i = 0; i < n; ++i) {
      const auto row = problem.coupling_row(i);
      double c = 0.0;
      for (int j = 0; j < n; ++j) c += row[j] * x[j];
      out[i] = alpha * x[i] + beta * c + b[i];
    }
  } else {
    for (int i = 0; i < n; ++i) {
      const auto row = problem.coupling_row(i);
      double c = 0.0;
      for (int j = 0; j < n; ++j) c += row[j] * (x[j] >= 0.0 ? 1.0 : -1.0);
      out[i] = alpha * x[i] + beta * c + b[i];
    }
  }
}

/// x' = (1 - h) x + h tanh(f + gamma zeta); one fresh draw per spin.
template <class NoiseSource>
void advance(std::span<const double> x, std::span<const double> f,
             double gamma, double h, NoiseSource& noise,
             std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = (1.0 - h) * x[i] + h * std::tanh(f[i] + gamma * noise.next());
}

}  // namespace detail

/// Feedback signal f_i = alpha x_i + beta sum_j J_ij x_j + b_i (amplitude
/// mode) or with sign(x_j) in the coupling term (spin-sign mode, sign(0)=+1).
inline std::vector<double> feedback(std::span<const double> x,
                                    const IsingProblem& problem, double alpha,
                                    double beta, FeedbackMode mode) {
  if (static_cast<int>(x.size()) != problem.size())
    throw std::invalid_argument("state length mismatch");
  std::vector<double> out(x.size());
  detail::feedback_into(x, problem, alpha, beta, mode, out);
  return out;
}

/// One update of the spin map. At h = 1 this is exactly the discrete-time
/// map x_i[k] = tanh(f_i[k-1] + gamma zeta_i[k]); for h < 1 it interpolates
/// between the previous state and the map output. The noise source must
/// yield independent standard-normal draws.
template <class NoiseSource>
SpinState step(const SpinState& state, const IsingProblem& problem,
               const SimParams& params, NoiseSource& noise) {
  if (static_cast<int>(state.x.size()) != problem.size())
    throw std::invalid_argument("state length mismatch");
  std::vector<double> f(state.x.size());
  detail::feedback_into(state.x, problem, params.alpha, params.beta,
                        params.feedback_mode, f);
  SpinState next;
  next.x.resize(state.x.size());
  next.k = state.k + 1;
  detail::advance(state.x, f, params.gamma, params.h, noise, next.x);
  return next;
}

/// Called after every iteration with (k, amplitudes, energy of the binarized
/// state).
using StepObserver =
    std::function<void(long, std::span<const double>, double)>;

/// Executes one run: x starts at zero (symmetry broken by the first noise
/// draw), each iteration steps the map, binarizes, and evaluates the energy.
/// Success means the target energy was reached at ANY iteration. Without a
/// known optimum on the problem, success stays false and only the best energy
/// is tracked.
RunRecord run(const IsingProblem& problem, const SimParams& params);
RunRecord run(const IsingProblem& problem, const SimParams& params,
              const StepObserver& observer);

}  // namespace aim
