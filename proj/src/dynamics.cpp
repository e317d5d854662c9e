#include "aim/dynamics.hpp"

#include <limits>

namespace aim {

namespace {

RunRecord run_impl(const IsingProblem& problem, const SimParams& params,
                   const StepObserver* observer) {
  params.validate();
  const int n = problem.size();
  GaussianStream noise(params.seed);

  std::vector<double> x(n, 0.0);
  std::vector<double> x_next(n);
  std::vector<double> f(n);
  std::vector<double> signs(n);

  const bool has_target = problem.known_optimum().has_value();
  const double target =
      has_target ? *problem.known_optimum() : 0.0;

  double best = std::numeric_limits<double>::infinity();
  std::optional<long> first_success;

  for (long k = 1; k <= params.iterations; ++k) {
    detail::feedback_into(x, problem, params.alpha, params.beta,
                          params.feedback_mode, f);
    detail::advance(x, f, params.gamma, params.h, noise, x_next);
    x.swap(x_next);

    for (int i = 0; i < n; ++i) signs[i] = x[i] >= 0.0 ? 1.0 : -1.0;
    const double energy = ising_energy_signs(problem, signs);
    if (energy < best) best = energy;
    if (has_target && !first_success && energy <= target + kEnergyTolerance)
      first_success = k;
    if (observer) (*observer)(k, x, energy);
  }

  RunRecord rec;
  rec.best_energy = best;
  rec.first_success_iteration = first_success;
  rec.success = first_success.has_value();
  rec.final_config = binarize(x);
  return rec;
}

}  // namespace

RunRecord run(const IsingProblem& problem, const SimParams& params) {
  return run_impl(problem, params, nullptr);
}

RunRecord run(const IsingProblem& problem, const SimParams& params,
              const StepObserver& observer) {
  return run_impl(problem, params, &observer);
}

}  // namespace aim
