#include "aim/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace aim {

namespace {

/// Runs fn(0..count-1) on `workers` threads; items are claimed through an
/// atomic counter, so assignment order is irrelevant to the results. The
/// first exception wins and is rethrown on the caller thread.
void parallel_for_index(int count, int workers,
                        const std::function<void(int)>& fn) {
  if (workers <= 0)
    workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(1, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&]() {
    for (;;) {
      const int i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double lattice_value(double lo, double hi, int steps, int i) {
  if (steps == 1) return lo;
  return lo + (hi - lo) * static_cast<double>(i) / (steps - 1);
}

}  // namespace

void GridSpec::validate() const {
  base.validate();
  if (!(alpha_min <= alpha_max) || !(beta_min <= beta_max))
    throw std::invalid_argument("grid range must satisfy min <= max");
  if (!std::isfinite(alpha_min) || !std::isfinite(alpha_max) ||
      !std::isfinite(beta_min) || !std::isfinite(beta_max))
    throw std::invalid_argument("grid boundaries must be finite");
  if (alpha_steps < 1 || beta_steps < 1)
    throw std::invalid_argument("grid steps must be >= 1");
  if (runs_per_cell < 1)
    throw std::invalid_argument("runs_per_cell must be >= 1");
}

double GridSpec::alpha_value(int i) const {
  return lattice_value(alpha_min, alpha_max, alpha_steps, i);
}

double GridSpec::beta_value(int j) const {
  return lattice_value(beta_min, beta_max, beta_steps, j);
}

AooResult aoo(const ScanResult& scan) {
  if (static_cast<int>(scan.tsr.size()) != scan.grid.total_cells())
    throw std::invalid_argument("aoo over an incomplete grid");
  return aoo(std::span<const TsrEstimate>(scan.tsr));
}

ScanResult grid_scan(const IsingProblem& problem, const GridSpec& spec,
                     std::uint64_t master_seed, int workers,
                     const ProgressFn& progress) {
  spec.validate();
  if (!problem.known_optimum())
    throw std::invalid_argument("grid scan needs a problem with a known optimum");

  ScanResult result;
  result.grid = spec;
  result.problem_name = problem.name();
  result.tsr.resize(spec.total_cells());

  std::atomic<int> done{0};
  parallel_for_index(spec.total_cells(), workers, [&](int cell) {
    const int ai = cell / spec.beta_steps;
    const int bi = cell % spec.beta_steps;
    SimParams params = spec.base;
    params.alpha = spec.alpha_value(ai);
    params.beta = spec.beta_value(bi);
    int successes = 0;
    for (int r = 0; r < spec.runs_per_cell; ++r) {
      params.seed = derive_stream(master_seed, static_cast<std::uint64_t>(ai),
                                  static_cast<std::uint64_t>(bi),
                                  static_cast<std::uint64_t>(r));
      if (run(problem, params).success) ++successes;
    }
    result.tsr[cell] = {successes, spec.runs_per_cell,
                        static_cast<double>(successes) / spec.runs_per_cell};
    if (progress)
      progress(done.fetch_add(1, std::memory_order_relaxed) + 1,
               spec.total_cells());
  });
  return result;
}

void BifurcationSpec::validate() const {
  params.validate();
  if (params.beta != 0.0)
    throw std::invalid_argument("bifurcation scan requires beta = 0");
  if (!(alpha_min <= alpha_max))
    throw std::invalid_argument("alpha range must satisfy min <= max");
  if (alpha_steps < 1) throw std::invalid_argument("alpha_steps must be >= 1");
  if (samples_per_alpha < 1)
    throw std::invalid_argument("samples_per_alpha must be >= 1");
  if (detection_floor < 0.0)
    throw std::invalid_argument("detection_floor must be >= 0");
}

BifurcationScan bifurcation_scan(const BifurcationSpec& spec, int workers) {
  spec.validate();
  const int n = spec.samples_per_alpha;
  const long steps = static_cast<long>(
      std::ceil(static_cast<double>(spec.params.iterations) / spec.params.h));

  BifurcationScan scan;
  scan.floor_used =
      spec.detection_floor > 0.0 ? spec.detection_floor : 10.0 * spec.params.gamma;
  scan.alphas.resize(spec.alpha_steps);
  scan.final_amplitudes.resize(spec.alpha_steps);

  parallel_for_index(spec.alpha_steps, workers, [&](int ai) {
    const double alpha =
        lattice_value(spec.alpha_min, spec.alpha_max, spec.alpha_steps, ai);
    GaussianStream noise(
        derive_stream(spec.params.seed, static_cast<std::uint64_t>(ai)));
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i)
      x[i] = (i % 2 == 0) ? spec.init_amplitude : -spec.init_amplitude;
    const double g = spec.params.gamma;
    const double h = spec.params.h;
    for (long k = 0; k < steps; ++k)
      for (int i = 0; i < n; ++i)
        x[i] = (1.0 - h) * x[i] + h * std::tanh(alpha * x[i] + g * noise.next());
    scan.alphas[ai] = alpha;
    scan.final_amplitudes[ai] = std::move(x);
  });

  for (int ai = 0; ai < spec.alpha_steps; ++ai) {
    std::vector<double> mag(scan.final_amplitudes[ai].size());
    std::transform(scan.final_amplitudes[ai].begin(),
                   scan.final_amplitudes[ai].end(), mag.begin(),
                   [](double v) { return std::abs(v); });
    std::sort(mag.begin(), mag.end());
    const std::size_t m = mag.size();
    const double median =
        m % 2 == 1 ? mag[m / 2] : 0.5 * (mag[m / 2 - 1] + mag[m / 2]);
    if (median > scan.floor_used) {
      scan.detected_threshold = scan.alphas[ai];
      break;
    }
  }
  return scan;
}

namespace {

SweepTable sweep_impl(const IsingProblem& problem, std::string parameter,
                      const std::vector<std::pair<double, GridSpec>>& points,
                      std::uint64_t master_seed, int workers,
                      const ProgressFn& progress) {
  if (points.empty()) throw std::invalid_argument("empty sweep value list");
  SweepTable table;
  table.parameter = std::move(parameter);
  for (const auto& [value, grid] : points) {
    const ScanResult scan = grid_scan(problem, grid, master_seed, workers, progress);
    table.entries.push_back({value, aoo(scan)});
  }
  return table;
}

}  // namespace

SweepTable h_sweep(const IsingProblem& problem, const GridSpec& spec,
                   std::span<const double> h_values,
                   std::uint64_t master_seed, int workers,
                   const ProgressFn& progress) {
  std::vector<std::pair<double, GridSpec>> points;
  for (double h : h_values) {
    GridSpec g = spec;
    g.base.h = h;
    points.emplace_back(h, g);
  }
  return sweep_impl(problem, "h", points, master_seed, workers, progress);
}

SweepTable noise_sweep(const IsingProblem& problem, const GridSpec& spec,
                       std::span<const double> gamma_values,
                       std::uint64_t master_seed, int workers,
                       const ProgressFn& progress) {
  std::vector<std::pair<double, GridSpec>> points;
  for (double gamma : gamma_values) {
    GridSpec g = spec;
    g.base.gamma = gamma;
    points.emplace_back(gamma, g);
  }
  return sweep_impl(problem, "gamma", points, master_seed, workers,
                    progress);
}

SweepTable runtime_sweep(const IsingProblem& problem, const GridSpec& spec,
                         std::span<const long> iteration_values,
                         std::uint64_t master_seed, int workers,
                         const ProgressFn& progress) {
  std::vector<std::pair<double, GridSpec>> points;
  for (long iters : iteration_values) {
    GridSpec g = spec;
    g.base.iterations = iters;
    points.emplace_back(static_cast<double>(iters), g);
  }
  return sweep_impl(problem, "iterations", points, master_seed, workers,
                    progress);
}

}  // namespace aim
