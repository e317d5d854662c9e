#include "aim/problem.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "aim/rng.hpp"

namespace aim {

namespace {

std::string fmt_int(long v) { return std::to_string(v); }

/// Shortest decimal form that round-trips to the same double.
std::string fmt_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

bool is_blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error("line " + fmt_int(line) + ": " + message),
      line_(line) {}

SpinConfiguration::SpinConfiguration(std::vector<int> spins)
    : spins_(std::move(spins)) {
  for (int s : spins_)
    if (s != 1 && s != -1)
      throw std::invalid_argument("spin entries must be -1 or +1");
}

MaxCutInstance::MaxCutInstance(int n, std::span<const Edge> edges,
                               std::string name)
    : n_(n), name_(std::move(name)) {
  if (n < 1) throw std::invalid_argument("vertex count must be >= 1");
  w_.assign(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<std::uint8_t> seen(w_.size(), 0);
  for (const Edge& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      throw std::invalid_argument("edge index out of range");
    if (e.u == e.v) throw std::invalid_argument("self-loop not allowed");
    const std::size_t a = static_cast<std::size_t>(e.u) * n + e.v;
    const std::size_t b = static_cast<std::size_t>(e.v) * n + e.u;
    if (seen[a] && w_[a] != e.weight)
      throw std::invalid_argument("conflicting duplicate edge");
    w_[a] = w_[b] = e.weight;
    seen[a] = seen[b] = 1;
  }
}

double MaxCutInstance::total_weight() const {
  double sum = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) sum += weight(i, j);
  return sum;
}

IsingProblem::IsingProblem(int n, std::vector<double> coupling_row_major,
                           std::vector<double> field, std::string name)
    : n_(n),
      name_(std::move(name)),
      j_(std::move(coupling_row_major)),
      b_(std::move(field)) {
  if (n < 1) throw std::invalid_argument("spin count must be >= 1");
  if (j_.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("coupling matrix size mismatch");
  if (b_.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("field vector size mismatch");
  for (int i = 0; i < n; ++i) {
    if (coupling(i, i) != 0.0)
      throw std::invalid_argument("coupling diagonal must be zero");
    for (int j = i + 1; j < n; ++j)
      if (coupling(i, j) != coupling(j, i))
        throw std::invalid_argument("coupling matrix must be symmetric");
  }
}

bool IsingProblem::has_field() const {
  return std::any_of(b_.begin(), b_.end(), [](double b) { return b != 0.0; });
}

double IsingProblem::coupling_sum() const {
  double sum = 0.0;
  for (double v : j_) sum += v;
  return sum;
}

void IsingProblem::set_known_optimum(double energy) {
  if (!std::isfinite(energy))
    throw std::invalid_argument("target energy must be finite");
  if (n_ <= kMaxBruteForceSpins && !energy_attainable(*this, energy))
    throw std::invalid_argument("target energy " + fmt_double(energy) +
                                " is not attained by any configuration");
  known_optimum_ = energy;
}

MaxCutInstance parse_maxcut(std::istream& in, std::string name) {
  std::string line;
  int line_no = 0;
  int n = -1;
  long m = -1;

  auto next_content_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!is_blank_or_comment(line)) return true;
    }
    return false;
  };

  if (!next_content_line()) throw ParseError(line_no + 1, "missing header");
  {
    std::istringstream hs(line);
    std::string extra;
    if (!(hs >> n >> m) || (hs >> extra))
      throw ParseError(line_no, "malformed header, expected \"n m\"");
    if (n < 1) throw ParseError(line_no, "vertex count must be >= 1");
    if (m < 0) throw ParseError(line_no, "edge count must be >= 0");
  }

  std::vector<double> w(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<std::uint8_t> seen(w.size(), 0);
  for (long k = 0; k < m; ++k) {
    if (!next_content_line())
      throw ParseError(line_no + 1, "expected " + fmt_int(m) +
                                        " edge lines, got " + fmt_int(k));
    std::istringstream es(line);
    int i = 0, j = 0;
    double weight = 0.0;
    std::string extra;
    if (!(es >> i >> j >> weight) || (es >> extra))
      throw ParseError(line_no, "malformed edge line, expected \"i j w\"");
    if (i < 1 || i > n || j < 1 || j > n)
      throw ParseError(line_no, "vertex index out of range [1, " +
                                    fmt_int(n) + "]");
    if (i == j) throw ParseError(line_no, "self-loop not allowed");
    const std::size_t a = static_cast<std::size_t>(i - 1) * n + (j - 1);
    const std::size_t b = static_cast<std::size_t>(j - 1) * n + (i - 1);
    if (seen[a] && w[a] != weight)
      throw ParseError(line_no, "duplicate edge (" + fmt_int(i) + ", " +
                                    fmt_int(j) + ") with conflicting weight");
    w[a] = w[b] = weight;
    seen[a] = seen[b] = 1;
  }
  if (next_content_line())
    throw ParseError(line_no, "unexpected data after " + fmt_int(m) + " edges");

  std::vector<MaxCutInstance::Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (seen[static_cast<std::size_t>(i) * n + j])
        edges.push_back({i, j, w[static_cast<std::size_t>(i) * n + j]});
  return MaxCutInstance(n, edges, std::move(name));
}

MaxCutInstance parse_maxcut(const std::string& text, std::string name) {
  std::istringstream in(text);
  return parse_maxcut(in, std::move(name));
}

MaxCutInstance load_maxcut_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return parse_maxcut(in, path.filename().string());
}

std::string serialize_maxcut(const MaxCutInstance& instance) {
  const int n = instance.size();
  std::vector<std::pair<std::pair<int, int>, double>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (instance.weight(i, j) != 0.0)
        edges.push_back({{i + 1, j + 1}, instance.weight(i, j)});
  std::string out = fmt_int(n) + " " + fmt_int(static_cast<long>(edges.size())) + "\n";
  for (const auto& [ij, weight] : edges)
    out += fmt_int(ij.first) + " " + fmt_int(ij.second) + " " +
           fmt_double(weight) + "\n";
  return out;
}

IsingProblem maxcut_to_ising(const MaxCutInstance& instance) {
  const int n = instance.size();
  std::vector<double> j(static_cast<std::size_t>(n) * n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) j[static_cast<std::size_t>(a) * n + b] = -instance.weight(a, b);
  return IsingProblem(n, std::move(j), std::vector<double>(n, 0.0),
                      instance.name());
}

double ising_energy_signs(const IsingProblem& problem,
                          std::span<const double> signs) {
  const int n = problem.size();
  if (static_cast<int>(signs.size()) != n)
    throw std::invalid_argument("configuration length mismatch");
  const std::span<const double> b = problem.field();
  double quad = 0.0;
  double lin = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::span<const double> row = problem.coupling_row(i);
    double t = 0.0;
    for (int j = 0; j < n; ++j) t += row[j] * signs[j];
    quad += signs[i] * t;
    lin += b[i] * signs[i];
  }
  return -0.5 * quad - lin;
}

double ising_energy(const IsingProblem& problem,
                    const SpinConfiguration& config) {
  std::vector<double> signs(config.spins().begin(), config.spins().end());
  return ising_energy_signs(problem, signs);
}

double cut_value(const MaxCutInstance& instance,
                 const SpinConfiguration& config) {
  const int n = instance.size();
  if (config.size() != n)
    throw std::invalid_argument("configuration length mismatch");
  double cut = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (config[i] != config[j]) cut += instance.weight(i, j);
  return cut;
}

SpinConfiguration binarize(std::span<const double> amplitudes) {
  std::vector<int> spins(amplitudes.size());
  for (std::size_t i = 0; i < amplitudes.size(); ++i)
    spins[i] = amplitudes[i] >= 0.0 ? 1 : -1;
  return SpinConfiguration(std::move(spins));
}

namespace {

/// Gray-code walk over configurations with O(n) incremental energy updates.
/// Visits 2^bits states starting from all +1; visit(energy, spins) returning
/// false stops early. `spins` has full length n; bits <= n spins vary.
template <typename Visit>
void gray_enumerate(const IsingProblem& problem, int bits, Visit&& visit) {
  const int n = problem.size();
  std::vector<double> sigma(n, 1.0);
  std::vector<double> field_acc(n, 0.0);  // (J sigma)_i
  for (int i = 0; i < n; ++i) {
    const auto row = problem.coupling_row(i);
    double t = 0.0;
    for (int j = 0; j < n; ++j) t += row[j];
    field_acc[i] = t;
  }
  double energy = ising_energy_signs(problem, sigma);
  if (!visit(energy, std::span<const double>(sigma))) return;

  const std::uint64_t count = 1ull << bits;
  const auto b = problem.field();
  for (std::uint64_t k = 1; k < count; ++k) {
    const int i = std::countr_zero(k);
    const double old = sigma[i];
    energy += 2.0 * old * field_acc[i] + 2.0 * b[i] * old;
    sigma[i] = -old;
    const auto col = problem.coupling_row(i);  // symmetric: row == column
    for (int j = 0; j < n; ++j) field_acc[j] -= 2.0 * old * col[j];
    if (!visit(energy, std::span<const double>(sigma))) return;
  }
}

}  // namespace

GroundState brute_force_optimum(const IsingProblem& problem) {
  const int n = problem.size();
  if (n > kMaxBruteForceSpins)
    throw std::invalid_argument("brute force limited to n <= " +
                                fmt_int(kMaxBruteForceSpins));
  // With b = 0, E(s) == E(-s); fixing the last spin halves the walk.
  const int bits = problem.has_field() ? n : std::max(1, n - 1);
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_sigma;
  gray_enumerate(problem, bits, [&](double e, std::span<const double> sigma) {
    if (e < best) {
      best = e;
      best_sigma.assign(sigma.begin(), sigma.end());
    }
    return true;
  });
  SpinConfiguration config = binarize(best_sigma);
  // Return a freshly summed energy, not the incrementally accumulated one.
  return {ising_energy(problem, config), config};
}

bool energy_attainable(const IsingProblem& problem, double energy, double tol) {
  const int n = problem.size();
  if (n > kMaxBruteForceSpins)
    throw std::invalid_argument("attainability check limited to n <= " +
                                fmt_int(kMaxBruteForceSpins));
  const int bits = problem.has_field() ? n : std::max(1, n - 1);
  bool found = false;
  gray_enumerate(problem, bits, [&](double e, std::span<const double>) {
    if (std::abs(e - energy) <= tol) {
      found = true;
      return false;
    }
    return true;
  });
  return found;
}

std::map<std::string, double> parse_optima(std::istream& in) {
  std::map<std::string, double> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    std::istringstream ls(line);
    std::string name, extra;
    double value = 0.0;
    if (!(ls >> name >> value) || (ls >> extra))
      throw ParseError(line_no, "expected \"instance-name best-cut-value\"");
    auto it = out.find(name);
    if (it != out.end() && it->second != value)
      throw ParseError(line_no, "conflicting value for '" + name + "'");
    out[name] = value;
  }
  return out;
}

std::map<std::string, double> load_optima_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return parse_optima(in);
}

double target_energy_from_cut(const IsingProblem& problem, double cut) {
  return -(2.0 * cut + 0.5 * problem.coupling_sum());
}

MaxCutInstance make_random_instance(const RandomGraphSpec& spec,
                                    std::uint64_t seed, std::string name) {
  if (spec.n < 1) throw std::invalid_argument("vertex count must be >= 1");
  if (spec.edge_prob < 0.0 || spec.edge_prob > 1.0)
    throw std::invalid_argument("edge probability must be in [0, 1]");
  if (spec.weight_min > spec.weight_max)
    throw std::invalid_argument("weight range is empty");
  UniformStream u(derive_stream(seed, 0x6d6b696e7374ull));
  std::vector<MaxCutInstance::Edge> edges;
  for (int i = 0; i < spec.n; ++i) {
    for (int j = i + 1; j < spec.n; ++j) {
      if (u.next_unit() >= spec.edge_prob) continue;
      double w;
      if (spec.integer_weights) {
        const long lo = std::lround(spec.weight_min);
        const long hi = std::lround(spec.weight_max);
        w = static_cast<double>(
            lo + static_cast<long>(u.next_unit() * static_cast<double>(hi - lo + 1)));
      } else {
        w = spec.weight_min + u.next_unit() * (spec.weight_max - spec.weight_min);
      }
      edges.push_back({i, j, w});
    }
  }
  return MaxCutInstance(spec.n, edges, std::move(name));
}

}  // namespace aim
