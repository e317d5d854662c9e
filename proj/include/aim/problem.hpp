#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aim {

/// Parse failure with the 1-based line number of the offending input line.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

/// Binary spin assignment; every entry is exactly -1 or +1.
class SpinConfiguration {
 public:
  SpinConfiguration() = default;
  explicit SpinConfiguration(std::vector<int> spins);

  int size() const { return static_cast<int>(spins_.size()); }
  int operator[](int i) const { return spins_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& spins() const { return spins_; }

  bool operator==(const SpinConfiguration&) const = default;

 private:
  std::vector<int> spins_;
};

/// Weighted MaxCut instance: a symmetric edge-weight matrix with zero diagonal.
class MaxCutInstance {
 public:
  struct Edge {
    int u = 0;  // 0-based
    int v = 0;
    double weight = 0.0;
  };

  MaxCutInstance(int n, std::span<const Edge> edges, std::string name = "");

  int size() const { return n_; }
  const std::string& name() const { return name_; }
  double weight(int i, int j) const {
    return w_[static_cast<std::size_t>(i) * n_ + j];
  }
  std::span<const double> weight_row(int i) const {
    return {w_.data() + static_cast<std::size_t>(i) * n_,
            static_cast<std::size_t>(n_)};
  }
  /// Sum of weights over unordered vertex pairs.
  double total_weight() const;

  bool same_weights(const MaxCutInstance& other) const {
    return n_ == other.n_ && w_ == other.w_;
  }

 private:
  int n_;
  std::string name_;
  std::vector<double> w_;  // n*n row-major
};

/// Ising problem: symmetric coupling matrix J (zero diagonal), external field
/// vector b, and an optional target energy used for success evaluation.
class IsingProblem {
 public:
  IsingProblem(int n, std::vector<double> coupling_row_major,
               std::vector<double> field, std::string name = "");

  int size() const { return n_; }
  const std::string& name() const { return name_; }
  double coupling(int i, int j) const {
    return j_[static_cast<std::size_t>(i) * n_ + j];
  }
  std::span<const double> coupling_row(int i) const {
    return {j_.data() + static_cast<std::size_t>(i) * n_,
            static_cast<std::size_t>(n_)};
  }
  std::span<const double> field() const { return b_; }
  bool has_field() const;

  /// Sum of J_ij over all ordered pairs.
  double coupling_sum() const;

  const std::optional<double>& known_optimum() const { return known_optimum_; }
  /// Attaches a target energy. For n <= 24 the value is checked exhaustively
  /// to be attained by at least one configuration (within 1e-9).
  void set_known_optimum(double energy);
  void clear_known_optimum() { known_optimum_.reset(); }

 private:
  int n_;
  std::string name_;
  std::vector<double> j_;  // n*n row-major
  std::vector<double> b_;
  std::optional<double> known_optimum_;
};

/// Parses the "n m" / "i j w" edge-list format (1-based indices, '#' comments).
/// Errors carry the offending line number.
MaxCutInstance parse_maxcut(std::istream& in, std::string name = "");
MaxCutInstance parse_maxcut(const std::string& text, std::string name = "");
/// Loads an instance file; the instance name is the file name.
MaxCutInstance load_maxcut_file(const std::filesystem::path& path);

/// Emits the edge-list form; parsing the result reproduces the instance.
std::string serialize_maxcut(const MaxCutInstance& instance);

/// MaxCut -> Ising reduction: J = -w, b = 0. No target is attached.
IsingProblem maxcut_to_ising(const MaxCutInstance& instance);

/// H = -1/2 sum_ij J_ij s_i s_j - sum_i b_i s_i.
double ising_energy(const IsingProblem& problem, const SpinConfiguration& config);
/// Same formula over a +-1.0 sign vector; identical summation order as above.
double ising_energy_signs(const IsingProblem& problem,
                          std::span<const double> signs);

/// Total weight of edges whose endpoints carry different spins.
double cut_value(const MaxCutInstance& instance, const SpinConfiguration& config);

/// Sign binarization; zero maps to +1.
SpinConfiguration binarize(std::span<const double> amplitudes);

inline constexpr int kMaxBruteForceSpins = 24;

struct GroundState {
  double energy;
  SpinConfiguration config;
};

/// Exhaustive global minimum over all 2^n configurations (n <= 24). With zero
/// field only half the space is enumerated (flip symmetry).
GroundState brute_force_optimum(const IsingProblem& problem);

/// True when some configuration has energy within `tol` of `energy` (n <= 24).
bool energy_attainable(const IsingProblem& problem, double energy,
                       double tol = 1e-9);

/// Sidecar optimum metadata: one "instance-name best-cut-value" record per
/// line, '#' comments ignored.
std::map<std::string, double> parse_optima(std::istream& in);
std::map<std::string, double> load_optima_file(const std::filesystem::path& path);

/// Target Ising energy equivalent to reaching `cut` on the instance that
/// produced `problem`:  E = -(2 C + 1/2 sum_ij J_ij).
double target_energy_from_cut(const IsingProblem& problem, double cut);

/// Seeded Erdos-Renyi-style generator (used by tests and the data prep tool).
struct RandomGraphSpec {
  int n = 0;
  double edge_prob = 0.5;
  double weight_min = 1.0;
  double weight_max = 1.0;
  bool integer_weights = true;
};
MaxCutInstance make_random_instance(const RandomGraphSpec& spec,
                                    std::uint64_t seed, std::string name = "");

}  // namespace aim
