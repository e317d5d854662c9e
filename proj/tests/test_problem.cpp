#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "aim/problem.hpp"
#include "oracles.hpp"

using namespace aim;

namespace {

MaxCutInstance unit_triangle() {
  return parse_maxcut("3 3\n1 2 1\n2 3 1\n1 3 1", "triangle");
}

SpinConfiguration cfg(std::vector<int> s) {
  return SpinConfiguration(std::move(s));
}

}  // namespace

TEST_CASE("parse_maxcut: basic forms") {
  SUBCASE("smallest graph") {
    const auto g = parse_maxcut("2 1\n1 2 1");
    CHECK(g.size() == 2);
    CHECK(g.weight(0, 1) == 1.0);
    CHECK(g.weight(1, 0) == 1.0);
    CHECK(g.weight(0, 0) == 0.0);
  }
  SUBCASE("unit triangle") {
    const auto g = unit_triangle();
    CHECK(g.size() == 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(g.weight(i, j) == (i == j ? 0.0 : 1.0));
  }
  SUBCASE("sparse fill with negative weight") {
    const auto g = parse_maxcut("3 2\n1 2 5\n1 3 -2");
    CHECK(g.weight(0, 1) == 5.0);
    CHECK(g.weight(0, 2) == -2.0);
    CHECK(g.weight(1, 2) == 0.0);
  }
  SUBCASE("comments and blank lines are ignored") {
    const auto g = parse_maxcut("# header comment\n\n2 1\n# edge below\n1 2 3\n\n# done\n");
    CHECK(g.weight(0, 1) == 3.0);
  }
  SUBCASE("duplicate edge with identical weight is accepted") {
    const auto g = parse_maxcut("2 2\n1 2 4\n2 1 4");
    CHECK(g.weight(0, 1) == 4.0);
  }
}

TEST_CASE("parse_maxcut: errors carry line numbers") {
  auto line_of = [](const std::string& text) {
    try {
      parse_maxcut(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("nonsense") == 1);
  CHECK(line_of("2") == 1);                         // malformed header
  CHECK(line_of("2 1 7") == 1);                     // trailing token
  CHECK(line_of("2 1\n1 3 1") == 2);                // index out of range
  CHECK(line_of("2 1\n0 2 1") == 2);                // index below 1
  CHECK(line_of("2 1\n1 1 1") == 2);                // self-loop
  CHECK(line_of("2 2\n1 2 1\n1 2 2") == 3);         // conflicting duplicate
  CHECK(line_of("3 2\n1 2 1") == 3);                // missing edge line
  CHECK(line_of("2 1\n1 2 1\n1 2 1") == 3);         // trailing data
  CHECK(line_of("# c\n2 1\n1 2 x") == 3);           // bad weight token
}

TEST_CASE("maxcut_to_ising") {
  SUBCASE("unit triangle maps to all -1 couplings") {
    const auto p = maxcut_to_ising(unit_triangle());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(p.coupling(i, j) == (i == j ? 0.0 : -1.0));
    for (double b : p.field()) CHECK(b == 0.0);
  }
  SUBCASE("zero weights map to zero couplings") {
    const auto p = maxcut_to_ising(MaxCutInstance(4, {}));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) CHECK(p.coupling(i, j) == 0.0);
  }
  SUBCASE("single edge") {
    const auto p = maxcut_to_ising(parse_maxcut("2 1\n1 2 5"));
    CHECK(p.coupling(0, 1) == -5.0);
    CHECK(p.coupling(1, 0) == -5.0);
  }
}

TEST_CASE("ising_energy") {
  const IsingProblem ferro(2, {0, 1, 1, 0}, {0, 0});
  CHECK(ising_energy(ferro, cfg({1, 1})) == -1.0);
  CHECK(ising_energy(ferro, cfg({1, -1})) == 1.0);
  CHECK_THROWS_AS(ising_energy(ferro, cfg({1, 1, 1})), std::invalid_argument);

  SUBCASE("triangle example cross-checked by enumeration") {
    const auto g = unit_triangle();
    const auto p = maxcut_to_ising(g);
    CHECK(ising_energy(p, cfg({1, 1, -1})) == -1.0);
    // identity E = -(2 C + 1/2 sum J) over all 8 configurations
    const double jsum = p.coupling_sum();
    for (std::uint64_t bits = 0; bits < 8; ++bits) {
      const auto s = oracle::config_from_bits(3, bits);
      const SpinConfiguration c(s);
      CHECK(ising_energy(p, c) ==
            -(2.0 * cut_value(g, c) + 0.5 * jsum));
    }
  }
}

TEST_CASE("cut_value") {
  const auto g = unit_triangle();
  CHECK(cut_value(g, cfg({1, 1, -1})) == 2.0);
  CHECK(cut_value(g, cfg({1, 1, 1})) == 0.0);
  CHECK(cut_value(g, cfg({-1, -1, -1})) == 0.0);
  CHECK(oracle::naive_max_cut(g) == 2.0);
  CHECK_THROWS_AS(cut_value(g, cfg({1, -1})), std::invalid_argument);
}

TEST_CASE("binarize") {
  const std::vector<double> a{0.3, -0.7};
  CHECK(binarize(a) == cfg({1, -1}));
  const std::vector<double> zero{0.0};
  CHECK(binarize(zero) == cfg({1}));  // tie-break: zero is +1
  const std::vector<double> tiny{-1e-12, 1e-12};
  CHECK(binarize(tiny) == cfg({-1, 1}));
}

TEST_CASE("brute_force_optimum") {
  SUBCASE("two-spin ferromagnet") {
    const IsingProblem p(2, {0, 1, 1, 0}, {0, 0});
    const auto gs = brute_force_optimum(p);
    CHECK(gs.energy == -1.0);
    const bool aligned = gs.config == cfg({1, 1}) || gs.config == cfg({-1, -1});
    CHECK(aligned);
  }
  SUBCASE("unit triangle") {
    const auto p = maxcut_to_ising(unit_triangle());
    CHECK(brute_force_optimum(p).energy == -1.0);
    CHECK(brute_force_optimum(p).energy == oracle::naive_min_energy(p).first);
  }
  SUBCASE("single free spin") {
    const IsingProblem p(1, {0}, {0});
    CHECK(brute_force_optimum(p).energy == 0.0);
  }
  SUBCASE("nonzero field breaks the flip symmetry shortcut") {
    const IsingProblem p(2, {0, 1, 1, 0}, {0.5, -2.0});
    const auto gs = brute_force_optimum(p);
    CHECK(gs.energy == oracle::naive_min_energy(p).first);
    CHECK(ising_energy(p, gs.config) == gs.energy);
  }
  SUBCASE("rejects oversized problems") {
    const int n = kMaxBruteForceSpins + 1;
    const IsingProblem p(n, std::vector<double>(n * n, 0.0),
                         std::vector<double>(n, 0.0));
    CHECK_THROWS_AS(brute_force_optimum(p), std::invalid_argument);
  }
  SUBCASE("matches the naive oracle on random instances") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto g = oracle::random_instance(8, seed);
      const auto p = maxcut_to_ising(g);
      const auto gs = brute_force_optimum(p);
      CHECK(gs.energy == oracle::naive_min_energy(p).first);
      CHECK(ising_energy(p, gs.config) == gs.energy);
    }
  }
}

TEST_CASE("energy-cut identity holds exactly on random instances") {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const auto g = oracle::random_instance(7, seed);
    const auto p = maxcut_to_ising(g);
    const double jsum = p.coupling_sum();
    for (std::uint64_t bits = 0; bits < (1ull << 7); ++bits) {
      const SpinConfiguration c(oracle::config_from_bits(7, bits));
      CHECK(ising_energy(p, c) == -(2.0 * cut_value(g, c) + 0.5 * jsum));
    }
  }
}

TEST_CASE("argmax cut agrees with argmin energy (double enumeration)") {
  for (std::uint64_t seed = 200; seed < 206; ++seed) {
    const auto g = oracle::random_instance(10, seed);
    const auto p = maxcut_to_ising(g);
    const double best_cut = oracle::naive_max_cut(g);
    const double min_energy = oracle::naive_min_energy(p).first;
    CHECK(min_energy == -(2.0 * best_cut + 0.5 * p.coupling_sum()));
  }
}

TEST_CASE("spin-flip symmetry at b = 0") {
  const auto p = maxcut_to_ising(oracle::random_instance(9, 7));
  for (std::uint64_t bits = 0; bits < 64; ++bits) {
    auto s = oracle::config_from_bits(9, bits * 8 + 3);
    auto neg = s;
    for (int& v : neg) v = -v;
    CHECK(ising_energy(p, SpinConfiguration(s)) ==
          ising_energy(p, SpinConfiguration(neg)));
  }
}

TEST_CASE("serialize/parse round-trip") {
  for (std::uint64_t seed = 300; seed < 310; ++seed) {
    const auto g = oracle::random_instance(12, seed);
    const auto back = parse_maxcut(serialize_maxcut(g));
    CHECK(back.same_weights(g));
  }
  SUBCASE("fractional weights survive the round-trip") {
    const auto g = parse_maxcut("3 2\n1 2 0.1\n2 3 -3.7e-4");
    CHECK(parse_maxcut(serialize_maxcut(g)).same_weights(g));
  }
}

TEST_CASE("known optimum attachment") {
  auto p = maxcut_to_ising(unit_triangle());
  SUBCASE("attainable target is accepted") {
    p.set_known_optimum(-1.0);
    CHECK(p.known_optimum() == -1.0);
  }
  SUBCASE("unattainable target is rejected for small n") {
    CHECK_THROWS_AS(p.set_known_optimum(-100.0), std::invalid_argument);
    // 1.0 lies between the two energy levels {-1, 3} of the triangle
    CHECK_THROWS_AS(p.set_known_optimum(1.0), std::invalid_argument);
  }
  SUBCASE("target from a cut value") {
    CHECK(target_energy_from_cut(p, 2.0) == -1.0);
    p.set_known_optimum(target_energy_from_cut(p, 2.0));
    CHECK(p.known_optimum() == -1.0);
  }
}

TEST_CASE("optimum metadata parsing") {
  std::istringstream in("# best-known cuts\ng05_60.0 536\ng05_80.1 929\n");
  const auto m = parse_optima(in);
  CHECK(m.size() == 2);
  CHECK(m.at("g05_60.0") == 536.0);
  CHECK(m.at("g05_80.1") == 929.0);

  std::istringstream dup("a 1\na 2\n");
  CHECK_THROWS_AS(parse_optima(dup), ParseError);
  std::istringstream bad("a\n");
  CHECK_THROWS_AS(parse_optima(bad), ParseError);
}

TEST_CASE("type invariants are enforced") {
  CHECK_THROWS_AS(SpinConfiguration({1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(MaxCutInstance(0, {}), std::invalid_argument);
  std::vector<MaxCutInstance::Edge> self{{1, 1, 2.0}};
  CHECK_THROWS_AS(MaxCutInstance(3, self), std::invalid_argument);
  // asymmetric coupling
  CHECK_THROWS_AS(IsingProblem(2, {0, 1, 2, 0}, {0, 0}), std::invalid_argument);
  // nonzero diagonal
  CHECK_THROWS_AS(IsingProblem(2, {1, 0, 0, 0}, {0, 0}), std::invalid_argument);
}

TEST_CASE("random instance generator is deterministic and in spec") {
  const RandomGraphSpec spec{.n = 30, .edge_prob = 0.5};
  const auto a = make_random_instance(spec, 42);
  const auto b = make_random_instance(spec, 42);
  CHECK(a.same_weights(b));
  const auto c = make_random_instance(spec, 43);
  CHECK_FALSE(a.same_weights(c));
  int edges = 0;
  for (int i = 0; i < 30; ++i)
    for (int j = i + 1; j < 30; ++j)
      if (a.weight(i, j) != 0.0) {
        CHECK(a.weight(i, j) == 1.0);
        ++edges;
      }
  // 435 pairs at p = 0.5; loose band
  CHECK(edges > 150);
  CHECK(edges < 290);
}
