#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "test_paths.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

CliResult im(const std::string& args) {
  static int counter = 0;
  const fs::path dir = fs::path(kScratchDir);
  fs::create_directories(dir);
  const fs::path out = dir / ("out" + std::to_string(counter) + ".txt");
  const fs::path err = dir / ("err" + std::to_string(counter) + ".txt");
  ++counter;
  const std::string cmd = std::string(kImBinary) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return {WEXITSTATUS(status), slurp(out), slurp(err)};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

/// Tiny two-vertex instance with its optimum sidecar; written once.
struct Fixture {
  fs::path problem;
  fs::path optima;
  Fixture() {
    const fs::path dir = fs::path(kScratchDir);
    fs::create_directories(dir);
    problem = dir / "ferro2";
    optima = dir / "ferro2.opt";
    spit(problem, "2 1\n1 2 1\n");
    spit(optima, "ferro2 1\n");
  }
};

const Fixture& fixture() {
  static Fixture f;
  return f;
}

}  // namespace

TEST_CASE("solve reports success on a solvable instance") {
  const auto r = im("solve --problem " + fixture().problem.string() +
                    " --optima " + fixture().optima.string() +
                    " --alpha 1.1 --beta 0.2 --iterations 300 --seed 4");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "best_energy -1"));
  CHECK(contains(r.out, "best_cut 1"));
  CHECK(contains(r.out, "success true"));
  CHECK(contains(r.out, "first_success_iteration "));
}

TEST_CASE("solve without optima reports an unknown success flag") {
  const auto r = im("solve --problem " + fixture().problem.string() +
                    " --iterations 50 --seed 1");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "success unknown"));
  CHECK(contains(r.out, "first_success_iteration none"));
}

TEST_CASE("missing instance file exits 1 with a machine-readable error") {
  const auto r = im("solve --problem /definitely/not/here");
  CHECK(r.exit_code == 1);
  CHECK(r.err.rfind("error: io:", 0) == 0);
}

TEST_CASE("malformed instance file exits 1 with the line number") {
  const fs::path bad = fs::path(kScratchDir) / "bad";
  spit(bad, "2 1\n1 5 1\n");
  const auto r = im("solve --problem " + bad.string());
  CHECK(r.exit_code == 1);
  CHECK(contains(r.err, "error: parse: line 2"));
}

TEST_CASE("invalid parameters exit 2") {
  const std::string base = "--problem " + fixture().problem.string() +
                           " --optima " + fixture().optima.string();
  CHECK(im("scan " + base + " --alpha-min 2 --alpha-max 1").exit_code == 2);
  CHECK(im("solve --problem " + fixture().problem.string() + " --h 0").exit_code == 2);
  CHECK(im("sweep banana " + base).exit_code == 2);
  CHECK(im("sweep h " + base + " --values ''").exit_code == 2);
  CHECK(im("scan " + base + " --runs 0").exit_code == 2);
}

TEST_CASE("missing optimum record exits 2") {
  const fs::path other = fs::path(kScratchDir) / "other.opt";
  spit(other, "someone-else 3\n");
  const auto r = im("scan --problem " + fixture().problem.string() +
                    " --optima " + other.string());
  CHECK(r.exit_code == 2);
  CHECK(contains(r.err, "no optimum recorded"));
}

TEST_CASE("solve output and trace are bit-reproducible for a fixed seed") {
  const fs::path t1 = fs::path(kScratchDir) / "t1.csv";
  const fs::path t2 = fs::path(kScratchDir) / "t2.csv";
  const std::string base = "solve --problem " + fixture().problem.string() +
                           " --optima " + fixture().optima.string() +
                           " --h 1 --alpha 0.9 --beta 0.1 --iterations 100 "
                           "--seed 77 --trace ";
  const auto a = im(base + t1.string());
  const auto b = im(base + t2.string());
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(slurp(t1) == slurp(t2));
  CHECK(contains(slurp(t1), "iteration,energy,x0,x1\n"));
}

TEST_CASE("scan writes a single-cell csv for a 1x1 grid") {
  const fs::path out = fs::path(kScratchDir) / "cell.csv";
  const auto r = im("scan --problem " + fixture().problem.string() +
                    " --optima " + fixture().optima.string() +
                    " --alpha-min 1.1 --alpha-max 1.1 --beta-min 0.2 "
                    "--beta-max 0.2 --alpha-steps 1 --beta-steps 1 --runs 2 "
                    "--iterations 200 --out " + out.string());
  CHECK(r.exit_code == 0);
  const std::string csv = slurp(out);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "alpha,beta,h,gamma,iterations,runs,successes,tsr");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(contains(r.out, "aoo_percent "));
  CHECK(contains(r.out, "alpha_min 1.1"));
}

TEST_CASE("scan csv is byte-identical across worker counts") {
  const fs::path w1 = fs::path(kScratchDir) / "w1.csv";
  const fs::path w8 = fs::path(kScratchDir) / "w8.csv";
  const std::string base = "scan --problem " + fixture().problem.string() +
                           " --optima " + fixture().optima.string() +
                           " --alpha-steps 4 --beta-steps 3 --runs 3 "
                           "--iterations 150 --seed 5 ";
  CHECK(im(base + "--workers 1 --out " + w1.string()).exit_code == 0);
  CHECK(im(base + "--workers 8 --out " + w8.string()).exit_code == 0);
  const std::string a = slurp(w1), b = slurp(w8);
  CHECK(!a.empty());
  CHECK(a == b);
}

TEST_CASE("sweep h with default values produces six rows") {
  const fs::path out = fs::path(kScratchDir) / "sweeph.csv";
  const auto r = im("sweep h --problem " + fixture().problem.string() +
                    " --optima " + fixture().optima.string() +
                    " --alpha-steps 2 --beta-steps 2 --runs 1 --iterations 40"
                    " --out " + out.string());
  CHECK(r.exit_code == 0);
  const std::string csv = slurp(out);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "sweep_param,value,aoo_percent,nonzero_cells,total_cells");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);  // header + 6
  CHECK(contains(csv, "h,0.01,"));
  CHECK(contains(csv, "h,1,"));
}

TEST_CASE("sweep runtime with default values produces six rows") {
  const fs::path out = fs::path(kScratchDir) / "sweepr.csv";
  const auto r = im("sweep runtime --problem " + fixture().problem.string() +
                    " --optima " + fixture().optima.string() +
                    " --alpha-steps 2 --beta-steps 1 --runs 1 --values "
                    "10,20,30,40,50,60 --out " + out.string());
  CHECK(r.exit_code == 0);
  const std::string csv = slurp(out);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  CHECK(contains(csv, "iterations,10,"));
}

TEST_CASE("bifurcation below threshold reports no detection") {
  const fs::path out = fs::path(kScratchDir) / "bif.csv";
  const auto r = im("bifurcation --alpha-min 0.5 --alpha-max 0.85 "
                    "--alpha-steps 8 --samples 10 --h 1 --iterations 300 "
                    "--out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "detected_threshold none"));
  CHECK(contains(slurp(out), "# detected_threshold = not detected"));
}

TEST_CASE("bifurcation finds the threshold with defaults-sized protocol") {
  // compressed variant of the default protocol (h = 1 settles quickly)
  const fs::path out = fs::path(kScratchDir) / "bif_thr.csv";
  const auto r = im("bifurcation --h 1 --iterations 500 --samples 20 "
                    "--alpha-steps 21 --seed 9 --out " + out.string());
  CHECK(r.exit_code == 0);
  REQUIRE(r.out.rfind("detected_threshold ", 0) == 0);
  const double v = std::stod(r.out.substr(19, r.out.find('\n') - 19));
  CHECK(std::abs(v - 1.0) <= 0.05 + 1e-9);
}

TEST_CASE("help enumerates the paper-protocol defaults") {
  const auto scan_help = im("scan --help");
  CHECK(scan_help.exit_code == 0);
  CHECK(contains(scan_help.out, "250"));    // runs per cell
  CHECK(contains(scan_help.out, "5000"));   // iterations
  CHECK(contains(scan_help.out, "0.01"));   // gamma
  CHECK(contains(scan_help.out, "21"));     // grid resolution
  CHECK(contains(scan_help.out, "0.5"));    // boundaries
  const auto top_help = im("--help");
  CHECK(top_help.exit_code == 0);
  CHECK(contains(top_help.out, "solve"));
  CHECK(contains(top_help.out, "scan"));
  CHECK(contains(top_help.out, "sweep"));
  CHECK(contains(top_help.out, "bifurcation"));
}

TEST_CASE("config file fills defaults and flags override it") {
  const fs::path cfg = fs::path(kScratchDir) / "run.cfg";
  spit(cfg, "# experiment defaults\nalpha = 1.3\nbeta = 0.25\n");
  const fs::path ta = fs::path(kScratchDir) / "cfg_a.csv";
  const fs::path tb = fs::path(kScratchDir) / "cfg_b.csv";
  const fs::path tc = fs::path(kScratchDir) / "cfg_c.csv";
  const std::string base = "solve --problem " + fixture().problem.string() +
                           " --iterations 60 --seed 3 --trace ";

  const auto via_cfg = im(base + ta.string() + " --config " + cfg.string());
  const auto via_flags = im(base + tb.string() + " --alpha 1.3 --beta 0.25");
  CHECK(via_cfg.exit_code == 0);
  CHECK(slurp(ta) == slurp(tb));

  // flag wins over file
  const auto overridden =
      im(base + tc.string() + " --config " + cfg.string() + " --alpha 0.9");
  const fs::path td = fs::path(kScratchDir) / "cfg_d.csv";
  const auto direct = im(base + td.string() + " --alpha 0.9 --beta 0.25");
  CHECK(overridden.exit_code == 0);
  CHECK(slurp(tc) == slurp(td));
}

TEST_CASE("an explicitly empty sweep value list exits 2") {
  const fs::path cfg = fs::path(kScratchDir) / "empty_values.cfg";
  spit(cfg, "values =\n");
  const auto r = im("sweep h --problem " + fixture().problem.string() +
                    " --optima " + fixture().optima.string() + " --config " +
                    cfg.string());
  CHECK(r.exit_code == 2);
}

TEST_CASE("unknown config keys are rejected") {
  const fs::path cfg = fs::path(kScratchDir) / "bad.cfg";
  spit(cfg, "alhpa = 1.3\n");
  const auto r = im("solve --problem " + fixture().problem.string() +
                    " --config " + cfg.string());
  CHECK(r.exit_code == 2);
  CHECK(contains(r.err, "unknown key"));
}

TEST_CASE("progress goes to stderr, keeping stdout machine-parseable") {
  const auto r = im("scan --problem " + fixture().problem.string() +
                    " --optima " + fixture().optima.string() +
                    " --alpha-steps 3 --beta-steps 3 --runs 1 --iterations 60");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.err, "cells"));
  CHECK(r.out.rfind("alpha,beta,", 0) == 0);  // csv on stdout when no --out
}
