// Copyright 2026 The stateest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Every check uses a fixed seed, so results are reproducible.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "stateest/error_analysis.hpp"
#include "stateest/estimators.hpp"
#include "stateest/simulation.hpp"
#include "stateest_cli.hpp"
#include "test_support.hpp"

namespace {

using namespace stateest;
using testing::CMat;

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

Eigen::Vector3d to_vec(const BlochVector& b) { return {b[0], b[1], b[2]}; }
BlochVector to_bloch(const Eigen::Vector3d& v) { return {{v(0), v(1), v(2)}}; }

OutcomeCounts one_shot(std::size_t m, std::size_t t) {
  std::vector<std::uint64_t> c(m, 0);
  c[t] = 1;
  return OutcomeCounts(c);
}

DensityMatrix reference_state() {
  ExperimentConfig cfg;
  cfg.state = RandomSpectrumState{{0.1186, 0.2871, 0.5943}};
  return resolve_state(cfg);
}

// Runs the CLI in-process and returns (exit code, stdout).
std::pair<int, std::string> cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  std::vector<std::string> argv{"stateest"};
  argv.insert(argv.end(), args.begin(), args.end());
  const int code = cli::run(argv, out, err);
  return {code, out.str() + err.str()};
}

Verdict projection_exactness() {
  struct Case {
    std::string input;
    std::vector<double> expected;
    int steps;
  };
  const std::vector<Case> cases{
      {"[[0.5,0,0],[0,-0.5,0],[0,0,1]]", {0.25, 0.0, 0.75}, 1},
      {"[[0.16666666666666666,0,0],[0,-0.5,0],[0,0,1.3333333333333333]]", {0.0, 0.0, 1.0}, 2},
  };
  double worst = 0.0;
  for (const Case& c : cases) {
    const auto [code, text] = cli({"project", "--matrix", c.input});
    if (code != 0) return {false, "project exited with " + std::to_string(code) + ": " + text};
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j["steps"].get<int>() != c.steps) return {false, "wrong step count for " + c.input};
    const ComplexMatrix m = cli::parse_matrix(j["matrix"]);
    const ComplexMatrix target = HermitianMatrix::diagonal(c.expected).entries();
    worst = std::max(worst, (m - target).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-12, fmt("max entry error %.2e, steps 1 and 2", worst)};
}

Verdict projection_optimality() {
  testing::TestRng rng(101);
  RngStream competitors(102);
  double worst_margin = -1e300, worst_threshold = 0.0, worst_dykstra = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 2 + trial % 3;
    const CMat raw = testing::random_trace_one(k, rng, 0.3 + 0.2 * (trial % 5));
    const TraceOneHermitian phi{HermitianMatrix(raw)};
    const ConstrainedEstimate c = constrained_estimate(phi);
    const double best = hs_distance(phi.matrix(), c.matrix.matrix());
    for (int w = 0; w < 100; ++w) {
      const DensityMatrix omega = random_density(k, competitors);
      worst_margin = std::max(worst_margin, best - hs_distance(phi.matrix(), omega.matrix()));
    }
    worst_threshold = std::max(worst_threshold, testing::hs(c.matrix.matrix().entries(),
                                                            testing::threshold_density_projection(raw)));
    if (trial % 10 == 0) {
      worst_dykstra = std::max(worst_dykstra, testing::hs(c.matrix.matrix().entries(),
                                                          testing::dykstra_density_projection(raw)));
    }
  }
  const bool pass = worst_margin <= 1e-9 && worst_threshold <= 1e-6 && worst_dykstra <= 1e-6;
  return {pass, fmt("max(d_est - d_random) %.2e, QP oracle gaps: threshold %.2e, Dykstra %.2e", worst_margin,
                    worst_threshold, worst_dykstra)};
}

Verdict unbiasedness() {
  testing::TestRng rng(201);
  double worst = 0.0;
  const Povm stand = standard_povm();
  const Povm min = minimal_povm();
  for (int trial = 0; trial < 200; ++trial) {
    // k-level scheme, alternating k = 2 and k = 3.
    const int k = 2 + trial % 2;
    const DensityMatrix rho{HermitianMatrix(testing::random_state(k, rng))};
    const MeasurementPlan plan(k, 1);
    std::vector<std::vector<double>> dists;
    for (const auto& e : plan.entries()) dists.push_back(outcome_probabilities(e.observable, rho));
    CMat mean = CMat::Zero(k, k);
    testing::enumerate_outcomes(dists, [&](const std::vector<int>& idx, double p) {
      if (p == 0.0) return;
      std::vector<OutcomeCounts> counts;
      for (std::size_t o = 0; o < idx.size(); ++o) counts.push_back(one_shot(dists[o].size(), static_cast<std::size_t>(idx[o])));
      mean += p * unconstrained_estimate(plan, counts).matrix.matrix().entries();
    });
    worst = std::max(worst, (mean - rho.matrix().entries()).cwiseAbs().maxCoeff());

    // Qubit schemes at a random Bloch vector.
    const Eigen::Vector3d t = testing::random_ball_point(rng);
    const DensityMatrix q(bloch_to_matrix(to_bloch(t)).matrix());
    Eigen::Vector3d ms = Eigen::Vector3d::Zero(), mm = Eigen::Vector3d::Zero(), md = Eigen::Vector3d::Zero();
    const auto ps = outcome_probabilities(stand, q);
    for (std::size_t j = 0; j < 6; ++j) ms += ps[j] * to_vec(standard_estimate(one_shot(6, j)).theta_hat);
    const auto pm = outcome_probabilities(min, q);
    for (std::size_t j = 0; j < 4; ++j) mm += pm[j] * to_vec(minimal_estimate(one_shot(4, j)).theta_hat);
    Eigen::Matrix3d rows;
    do {
      for (int i = 0; i < 3; ++i) rows.row(i) = testing::random_unit_vector(rng).transpose();
    } while (std::abs(rows.determinant()) < 0.05);
    const DirectionTriple dirs = trial % 4 == 0 ? DirectionTriple::orthonormal() : DirectionTriple(rows);
    std::vector<std::vector<double>> dd;
    for (int i = 0; i < 3; ++i) dd.push_back(outcome_probabilities(direction_observable(dirs.direction(i)), q));
    testing::enumerate_outcomes(dd, [&](const std::vector<int>& idx, double p) {
      const std::vector<OutcomeCounts> c{one_shot(2, static_cast<std::size_t>(idx[0])),
                                         one_shot(2, static_cast<std::size_t>(idx[1])),
                                         one_shot(2, static_cast<std::size_t>(idx[2]))};
      md += p * to_vec(three_direction_estimate(c, dirs).theta_hat);
    });
    worst = std::max({worst, (ms - t).cwiseAbs().maxCoeff(), (mm - t).cwiseAbs().maxCoeff(),
                      (md - t).cwiseAbs().maxCoeff()});
  }

  const DensityMatrix rho = reference_state();
  const EstimateMeans means = klevel_estimate_means(rho, 10, 100000, RngStream(202), 0);
  double worst_z = 0.0;
  bool mc_ok = true;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Complex d = means.unconstrained.mean(i, j) - rho.matrix()(i, j);
      const Complex se = means.unconstrained.standard_error(i, j);
      const auto part = [&](double dev, double s) {
        if (s > 0.0) worst_z = std::max(worst_z, std::abs(dev) / s);
        if (std::abs(dev) > 4.0 * s + 1e-12) mc_ok = false;
      };
      part(d.real(), se.real());
      part(d.imag(), se.imag());
    }
  }
  return {worst <= 1e-10 && mc_ok,
          fmt("analytic max deviation %.2e over 200 states x 4 schemes; Monte Carlo worst |z| %.2f (limit 4)", worst,
              worst_z)};
}

Verdict pure_state_pathology() {
  // Exhaustive enumeration of count triples for the plus state.
  const DensityMatrix plus = plus_state();
  double max_det = -1e300, worst_mean = 0.0;
  for (int r = 1; r <= 6; ++r) {
    const MeasurementPlan plan(2, static_cast<std::uint64_t>(r));
    std::vector<std::vector<double>> pmfs;
    for (const auto& e : plan.entries()) {
      const std::vector<double> p = outcome_probabilities(e.observable, plus);
      std::vector<double> pmf(static_cast<std::size_t>(r) + 1, 0.0);
      // Number of "first outcome" results; the other outcome takes the rest.
      if (p[0] <= 0.0 || p[0] >= 1.0) {
        pmf[p[0] >= 1.0 ? static_cast<std::size_t>(r) : 0] = 1.0;
      } else {
        pmf = testing::binomial_pmf(r, p[0]);
      }
      pmfs.push_back(pmf);
    }
    double mean = 0.0;
    testing::enumerate_outcomes(pmfs, [&](const std::vector<int>& a, double p) {
      if (p == 0.0) return;
      std::vector<OutcomeCounts> counts;
      for (int v : a) {
        counts.push_back(OutcomeCounts({static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(r - v)}));
      }
      const double det = determinant(unconstrained_estimate(plan, counts).matrix.matrix());
      max_det = std::max(max_det, det);
      mean += p * det;
    });
    worst_mean = std::max(worst_mean, std::abs(mean + 1.0 / (2.0 * r)));
  }

  ExperimentConfig cfg;
  cfg.state = BlochVector{{1, 0, 0}};
  cfg.schedule = {10, 100, 1000};
  cfg.trials = 4000;
  cfg.seed = 401;
  cfg.metrics = {Metric::PsdFraction, Metric::DetMean};
  const TrajectoryRecord rec = run_trajectory(cfg, 0);
  double max_psd = 0.0, worst_z = 0.0;
  bool det_ok = true;
  for (std::size_t s = 0; s < 3; ++s) {
    const TrajectoryPoint& psd = rec.points[2 * s];
    const TrajectoryPoint& det = rec.points[2 * s + 1];
    max_psd = std::max(max_psd, psd.mean);
    const double oracle = -1.0 / (2.0 * static_cast<double>(cfg.schedule[s]));
    worst_z = std::max(worst_z, std::abs(det.mean - oracle) / det.standard_error);
    if (std::abs(det.mean - oracle) > 5.0 * det.standard_error) det_ok = false;
  }
  const bool pass = max_det <= 1e-15 && worst_mean <= 1e-12 && max_psd <= 0.1 && det_ok;
  return {pass, fmt("enumerated max det %.2e (r<=6); max psd-fraction %.4f; det-mean worst |z| %.2f vs -1/(2r)",
                    max_det, max_psd, worst_z)};
}

Verdict exponential_decay() {
  const std::vector<std::uint64_t> schedule{10, 20, 40, 60, 80, 100, 130, 160};
  const DecayFit fit = indefinite_decay_rate(reference_state(), schedule, 10000, RngStream(501), 0);
  double lo = 1.0, hi = 0.0;
  for (const DecayPoint& p : fit.points) {
    lo = std::min(lo, p.indefinite_fraction);
    hi = std::max(hi, p.indefinite_fraction);
  }
  const bool in_range = lo > 1e-3 && hi < 0.9;
  const bool pass = in_range && !fit.partial && fit.slope < 0.0 && fit.r_squared >= 0.9 &&
                    fit.fitted_points == schedule.size();
  return {pass, fmt("p in [%.4f, %.4f], slope %.3e per copy", lo, hi, fit.slope) +
                    fmt(", R^2 %.4f", fit.r_squared)};
}

Verdict mse_formula_validation() {
  const std::vector<BlochVector> thetas{{{0, 0, 0}}, {{0.6, 0, 0}}, {{0.3, 0.4, 0.5}}};
  const std::uint64_t n = 30, trials = 100000;
  double worst_z = 0.0;
  bool pass = true;
  std::uint64_t stream = 0;
  for (const BlochVector& theta : thetas) {
    const std::vector<std::pair<QubitScheme, Eigen::Matrix3d>> cases{
        {ThreeDirectionScheme{}, mse_complementary(theta, static_cast<double>(n)).entries},
        {StandardScheme{}, mse_standard(theta, static_cast<double>(n)).entries},
        {MinimalScheme{}, mse_minimal(theta, static_cast<double>(n)).entries},
    };
    for (const auto& [scheme, formula] : cases) {
      const EmpiricalMse e = empirical_mse(scheme, theta, n, trials, RngStream(601, stream++), 0);
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          const double dev = std::abs(e.mse.entries(i, j) - formula(i, j));
          const double se = e.standard_error(i, j);
          if (se > 0.0) worst_z = std::max(worst_z, dev / se);
          if (dev > 5.0 * se + 1e-12) pass = false;
        }
      }
    }
  }
  return {pass, fmt("9 scheme/theta pairs, 1e5 trials each, worst |z| %.2f (limit 5)", worst_z)};
}

Verdict standard_vs_complementary() {
  const double n = 30.0;
  const std::vector<BlochVector> grid = ball_grid(14);
  Eigen::Matrix3d m;
  m << 2, -1, -1, -1, 2, -1, -1, -1, 2;
  double min_eig = 1e300, worst = 0.0;
  for (const BlochVector& theta : grid) {
    const StandardVsComplementary c = compare_standard_vs_complementary(theta, n);
    min_eig = std::min(min_eig, c.min_eigenvalue);
    const Eigen::Vector3d t = to_vec(theta);
    const Eigen::Matrix3d expected = m.cwiseProduct(t * t.transpose()) / n;
    worst = std::max(worst, (c.difference - expected).cwiseAbs().maxCoeff());
  }
  const bool pass = grid.size() >= 1000 && min_eig >= -1e-12 && worst <= 1e-12;
  return {pass, fmt("%.0f grid points, min eigenvalue %.2e, max |diff - M o tt^T/n| %.2e",
                    static_cast<double>(grid.size()), min_eig, worst)};
}

Verdict optimal_directions() {
  testing::TestRng rng(801);
  const long samples = 10'000'000;
  double sum = 0.0;
  for (long s = 0; s < samples; ++s) {
    const Eigen::Vector3d theta = testing::random_ball_point(rng);
    const Eigen::Vector3d u = testing::random_unit_vector(rng);
    sum += 1.0 - std::pow(u.dot(theta), 2);
  }
  const double c_mc = sum / static_cast<double>(samples);
  const BallAverage ortho = average_mse_over_ball(DirectionTriple::orthonormal());
  const double c_impl = ortho.matrix(0, 0);
  int worse = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::Matrix3d t;
    for (int i = 0; i < 3; ++i) t.row(i) = testing::random_unit_vector(rng).transpose();
    if (std::abs(t.determinant()) <= 1e-12) continue;  // singular: average error unbounded
    if (average_mse_over_ball(DirectionTriple(t)).determinant < ortho.determinant) ++worse;
  }
  const bool pass = std::abs(c_impl - c_mc) <= 1e-3 && std::abs(c_impl - 0.8) <= 1e-15 && worse == 0;
  return {pass, fmt("C = %.6f, Monte Carlo %.6f (1e7 samples); %.0f of 1000 random triples beat orthonormal", c_impl,
                    c_mc, worse)};
}

Verdict trace_inequality() {
  const std::uint64_t n = 30;
  std::size_t violations = 0;
  double worst = 0.0;
  const std::vector<BlochVector> grid = ball_grid(14);
  for (const BlochVector& theta : grid) {
    const TraceComparison t = compare_traces_min_vs_comp(theta, n);
    if (!t.complementary_not_worse || t.trace_complementary > t.trace_minimal) ++violations;
    const double r2 = theta.norm() * theta.norm();
    worst = std::max({worst, std::abs(t.trace_complementary - 3.0 * (3.0 - r2) / n),
                      std::abs(t.trace_minimal - (9.0 - r2) / n)});
  }
  const Eigen::Vector3d ev = minimal_minus_complementary_eigenvalues({{0, 0, 0.5}}, static_cast<double>(n));
  const bool mixed = ev(0) < 0.0 && ev(2) > 0.0;
  return {violations == 0 && worst <= 1e-12 && mixed,
          fmt("%.0f violations on grid, closed-form gap %.2e, eigenvalues at (0,0,0.5): min %.3e", violations, worst,
              ev(0)) +
              fmt(" max %.3e", ev(2))};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict reproducibility() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / ("stateest_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(root);
  const fs::path config = root / "config.json";
  {
    std::ofstream out(config);
    out << R"({"state": {"random_spectrum": [0.1186, 0.2871, 0.5943]}, "scheme": "klevel-pairs",
               "schedule": [1, 5, 25, 125], "trials": 500, "seed": 1001,
               "metrics": ["hs-unconstrained", "hs-constrained", "fidelity-constrained", "psd-fraction", "det-mean"]})";
  }
  const std::vector<std::pair<std::string, std::string>> runs{{"a", "1"}, {"b", "1"}, {"c", "4"}};
  for (const auto& [dir, workers] : runs) {
    const auto [code, text] = cli({"simulate", "--config", config.string(), "--out", (root / dir).string(),
                                   "--workers", workers});
    if (code != 0) return {false, "simulate exited with " + std::to_string(code) + ": " + text};
  }
  int files = 0;
  bool same = true;
  for (const char* metric : {"hs-unconstrained", "hs-constrained", "fidelity-constrained", "psd-fraction", "det-mean"}) {
    const std::string name = std::string(metric) + ".csv";
    const std::string a = slurp(root / "a" / name);
    same = same && !a.empty() && a == slurp(root / "b" / name) && a == slurp(root / "c" / name);
    ++files;
  }
  fs::remove_all(root);
  return {same, fmt("%.0f CSV files compared across 2 runs and worker counts 1 and 4", files)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"1 projection exactness", projection_exactness},
      {"2 projection optimality oracle", projection_optimality},
      {"3 unbiasedness", unbiasedness},
      {"4 pure-state pathology", pure_state_pathology},
      {"5 exponential decay", exponential_decay},
      {"6 MSE formula validation", mse_formula_validation},
      {"7 standard vs complementary", standard_vs_complementary},
      {"8 optimal directions", optimal_directions},
      {"9 trace inequality", trace_inequality},
      {"10 reproducibility", reproducibility},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
