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

#pragma once

// Test-only generators and oracles. Nothing here calls into the estimation
// code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace stateest::testing {

using Cx = std::complex<double>;
using CMat = Eigen::MatrixXcd;

class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline CMat random_gaussian(int k, TestRng& rng) {
  CMat g(k, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i) g(i, j) = Cx(rng.normal(), rng.normal());
  return g;
}

inline CMat random_hermitian(int k, TestRng& rng) {
  const CMat g = random_gaussian(k, rng);
  return 0.5 * (g + g.adjoint());
}

// Unitary from Eigen's Householder QR.
inline CMat random_unitary(int k, TestRng& rng) {
  Eigen::HouseholderQR<CMat> qr(random_gaussian(k, rng));
  return qr.householderQ() * CMat::Identity(k, k);
}

// Hermitian, trace one, typically indefinite.
inline CMat random_trace_one(int k, TestRng& rng, double spread = 1.0) {
  CMat h = spread * random_hermitian(k, rng);
  const double shift = (1.0 - h.trace().real()) / k;
  h += shift * CMat::Identity(k, k);
  return h;
}

// Density matrix as G G^dagger / Tr, optionally rank deficient.
inline CMat random_state(int k, TestRng& rng, int rank = -1) {
  if (rank < 0) rank = k;
  CMat g = CMat::Zero(k, k);
  const CMat full = random_gaussian(k, rng);
  g.leftCols(rank) = full.leftCols(rank);
  CMat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

inline Eigen::Vector3d random_ball_point(TestRng& rng, double radius = 1.0) {
  for (;;) {
    Eigen::Vector3d v(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    if (v.norm() <= 1.0) return radius * v;
  }
}

inline Eigen::Vector3d random_unit_vector(TestRng& rng) {
  Eigen::Vector3d v(rng.normal(), rng.normal(), rng.normal());
  return v / v.norm();
}

inline double hs(const CMat& a, const CMat& b) { return (a - b).norm(); }

// Projection onto the PSD cone with Eigen's own eigensolver.
inline CMat psd_part(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (h + h.adjoint()));
  const Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * clipped.cast<Cx>().asDiagonal() * es.eigenvectors().adjoint();
}

// Hilbert-Schmidt projection onto {PSD, trace 1} by Dykstra's alternating
// projections between the PSD cone and the trace-one hyperplane.
inline CMat dykstra_density_projection(const CMat& phi, int max_iter = 200000, double tol = 1e-13) {
  const int k = static_cast<int>(phi.rows());
  CMat x = phi;
  CMat p = CMat::Zero(k, k);
  CMat q = CMat::Zero(k, k);
  for (int it = 0; it < max_iter; ++it) {
    const CMat y = psd_part(x + p);
    p = x + p - y;
    const CMat z = y + q;
    const double shift = (1.0 - z.trace().real()) / k;
    const CMat x_next = z + shift * CMat::Identity(k, k);
    q = z - x_next;
    const double change = (x_next - x).norm();
    x = x_next;
    if (change < tol && (x - psd_part(x)).norm() < tol) break;
  }
  return x;
}

// Same projection via its optimality conditions: (phi - mu I)_+ with mu
// found by bisection so that the trace is one.
inline CMat threshold_density_projection(const CMat& phi) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (phi + phi.adjoint()));
  const Eigen::VectorXd lambda = es.eigenvalues();
  const auto mass = [&](double mu) { return (lambda.array() - mu).cwiseMax(0.0).sum(); };
  double lo = lambda.minCoeff() - 1.0, hi = lambda.maxCoeff();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mass(mid) > 1.0 ? lo : hi) = mid;
  }
  const Eigen::VectorXd clipped = (lambda.array() - 0.5 * (lo + hi)).cwiseMax(0.0);
  return es.eigenvectors() * clipped.cast<Cx>().asDiagonal() * es.eigenvectors().adjoint();
}

// Closest point on the simplex by brute-force search over a grid of step h
// (k = 3 only).
inline std::vector<double> grid_simplex_projection(const std::vector<double>& x, double h) {
  std::vector<double> best{0, 0, 1};
  double best_d = 1e300;
  const int steps = static_cast<int>(std::lround(1.0 / h));
  for (int a = 0; a <= steps; ++a) {
    for (int b = 0; a + b <= steps; ++b) {
      const double y0 = a * h, y1 = b * h, y2 = 1.0 - y0 - y1;
      const double d = (x[0] - y0) * (x[0] - y0) + (x[1] - y1) * (x[1] - y1) + (x[2] - y2) * (x[2] - y2);
      if (d < best_d) {
        best_d = d;
        best = {y0, y1, y2};
      }
    }
  }
  return best;
}

// Classic sort-and-threshold simplex projection.
inline std::vector<double> sort_simplex_projection(const std::vector<double>& x) {
  std::vector<double> u = x;
  std::sort(u.rbegin(), u.rend());
  double cumulative = 0.0, tau = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumulative += u[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) tau = candidate;
  }
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::max(x[i] - tau, 0.0);
  return y;
}

// Enumerates every joint single-shot outcome of a list of discrete
// distributions and calls fn(outcome indices, joint probability).
inline void enumerate_outcomes(const std::vector<std::vector<double>>& dists,
                               const std::function<void(const std::vector<int>&, double)>& fn) {
  std::vector<int> idx(dists.size(), 0);
  for (;;) {
    double p = 1.0;
    for (std::size_t d = 0; d < dists.size(); ++d) p *= dists[d][static_cast<std::size_t>(idx[d])];
    fn(idx, p);
    std::size_t d = 0;
    while (d < dists.size()) {
      if (++idx[d] < static_cast<int>(dists[d].size())) break;
      idx[d] = 0;
      ++d;
    }
    if (d == dists.size()) return;
  }
}

// Binomial pmf via log-gamma, 0 < p < 1.
inline std::vector<double> binomial_pmf(int n, double p) {
  std::vector<double> pmf(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    double lg = std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0);
    pmf[static_cast<std::size_t>(j)] = std::exp(lg + j * std::log(p) + (n - j) * std::log1p(-p));
  }
  return pmf;
}

}  // namespace stateest::testing
