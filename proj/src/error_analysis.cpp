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

#include "stateest/error_analysis.hpp"

#include <cmath>
#include <sstream>

#include "parallel.hpp"
#include "stateest/errors.hpp"

namespace stateest {
namespace {

Eigen::Vector3d as_vector(const BlochVector& theta) { return {theta[0], theta[1], theta[2]}; }

void require_in_ball(const BlochVector& theta) {
  if (!theta.is_state()) {
    std::ostringstream msg;
    msg << "Bloch vector must lie in the closed unit ball, norm " << theta.norm();
    throw DomainError(msg.str());
  }
}

void require_positive(double n) {
  if (!(n > 0.0)) throw DomainError("sample count must be positive");
}

}  // namespace

MseMatrix mse_three_direction(const BlochVector& theta, const DirectionTriple& directions,
                              std::uint64_t repetitions) {
  require_in_ball(theta);
  if (repetitions == 0) throw DomainError("repetitions must be positive");
  const Eigen::Matrix3d inv = directions.inverse();
  const Eigen::Vector3d projections = directions.matrix() * as_vector(theta);
  const Eigen::Vector3d variances = (1.0 - projections.array().square()).matrix();
  const auto r = static_cast<double>(repetitions);
  return {inv * variances.asDiagonal() * inv.transpose() / r, 3.0 * r};
}

MseMatrix mse_complementary(const BlochVector& theta, double n) {
  require_in_ball(theta);
  require_positive(n);
  const Eigen::Vector3d t = as_vector(theta);
  return {Eigen::Matrix3d((3.0 / n) * (1.0 - t.array().square()).matrix().asDiagonal()), n};
}

MseMatrix mse_standard(const BlochVector& theta, double n) {
  require_in_ball(theta);
  require_positive(n);
  const Eigen::Vector3d t = as_vector(theta);
  return {(3.0 * Eigen::Matrix3d::Identity() - t * t.transpose()) / n, n};
}

MseMatrix mse_minimal(const BlochVector& theta, double n) {
  require_in_ball(theta);
  require_positive(n);
  const Eigen::Vector3d t = as_vector(theta);
  const double s3 = std::sqrt(3.0);
  Eigen::Matrix3d m = 3.0 * Eigen::Matrix3d::Identity() - t * t.transpose();
  m(0, 1) += s3 * t(2);
  m(1, 0) += s3 * t(2);
  m(0, 2) += s3 * t(1);
  m(2, 0) += s3 * t(1);
  m(1, 2) += s3 * t(0);
  m(2, 1) += s3 * t(0);
  return {m / n, n};
}

EmpiricalMse empirical_mse(const QubitScheme& scheme, const BlochVector& theta, std::uint64_t n,
                           std::uint64_t trials, const RngStream& rng, unsigned workers) {
  require_in_ball(theta);
  if (trials < 100) throw DomainError("empirical MSE needs at least 100 trials");
  if (n == 0) throw DomainError("sample count must be positive");
  const DensityMatrix rho(bloch_to_matrix(theta).matrix());

  // Outcome distributions depend only on the state; compute them once.
  std::vector<std::vector<double>> probs;
  std::uint64_t shots = n;
  if (const auto* three = std::get_if<ThreeDirectionScheme>(&scheme)) {
    if (n % 3 != 0) throw DomainError("three-direction scheme needs n divisible by 3");
    shots = n / 3;
    for (int i = 0; i < 3; ++i) {
      probs.push_back(outcome_probabilities(direction_observable(three->directions.direction(i)), rho));
    }
  } else if (std::holds_alternative<StandardScheme>(scheme)) {
    probs.push_back(outcome_probabilities(standard_povm(), rho));
  } else {
    probs.push_back(outcome_probabilities(minimal_povm(), rho));
  }

  const Eigen::Vector3d truth = as_vector(theta);
  std::vector<Eigen::Vector3d> deviations(trials);
  detail::parallel_for(trials, workers, [&](std::uint64_t t) {
    RngStream stream = rng.derive(t);
    SchemeEstimate est{};
    if (const auto* three = std::get_if<ThreeDirectionScheme>(&scheme)) {
      std::vector<OutcomeCounts> counts;
      for (const auto& p : probs) counts.push_back(sample_counts(p, shots, stream));
      est = three_direction_estimate(counts, three->directions);
    } else if (std::holds_alternative<StandardScheme>(scheme)) {
      est = standard_estimate(sample_counts(probs[0], shots, stream));
    } else {
      est = minimal_estimate(sample_counts(probs[0], shots, stream));
    }
    deviations[t] = as_vector(est.theta_hat) - truth;
  });

  Eigen::Matrix3d sum = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d sum_sq = Eigen::Matrix3d::Zero();
  for (const auto& d : deviations) {
    const Eigen::Matrix3d outer = d * d.transpose();
    sum += outer;
    sum_sq += outer.cwiseProduct(outer);
  }
  const auto count = static_cast<double>(trials);
  const Eigen::Matrix3d mean = sum / count;
  const Eigen::Matrix3d variance =
      ((sum_sq / count - mean.cwiseProduct(mean)) * (count / (count - 1.0))).cwiseMax(0.0);
  return {{mean, static_cast<double>(n)}, (variance / count).cwiseSqrt(), trials};
}

BallAverage average_mse_over_ball(const DirectionTriple& directions) {
  const Eigen::Matrix3d inv = directions.inverse();
  const Eigen::Matrix3d avg = kBallAverageFactor * inv * inv.transpose();
  return {avg, avg.determinant()};
}

Eigen::Vector3d symmetric_eigenvalues(const Eigen::Matrix3d& m) {
  const Eigen::Vector3d desc = hermitian_eig(HermitianMatrix(m.cast<Complex>())).eigenvalues;
  return desc.reverse();
}

bool is_psd_matrix(const Eigen::Matrix3d& m) {
  return symmetric_eigenvalues(m)(0) >= -1e-12 * std::max(1.0, m.norm());
}

StandardVsComplementary compare_standard_vs_complementary(const BlochVector& theta, double n) {
  const Eigen::Matrix3d diff = mse_standard(theta, n).entries - mse_complementary(theta, n).entries;
  const double lowest = symmetric_eigenvalues(diff)(0);
  return {diff, lowest, lowest >= -1e-12 * std::max(1.0, diff.norm())};
}

TraceComparison compare_traces_min_vs_comp(const BlochVector& theta, std::uint64_t n) {
  if (n == 0 || n % 3 != 0) throw DomainError("trace comparison needs n divisible by 3");
  const double comp = mse_three_direction(theta, DirectionTriple::orthonormal(), n / 3).trace();
  const double min = mse_minimal(theta, static_cast<double>(n)).trace();
  return {comp, min, comp <= min + 1e-12 * std::abs(min)};
}

Eigen::Vector3d minimal_minus_complementary_eigenvalues(const BlochVector& theta, double n) {
  return symmetric_eigenvalues(mse_minimal(theta, n).entries - mse_complementary(theta, n).entries);
}

std::vector<BlochVector> ball_grid(int subdivisions) {
  if (subdivisions < 1) throw DomainError("grid needs at least one subdivision");
  std::vector<BlochVector> points;
  const auto coord = [subdivisions](int a) { return -1.0 + 2.0 * a / subdivisions; };
  for (int a = 0; a <= subdivisions; ++a) {
    for (int b = 0; b <= subdivisions; ++b) {
      for (int c = 0; c <= subdivisions; ++c) {
        BlochVector theta{{coord(a), coord(b), coord(c)}};
        if (theta.norm() <= 1.0 + 1e-12) points.push_back(theta);
      }
    }
  }
  return points;
}

}  // namespace stateest
