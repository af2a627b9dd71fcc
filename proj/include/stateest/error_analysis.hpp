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

#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "stateest/estimators.hpp"
#include "stateest/measurement.hpp"
#include "stateest/rng.hpp"
#include "stateest/states.hpp"

namespace stateest {

/// 3 x 3 mean quadratic error matrix of a Bloch-vector estimator.
struct MseMatrix {
  Eigen::Matrix3d entries;
  double samples;  // total copies n behind the matrix

  double trace() const { return entries.trace(); }
  double determinant() const { return entries.determinant(); }
};

/// 1 - E[(u . theta)^2] for theta uniform in the unit ball and |u| = 1.
/// E[theta_i theta_j] = delta_ij / 5 for the uniform ball.
inline constexpr double kBallAverageFactor = 4.0 / 5.0;

/// (1/r) T^{-1} diag(1 - (u(i) . theta)^2) T^{-T}; consumes n = 3r copies.
MseMatrix mse_three_direction(const BlochVector& theta, const DirectionTriple& directions,
                              std::uint64_t repetitions);

/// Complementary (sigma_1, sigma_2, sigma_3) scheme with n total copies split
/// evenly: (3/n) diag(1 - theta_i^2). n need not be divisible by 3 here.
MseMatrix mse_complementary(const BlochVector& theta, double n);

/// (1/n) [3 delta_ij - theta_i theta_j].
MseMatrix mse_standard(const BlochVector& theta, double n);

/// (1/n) [3 delta_ij - theta_i theta_j + sqrt(3) theta_m] with m the index
/// complementary to (i, j) off the diagonal.
MseMatrix mse_minimal(const BlochVector& theta, double n);

struct ThreeDirectionScheme {
  DirectionTriple directions = DirectionTriple::orthonormal();
};
struct StandardScheme {};
struct MinimalScheme {};
using QubitScheme = std::variant<ThreeDirectionScheme, StandardScheme, MinimalScheme>;

struct EmpiricalMse {
  MseMatrix mse;
  Eigen::Matrix3d standard_error;  // Monte Carlo standard error per entry
  std::uint64_t trials;
};

/// Monte Carlo mean quadratic error of a scheme's unconstrained estimator.
///
/// n is the total copy count (three-direction uses r = n / 3 per direction,
/// so n must be divisible by 3). Trial t draws from rng.derive(t); results are
/// bit-identical for any worker count.
EmpiricalMse empirical_mse(const QubitScheme& scheme, const BlochVector& theta, std::uint64_t n,
                           std::uint64_t trials, const RngStream& rng, unsigned workers = 1);

struct BallAverage {
  Eigen::Matrix3d matrix;  // C (T^T T)^{-1}
  double determinant;
};

/// Average of the single-copy three-direction error matrix over the
/// uniformly weighted Bloch ball.
BallAverage average_mse_over_ball(const DirectionTriple& directions);

struct StandardVsComplementary {
  Eigen::Matrix3d difference;  // V_stand - V_comp
  double min_eigenvalue;
  bool is_psd;
};

StandardVsComplementary compare_standard_vs_complementary(const BlochVector& theta, double n);

struct TraceComparison {
  double trace_complementary;
  double trace_minimal;
  bool complementary_not_worse;
};

/// Throws DomainError unless n is a positive multiple of 3.
TraceComparison compare_traces_min_vs_comp(const BlochVector& theta, std::uint64_t n);

/// Eigenvalues (ascending) of V_min - V_comp at n total copies.
Eigen::Vector3d minimal_minus_complementary_eigenvalues(const BlochVector& theta, double n);

/// Eigenvalues (ascending) of a real symmetric 3 x 3 matrix.
Eigen::Vector3d symmetric_eigenvalues(const Eigen::Matrix3d& m);

/// PSD up to -1e-12 * max(1, |m|_F).
bool is_psd_matrix(const Eigen::Matrix3d& m);

/// Points of the cube grid {-1 + 2a/s : a = 0..s}^3 inside the closed unit ball.
std::vector<BlochVector> ball_grid(int subdivisions);

}  // namespace stateest
