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

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "stateest/measurement.hpp"
#include "stateest/states.hpp"

namespace stateest {

/// Entrywise frequency estimate; Hermitian and trace one but possibly
/// indefinite.
struct UnconstrainedEstimate {
  TraceOneHermitian matrix;
  std::vector<OutcomeCounts> counts;
};

/// Hilbert-Schmidt-closest density matrix to an unconstrained estimate.
struct ConstrainedEstimate {
  DensityMatrix matrix;
  int steps;  // redistribution passes of the eigenvalue projection
};

enum class Scheme { ThreeDirection, Standard, Minimal };

std::string_view scheme_name(Scheme s);

struct SchemeEstimate {
  BlochVector theta_hat;
  Scheme scheme;

  TraceOneHermitian matrix() const { return bloch_to_matrix(theta_hat); }
};

/// Counts must follow the plan's observable order, each with r shots.
///   diagonal:   Phi_ii = nu(Z_ii, 1), Phi_kk = 1 - sum of the others
///   real part:  Re Phi_ij = (nu(X_ij, +1) - nu(X_ij, -1)) / 2
///   imag part:  Im Phi_ij = (nu(Y_ij, +1) - nu(Y_ij, -1)) / 2
UnconstrainedEstimate unconstrained_estimate(const MeasurementPlan& plan,
                                             std::span<const OutcomeCounts> counts);

struct SimplexProjection {
  std::vector<double> values;
  int steps;
};

/// Euclidean projection of a sum-one vector onto the probability simplex.
///
/// Each pass zeroes the negative entries and spreads their (negative) total
/// evenly over the surviving entries; passes repeat until nothing is
/// negative. Terminates in at most k - 1 passes.
SimplexProjection project_nonneg_simplex(std::span<const double> x);

/// Diagonalize, project the eigenvalues onto the simplex, rotate back.
/// A PSD input (no projection pass needed) is returned bit-for-bit.
ConstrainedEstimate constrained_estimate(const TraceOneHermitian& phi);
ConstrainedEstimate constrained_estimate(const UnconstrainedEstimate& phi);

/// Radial projection of a qubit Bloch vector onto the unit ball.
BlochVector qubit_constrain_bloch(const BlochVector& theta_hat);

/// Solves nu_i = (1 + u(i) . theta) / 2 for theta, i.e. T^{-1} (2 nu - 1).
SchemeEstimate three_direction_estimate(const std::array<double, 3>& plus_frequencies,
                                        const DirectionTriple& directions);

/// Per-direction counts of the (+1, -1) outcomes of each u(i) . sigma.
SchemeEstimate three_direction_estimate(std::span<const OutcomeCounts> counts,
                                        const DirectionTriple& directions);

/// theta_i = 3 (nu_i - nu_{i+3}) over the six outcomes of standard_povm().
SchemeEstimate standard_estimate(const OutcomeCounts& counts);

/// theta = 3 sum_i nu_i a_i over the four outcomes of minimal_povm().
SchemeEstimate minimal_estimate(const OutcomeCounts& counts);

}  // namespace stateest
