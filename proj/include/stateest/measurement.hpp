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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stateest/matrix.hpp"
#include "stateest/rng.hpp"
#include "stateest/states.hpp"

namespace stateest {

struct Outcome {
  double value;
  HermitianMatrix projector;
};

/// Projective measurement given by its spectral decomposition.
/// Projectors are idempotent, mutually orthogonal and resolve the identity
/// (all within 1e-10); outcome values are distinct.
class Observable {
 public:
  static constexpr double kTolerance = 1e-10;

  explicit Observable(std::vector<Outcome> outcomes);

  int dim() const noexcept { return outcomes_.front().projector.dim(); }
  std::size_t size() const noexcept { return outcomes_.size(); }
  const std::vector<Outcome>& outcomes() const noexcept { return outcomes_; }

  /// Index of the outcome with the given value, or -1.
  int index_of(double value) const;

  /// sum_t value_t P_t.
  HermitianMatrix matrix() const;

 private:
  std::vector<Outcome> outcomes_;
};

/// Effect list: each effect PSD and all summing to the identity (1e-10).
class Povm {
 public:
  static constexpr double kTolerance = 1e-10;

  explicit Povm(std::vector<HermitianMatrix> effects);

  int dim() const noexcept { return effects_.front().dim(); }
  std::size_t size() const noexcept { return effects_.size(); }
  const std::vector<HermitianMatrix>& effects() const noexcept { return effects_; }

 private:
  std::vector<HermitianMatrix> effects_;
};

/// Tally of r repeated single-copy measurements.
class OutcomeCounts {
 public:
  explicit OutcomeCounts(std::vector<std::uint64_t> counts);

  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  std::uint64_t total() const noexcept { return total_; }
  std::size_t size() const noexcept { return counts_.size(); }
  std::uint64_t operator[](std::size_t i) const { return counts_[i]; }

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_;
};

double relative_frequency(const OutcomeCounts& counts, std::size_t outcome);

// Indices below are zero-based; the one-based E_ij with 1 <= i < j <= k
// corresponds to (i-1, j-1) here.

/// E_ij + E_ji with outcomes ordered (+1, -1, 0); the 0 outcome is omitted
/// for k = 2 where its projector vanishes.
Observable pair_observable_x(int dim, int i, int j);

/// iE_ij - iE_ji, outcomes (+1, -1, 0). Expectation is 2 Im rho_ij.
Observable pair_observable_y(int dim, int i, int j);

/// E_ii, outcomes (1, 0).
Observable diag_observable_z(int dim, int i);

/// u . sigma for a unit vector u, outcomes (+1, -1).
Observable direction_observable(const std::array<double, 3>& u);

/// Six-outcome Pauli POVM: P_i / 3 for i = 1..3 then Q_i / 3.
Povm standard_povm();

/// Tetrahedron vectors a_1..a_4.
const std::array<std::array<double, 3>, 4>& tetrahedron_vectors();

/// Four-outcome POVM F_i = 1/4 (I + a_i . sigma).
Povm minimal_povm();

/// Tr(rho P_t) (resp. Tr(rho F_i)). Entries above -1e-12 are clipped to 0 and
/// the vector renormalized; anything more negative throws DomainError.
std::vector<double> outcome_probabilities(const Observable& m, const DensityMatrix& rho);
std::vector<double> outcome_probabilities(const Povm& m, const DensityMatrix& rho);

/// Multinomial draw of r shots by per-shot inverse-CDF lookup.
OutcomeCounts sample_counts(std::span<const double> probs, std::uint64_t r, RngStream& rng);

enum class PairKind { Z, X, Y };

struct PlanEntry {
  PairKind kind;
  int i;
  int j;  // equals i for Z
  Observable observable;

  /// Display label with one-based indices, e.g. "Z11", "X12", "Y23".
  std::string label() const;
};

/// The k^2 - 1 observables of the k-level scheme, each measured r times.
///
/// Order: Z_ii for i < k, then X_ij, Y_ij for each pair i < j. `copy_slot`
/// maps an observable index to its slot within each block of k^2 - 1 copies;
/// it fixes which physical copy a shot uses and never changes distributions.
class MeasurementPlan {
 public:
  MeasurementPlan(int dim, std::uint64_t repetitions);
  MeasurementPlan(int dim, std::uint64_t repetitions, std::vector<int> copy_slot);

  int dim() const noexcept { return dim_; }
  std::uint64_t repetitions() const noexcept { return repetitions_; }
  const std::vector<PlanEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Total copies consumed: r (k^2 - 1).
  std::uint64_t total_copies() const noexcept { return repetitions_ * entries_.size(); }

  /// Copy consumed by the m-th repetition of observable `index`.
  std::uint64_t copy_index(std::size_t index, std::uint64_t m) const;

  /// Index of the observable with the given kind and (zero-based) indices, or -1.
  int find(PairKind kind, int i, int j) const;

  /// Sample every observable r times on fresh copies of rho.
  std::vector<OutcomeCounts> sample(const DensityMatrix& rho, RngStream& rng) const;

 private:
  int dim_;
  std::uint64_t repetitions_;
  std::vector<PlanEntry> entries_;
  std::vector<int> copy_slot_;
};

/// Three measurement directions u(1), u(2), u(3) as the rows of T.
class DirectionTriple {
 public:
  explicit DirectionTriple(const Eigen::Matrix3d& rows);

  static DirectionTriple orthonormal() { return DirectionTriple(Eigen::Matrix3d::Identity()); }

  const Eigen::Matrix3d& matrix() const noexcept { return rows_; }
  std::array<double, 3> direction(int i) const;

  /// Throws DomainError when |det T| <= 1e-12.
  Eigen::Matrix3d inverse() const;

 private:
  Eigen::Matrix3d rows_;
};

}  // namespace stateest
