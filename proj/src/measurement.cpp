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

#include "stateest/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "stateest/errors.hpp"

namespace stateest {
namespace {

using namespace std::complex_literals;

constexpr double kNegativeProbabilityTolerance = 1e-12;

ComplexMatrix unit(int dim, int i, int j) {
  ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
  e(i, j) = 1.0;
  return e;
}

void require_pair(int dim, int i, int j) {
  if (dim < 2 || i < 0 || j >= dim || i >= j) {
    std::ostringstream msg;
    msg << "pair indices out of range: need 0 <= i < j < " << dim << ", got (" << i << ", " << j
        << ")";
    throw DomainError(msg.str());
  }
}

// Two-sided pair observable: +1 and -1 projectors as given, 0 on the rest.
Observable pair_observable(int dim, int i, int j, const ComplexMatrix& plus,
                           const ComplexMatrix& minus) {
  std::vector<Outcome> outcomes;
  outcomes.push_back({1.0, HermitianMatrix(plus)});
  outcomes.push_back({-1.0, HermitianMatrix(minus)});
  if (dim > 2) {
    ComplexMatrix rest = ComplexMatrix::Zero(dim, dim);
    for (int m = 0; m < dim; ++m) {
      if (m != i && m != j) rest(m, m) = 1.0;
    }
    outcomes.push_back({0.0, HermitianMatrix(rest)});
  }
  return Observable(std::move(outcomes));
}

double trace_product(const HermitianMatrix& rho, const HermitianMatrix& p) {
  double sum = 0.0;
  for (int i = 0; i < rho.dim(); ++i) {
    for (int j = 0; j < rho.dim(); ++j) sum += (rho(i, j) * p(j, i)).real();
  }
  return sum;
}

std::vector<double> normalize_probabilities(std::vector<double> probs) {
  double sum = 0.0;
  for (std::size_t t = 0; t < probs.size(); ++t) {
    if (probs[t] < -kNegativeProbabilityTolerance) {
      std::ostringstream msg;
      msg << "outcome " << t << " has negative probability " << probs[t];
      throw DomainError(msg.str());
    }
    probs[t] = std::max(probs[t], 0.0);
    sum += probs[t];
  }
  for (double& p : probs) p /= sum;
  return probs;
}

HermitianMatrix direction_projector(const std::array<double, 3>& u, double sign) {
  ComplexMatrix m = pauli(0).entries();
  for (int a = 0; a < 3; ++a) {
    m += sign * u[static_cast<std::size_t>(a)] * pauli(a + 1).entries();
  }
  return HermitianMatrix(0.5 * m);
}

}  // namespace

Observable::Observable(std::vector<Outcome> outcomes) : outcomes_(std::move(outcomes)) {
  if (outcomes_.empty()) throw DomainError("observable needs at least one outcome");
  const int k = outcomes_.front().projector.dim();
  ComplexMatrix total = ComplexMatrix::Zero(k, k);
  for (std::size_t s = 0; s < outcomes_.size(); ++s) {
    const ComplexMatrix& ps = outcomes_[s].projector.entries();
    if (ps.rows() != k) throw DomainError("observable projectors differ in dimension");
    if ((ps * ps - ps).norm() > kTolerance) throw DomainError("observable projector is not idempotent");
    for (std::size_t t = s + 1; t < outcomes_.size(); ++t) {
      if (outcomes_[s].value == outcomes_[t].value) {
        throw DomainError("observable outcome values must be distinct");
      }
      if ((ps * outcomes_[t].projector.entries()).norm() > kTolerance) {
        throw DomainError("observable projectors are not mutually orthogonal");
      }
    }
    total += ps;
  }
  if ((total - ComplexMatrix::Identity(k, k)).norm() > kTolerance) {
    throw DomainError("observable projectors do not sum to the identity");
  }
}

int Observable::index_of(double value) const {
  for (std::size_t t = 0; t < outcomes_.size(); ++t) {
    if (outcomes_[t].value == value) return static_cast<int>(t);
  }
  return -1;
}

HermitianMatrix Observable::matrix() const {
  ComplexMatrix m = ComplexMatrix::Zero(dim(), dim());
  for (const auto& o : outcomes_) m += o.value * o.projector.entries();
  return HermitianMatrix(m);
}

Povm::Povm(std::vector<HermitianMatrix> effects) : effects_(std::move(effects)) {
  if (effects_.empty()) throw DomainError("POVM needs at least one effect");
  const int k = effects_.front().dim();
  ComplexMatrix total = ComplexMatrix::Zero(k, k);
  for (const auto& f : effects_) {
    if (f.dim() != k) throw DomainError("POVM effects differ in dimension");
    if (!is_psd(f, kTolerance)) throw DomainError("POVM effect is not positive semidefinite");
    total += f.entries();
  }
  if ((total - ComplexMatrix::Identity(k, k)).norm() > kTolerance) {
    throw DomainError("POVM effects do not sum to the identity");
  }
}

OutcomeCounts::OutcomeCounts(std::vector<std::uint64_t> counts)
    : counts_(std::move(counts)), total_(std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0})) {
  if (counts_.empty()) throw DomainError("outcome counts must not be empty");
  if (total_ == 0) throw DomainError("outcome counts must record at least one shot");
}

double relative_frequency(const OutcomeCounts& counts, std::size_t outcome) {
  if (outcome >= counts.size()) throw DomainError("outcome index out of range");
  return static_cast<double>(counts[outcome]) / static_cast<double>(counts.total());
}

Observable pair_observable_x(int dim, int i, int j) {
  require_pair(dim, i, j);
  const ComplexMatrix eii = unit(dim, i, i), ejj = unit(dim, j, j);
  const ComplexMatrix off = unit(dim, i, j) + unit(dim, j, i);
  return pair_observable(dim, i, j, 0.5 * (eii + off + ejj), 0.5 * (eii - off + ejj));
}

Observable pair_observable_y(int dim, int i, int j) {
  require_pair(dim, i, j);
  const ComplexMatrix eii = unit(dim, i, i), ejj = unit(dim, j, j);
  const ComplexMatrix off = 1i * unit(dim, i, j) - 1i * unit(dim, j, i);
  return pair_observable(dim, i, j, 0.5 * (eii + off + ejj), 0.5 * (eii - off + ejj));
}

Observable diag_observable_z(int dim, int i) {
  if (dim < 2 || i < 0 || i >= dim) throw DomainError("diagonal index out of range");
  const ComplexMatrix eii = unit(dim, i, i);
  return Observable({{1.0, HermitianMatrix(eii)},
                     {0.0, HermitianMatrix(ComplexMatrix::Identity(dim, dim) - eii)}});
}

Observable direction_observable(const std::array<double, 3>& u) {
  const double norm = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
  if (std::abs(norm - 1.0) > 1e-9) throw DomainError("direction must be a unit vector");
  return Observable({{1.0, direction_projector(u, 1.0)}, {-1.0, direction_projector(u, -1.0)}});
}

Povm standard_povm() {
  std::vector<HermitianMatrix> effects;
  for (double sign : {1.0, -1.0}) {
    for (int a = 0; a < 3; ++a) {
      std::array<double, 3> e{0.0, 0.0, 0.0};
      e[static_cast<std::size_t>(a)] = 1.0;
      effects.push_back((1.0 / 3.0) * direction_projector(e, sign));
    }
  }
  return Povm(std::move(effects));
}

const std::array<std::array<double, 3>, 4>& tetrahedron_vectors() {
  static const std::array<std::array<double, 3>, 4> vectors = [] {
    const double s = 1.0 / std::sqrt(3.0);
    return std::array<std::array<double, 3>, 4>{{{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}}};
  }();
  return vectors;
}

Povm minimal_povm() {
  std::vector<HermitianMatrix> effects;
  for (const auto& a : tetrahedron_vectors()) effects.push_back(0.5 * direction_projector(a, 1.0));
  return Povm(std::move(effects));
}

std::vector<double> outcome_probabilities(const Observable& m, const DensityMatrix& rho) {
  if (m.dim() != rho.dim()) throw DomainError("observable and state dimensions differ");
  std::vector<double> probs;
  probs.reserve(m.size());
  for (const auto& o : m.outcomes()) probs.push_back(trace_product(rho.matrix(), o.projector));
  return normalize_probabilities(std::move(probs));
}

std::vector<double> outcome_probabilities(const Povm& m, const DensityMatrix& rho) {
  if (m.dim() != rho.dim()) throw DomainError("POVM and state dimensions differ");
  std::vector<double> probs;
  probs.reserve(m.size());
  for (const auto& f : m.effects()) probs.push_back(trace_product(rho.matrix(), f));
  return normalize_probabilities(std::move(probs));
}

OutcomeCounts sample_counts(std::span<const double> probs, std::uint64_t r, RngStream& rng) {
  if (r == 0) throw DomainError("number of shots must be positive");
  if (probs.empty()) throw DomainError("probability vector must not be empty");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw DomainError("probabilities must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw DomainError("probabilities must sum to 1");

  // Cumulative table with every entry from the last nonzero outcome on pinned
  // to 1, so rounding never selects a zero-probability outcome.
  std::vector<double> cdf(probs.size());
  std::partial_sum(probs.begin(), probs.end(), cdf.begin());
  std::size_t last = probs.size() - 1;
  while (last > 0 && probs[last] == 0.0) --last;
  std::fill(cdf.begin() + static_cast<std::ptrdiff_t>(last), cdf.end(), 1.0);

  std::vector<std::uint64_t> counts(probs.size(), 0);
  for (std::uint64_t shot = 0; shot < r; ++shot) {
    const double u = rng.uniform();
    std::size_t t = 0;
    while (cdf[t] <= u) ++t;
    ++counts[t];
  }
  return OutcomeCounts(std::move(counts));
}

std::string PlanEntry::label() const {
  const char* name = kind == PairKind::Z ? "Z" : (kind == PairKind::X ? "X" : "Y");
  return std::string(name) + std::to_string(i + 1) + std::to_string(j + 1);
}

MeasurementPlan::MeasurementPlan(int dim, std::uint64_t repetitions)
    : MeasurementPlan(dim, repetitions, {}) {}

MeasurementPlan::MeasurementPlan(int dim, std::uint64_t repetitions, std::vector<int> copy_slot)
    : dim_(dim), repetitions_(repetitions), copy_slot_(std::move(copy_slot)) {
  if (dim < 2) throw DomainError("dimension must be at least 2");
  if (repetitions == 0) throw DomainError("repetitions must be positive");
  for (int i = 0; i + 1 < dim; ++i) {
    entries_.push_back({PairKind::Z, i, i, diag_observable_z(dim, i)});
  }
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      entries_.push_back({PairKind::X, i, j, pair_observable_x(dim, i, j)});
      entries_.push_back({PairKind::Y, i, j, pair_observable_y(dim, i, j)});
    }
  }
  const std::size_t n = entries_.size();
  if (copy_slot_.empty()) {
    copy_slot_.resize(n);
    std::iota(copy_slot_.begin(), copy_slot_.end(), 0);
  }
  std::vector<int> sorted = copy_slot_;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> expected(n);
  std::iota(expected.begin(), expected.end(), 0);
  if (sorted != expected) throw DomainError("copy slot assignment must be a bijection onto 0..k^2-2");
}

std::uint64_t MeasurementPlan::copy_index(std::size_t index, std::uint64_t m) const {
  if (index >= entries_.size() || m >= repetitions_) throw DomainError("copy index out of range");
  return m * entries_.size() + static_cast<std::uint64_t>(copy_slot_[index]);
}

int MeasurementPlan::find(PairKind kind, int i, int j) const {
  for (std::size_t t = 0; t < entries_.size(); ++t) {
    const auto& e = entries_[t];
    if (e.kind == kind && e.i == i && e.j == j) return static_cast<int>(t);
  }
  return -1;
}

std::vector<OutcomeCounts> MeasurementPlan::sample(const DensityMatrix& rho, RngStream& rng) const {
  if (rho.dim() != dim_) throw DomainError("state and plan dimensions differ");
  std::vector<OutcomeCounts> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) {
    const auto probs = outcome_probabilities(e.observable, rho);
    out.push_back(sample_counts(probs, repetitions_, rng));
  }
  return out;
}

DirectionTriple::DirectionTriple(const Eigen::Matrix3d& rows) : rows_(rows) {
  if (!rows.allFinite()) throw DomainError("direction matrix has non-finite entries");
  for (int i = 0; i < 3; ++i) {
    if (std::abs(rows.row(i).norm() - 1.0) > 1e-9) {
      throw DomainError("measurement directions must be unit vectors");
    }
  }
}

std::array<double, 3> DirectionTriple::direction(int i) const {
  return {rows_(i, 0), rows_(i, 1), rows_(i, 2)};
}

Eigen::Matrix3d DirectionTriple::inverse() const {
  if (std::abs(rows_.determinant()) <= 1e-12) throw DomainError("direction matrix is singular");
  return rows_.inverse();
}

}  // namespace stateest
