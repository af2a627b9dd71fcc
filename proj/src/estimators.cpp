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

#include "stateest/estimators.hpp"

#include <cmath>
#include <sstream>

#include "stateest/errors.hpp"

namespace stateest {
namespace {

double nu_of(const Observable& obs, const OutcomeCounts& counts, double value) {
  const int t = obs.index_of(value);
  return t < 0 ? 0.0 : relative_frequency(counts, static_cast<std::size_t>(t));
}

void require_outcomes(const OutcomeCounts& counts, std::size_t expected, std::string_view what) {
  if (counts.size() != expected) {
    std::ostringstream msg;
    msg << what << " expects " << expected << " outcomes, got " << counts.size();
    throw DomainError(msg.str());
  }
}

}  // namespace

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::ThreeDirection: return "three-direction";
    case Scheme::Standard: return "standard";
    case Scheme::Minimal: return "minimal";
  }
  return "unknown";
}

UnconstrainedEstimate unconstrained_estimate(const MeasurementPlan& plan,
                                             std::span<const OutcomeCounts> counts) {
  if (counts.size() != plan.size()) {
    std::ostringstream msg;
    msg << "expected counts for " << plan.size() << " observables, got " << counts.size();
    throw DomainError(msg.str());
  }
  const int k = plan.dim();
  ComplexMatrix phi = ComplexMatrix::Zero(k, k);
  double diagonal_sum = 0.0;
  for (std::size_t t = 0; t < plan.size(); ++t) {
    const PlanEntry& e = plan.entries()[t];
    const OutcomeCounts& c = counts[t];
    if (c.total() != plan.repetitions()) {
      std::ostringstream msg;
      msg << "observable " << e.label() << " has " << c.total() << " shots, plan requires "
          << plan.repetitions();
      throw DomainError(msg.str());
    }
    require_outcomes(c, e.observable.size(), e.label());
    switch (e.kind) {
      case PairKind::Z: {
        const double nu = nu_of(e.observable, c, 1.0);
        phi(e.i, e.i) = nu;
        diagonal_sum += nu;
        break;
      }
      case PairKind::X: {
        const double re = 0.5 * (nu_of(e.observable, c, 1.0) - nu_of(e.observable, c, -1.0));
        phi(e.i, e.j) += re;
        phi(e.j, e.i) += re;
        break;
      }
      case PairKind::Y: {
        const double im = 0.5 * (nu_of(e.observable, c, 1.0) - nu_of(e.observable, c, -1.0));
        phi(e.i, e.j) += Complex(0.0, im);
        phi(e.j, e.i) += Complex(0.0, -im);
        break;
      }
    }
  }
  phi(k - 1, k - 1) = 1.0 - diagonal_sum;
  return {TraceOneHermitian(HermitianMatrix(phi)), {counts.begin(), counts.end()}};
}

SimplexProjection project_nonneg_simplex(std::span<const double> x) {
  if (x.empty()) throw DomainError("cannot project an empty vector");
  double sum = 0.0;
  for (double v : x) {
    if (!std::isfinite(v)) throw DomainError("vector has non-finite entries");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "simplex projection requires entries summing to 1, got " << sum;
    throw DomainError(msg.str());
  }

  SimplexProjection out{{x.begin(), x.end()}, 0};
  std::vector<bool> zeroed(x.size(), false);
  std::size_t survivors = x.size();
  for (;;) {
    double deficit = 0.0;
    std::size_t removed = 0;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      if (!zeroed[i] && out.values[i] < 0.0) {
        deficit += out.values[i];
        out.values[i] = 0.0;
        zeroed[i] = true;
        ++removed;
      }
    }
    if (removed == 0) break;
    survivors -= removed;
    // Survivors hold total mass 1 - deficit > 0, so at least one remains.
    const double shift = deficit / static_cast<double>(survivors);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      if (!zeroed[i]) out.values[i] += shift;
    }
    ++out.steps;
  }
  return out;
}

ConstrainedEstimate constrained_estimate(const TraceOneHermitian& phi) {
  const Spectrum spectrum = hermitian_eig(phi.matrix());
  const std::vector<double> x(spectrum.eigenvalues.data(), spectrum.eigenvalues.data() + spectrum.eigenvalues.size());
  const SimplexProjection y = project_nonneg_simplex(x);
  if (y.steps == 0) return {DensityMatrix(phi.matrix()), 0};
  const RealVector projected = Eigen::Map<const RealVector>(y.values.data(), static_cast<Eigen::Index>(y.values.size()));
  return {DensityMatrix(compose(spectrum.eigenvectors, projected)), y.steps};
}

ConstrainedEstimate constrained_estimate(const UnconstrainedEstimate& phi) {
  return constrained_estimate(phi.matrix);
}

BlochVector qubit_constrain_bloch(const BlochVector& theta_hat) {
  const double norm = theta_hat.norm();
  if (norm <= 1.0) return theta_hat;
  return BlochVector{{theta_hat[0] / norm, theta_hat[1] / norm, theta_hat[2] / norm}};
}

SchemeEstimate three_direction_estimate(const std::array<double, 3>& plus_frequencies,
                                        const DirectionTriple& directions) {
  const Eigen::Vector3d shifted(2.0 * plus_frequencies[0] - 1.0, 2.0 * plus_frequencies[1] - 1.0,
                                2.0 * plus_frequencies[2] - 1.0);
  const Eigen::Vector3d theta = directions.inverse() * shifted;
  return {BlochVector{{theta(0), theta(1), theta(2)}}, Scheme::ThreeDirection};
}

SchemeEstimate three_direction_estimate(std::span<const OutcomeCounts> counts,
                                        const DirectionTriple& directions) {
  if (counts.size() != 3) throw DomainError("three-direction scheme expects counts for 3 observables");
  std::array<double, 3> nu{};
  for (std::size_t i = 0; i < 3; ++i) {
    require_outcomes(counts[i], 2, "direction observable");
    nu[i] = relative_frequency(counts[i], 0);
  }
  return three_direction_estimate(nu, directions);
}

SchemeEstimate standard_estimate(const OutcomeCounts& counts) {
  require_outcomes(counts, 6, "standard tomography");
  BlochVector theta;
  for (std::size_t i = 0; i < 3; ++i) {
    theta[i] = 3.0 * (relative_frequency(counts, i) - relative_frequency(counts, i + 3));
  }
  return {theta, Scheme::Standard};
}

SchemeEstimate minimal_estimate(const OutcomeCounts& counts) {
  require_outcomes(counts, 4, "minimal tomography");
  BlochVector theta;
  const auto& a = tetrahedron_vectors();
  for (std::size_t i = 0; i < 4; ++i) {
    const double nu = relative_frequency(counts, i);
    for (std::size_t c = 0; c < 3; ++c) theta[c] += 3.0 * nu * a[i][c];
  }
  return {theta, Scheme::Minimal};
}

}  // namespace stateest
