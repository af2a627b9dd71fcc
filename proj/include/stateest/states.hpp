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
#include <variant>
#include <vector>

#include "stateest/matrix.hpp"
#include "stateest/rng.hpp"

namespace stateest {

/// Self-adjoint matrix of trace one; may be indefinite.
class TraceOneHermitian {
 public:
  static constexpr double kTraceTolerance = 1e-9;

  explicit TraceOneHermitian(HermitianMatrix matrix);

  const HermitianMatrix& matrix() const noexcept { return matrix_; }
  int dim() const noexcept { return matrix_.dim(); }

 private:
  HermitianMatrix matrix_;
};

/// Positive semidefinite, trace-one matrix: a proper quantum state.
class DensityMatrix {
 public:
  static constexpr double kTraceTolerance = 1e-9;
  static constexpr double kPsdTolerance = 1e-9;

  explicit DensityMatrix(HermitianMatrix matrix);

  static DensityMatrix maximally_mixed(int dim);

  const HermitianMatrix& matrix() const noexcept { return matrix_; }
  int dim() const noexcept { return matrix_.dim(); }
  TraceOneHermitian as_trace_one() const { return TraceOneHermitian(matrix_); }

 private:
  HermitianMatrix matrix_;
};

/// Qubit Bloch vector. Deliberately unconstrained: unconstrained estimates
/// routinely leave the unit ball.
struct BlochVector {
  std::array<double, 3> theta{0.0, 0.0, 0.0};

  double norm() const;
  bool is_state() const;
  double operator[](std::size_t i) const { return theta[i]; }
  double& operator[](std::size_t i) { return theta[i]; }
};

/// Pauli matrix sigma_i, i in {0,1,2,3} (sigma_0 = I).
const HermitianMatrix& pauli(int i);

/// 1/2 (I + theta . sigma).
TraceOneHermitian bloch_to_matrix(const BlochVector& theta);

/// theta_i = Tr(M sigma_i); requires a 2 x 2 input.
BlochVector matrix_to_bloch(const HermitianMatrix& m);
BlochVector matrix_to_bloch(const TraceOneHermitian& m);

/// Haar-distributed unitary: Gram-Schmidt on a complex Gaussian matrix.
ComplexMatrix random_unitary(int dim, RngStream& rng);

struct UniformSimplex {};
struct FixedSpectrum {
  std::vector<double> eigenvalues;
};
using SpectrumMode = std::variant<UniformSimplex, FixedSpectrum>;

/// U diag(lambda) U^dagger with U Haar-random and lambda either uniform on the
/// probability simplex or the given eigenvalues.
DensityMatrix random_density(int dim, RngStream& rng, const SpectrumMode& mode = UniformSimplex{});

}  // namespace stateest
