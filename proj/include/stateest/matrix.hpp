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

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace stateest {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Dense k x k self-adjoint matrix, k >= 2.
///
/// Construction rejects non-finite entries and any entry pair whose
/// Hermitian defect exceeds 1e-12 (relative to max(1, largest entry)).
/// Inputs within tolerance are stored with the upper triangle mirrored into
/// the lower one and with exactly real diagonal entries.
class HermitianMatrix {
 public:
  static constexpr double kHermitianTolerance = 1e-12;

  explicit HermitianMatrix(const ComplexMatrix& entries);

  static HermitianMatrix identity(int dim);
  static HermitianMatrix diagonal(const std::vector<double>& values);

  int dim() const noexcept { return static_cast<int>(entries_.rows()); }
  const ComplexMatrix& entries() const noexcept { return entries_; }
  Complex operator()(int i, int j) const { return entries_(i, j); }

  double trace() const;

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a);

 private:
  ComplexMatrix entries_;
};

/// Eigendecomposition H = U diag(eigenvalues) U^dagger.
struct Spectrum {
  RealVector eigenvalues;  // sorted descending
  ComplexMatrix eigenvectors;  // columns are orthonormal eigenvectors
};

struct EigOptions {
  int max_sweeps = 100;
  double relative_tolerance = 1e-14;
};

/// Cyclic complex Jacobi diagonalization.
/// Throws ConvergenceError (carrying the residual off-diagonal norm) when the
/// off-diagonal Frobenius mass is still above tolerance after max_sweeps.
Spectrum hermitian_eig(const HermitianMatrix& h, const EigOptions& options = {});

/// Hilbert-Schmidt distance sqrt(Tr (A-B)^2).
double hs_distance(const HermitianMatrix& a, const HermitianMatrix& b);

double hs_norm(const HermitianMatrix& a);

/// Fidelity of two trace-one matrices.
///
/// For k = 2 the closed form Re(Tr AB + 2 sqrt(det A det B)) is used, which
/// stays defined for indefinite inputs and may then exceed 1. For k > 2 both
/// arguments must be PSD (else UnsupportedInput) and the Uhlmann form
/// (Tr sqrt(sqrt(A) B sqrt(A)))^2 is evaluated.
double fidelity(const HermitianMatrix& a, const HermitianMatrix& b);

/// Uhlmann fidelity via eigendecompositions; any dimension, PSD inputs only.
double uhlmann_fidelity(const HermitianMatrix& a, const HermitianMatrix& b);

bool is_psd(const HermitianMatrix& h, double tol);

double min_eigenvalue(const HermitianMatrix& h);

/// Product of eigenvalues.
double determinant(const HermitianMatrix& h);

/// U diag(values) U^dagger, re-validated as Hermitian.
HermitianMatrix compose(const ComplexMatrix& unitary, const RealVector& values);

}  // namespace stateest
