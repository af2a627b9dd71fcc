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

#include "stateest/states.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "stateest/errors.hpp"

namespace stateest {
namespace {

void require_trace_one(const HermitianMatrix& m, double tol) {
  if (std::abs(m.trace() - 1.0) > tol) {
    std::ostringstream msg;
    msg << "trace must be 1, got " << m.trace();
    throw DomainError(msg.str());
  }
}

}  // namespace

TraceOneHermitian::TraceOneHermitian(HermitianMatrix matrix) : matrix_(std::move(matrix)) {
  require_trace_one(matrix_, kTraceTolerance);
}

DensityMatrix::DensityMatrix(HermitianMatrix matrix) : matrix_(std::move(matrix)) {
  require_trace_one(matrix_, kTraceTolerance);
  const double lowest = min_eigenvalue(matrix_);
  if (lowest < -kPsdTolerance) {
    std::ostringstream msg;
    msg << "density matrix must be positive semidefinite, smallest eigenvalue " << lowest;
    throw DomainError(msg.str());
  }
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix((1.0 / dim) * HermitianMatrix::identity(dim));
}

double BlochVector::norm() const {
  return std::sqrt(theta[0] * theta[0] + theta[1] * theta[1] + theta[2] * theta[2]);
}

bool BlochVector::is_state() const { return norm() <= 1.0 + 1e-12; }

const HermitianMatrix& pauli(int i) {
  using namespace std::complex_literals;
  static const std::array<HermitianMatrix, 4> paulis = [] {
    ComplexMatrix s0(2, 2), s1(2, 2), s2(2, 2), s3(2, 2);
    s0 << 1.0, 0.0, 0.0, 1.0;
    s1 << 0.0, 1.0, 1.0, 0.0;
    s2 << 0.0, -1i, 1i, 0.0;
    s3 << 1.0, 0.0, 0.0, -1.0;
    return std::array<HermitianMatrix, 4>{HermitianMatrix(s0), HermitianMatrix(s1),
                                          HermitianMatrix(s2), HermitianMatrix(s3)};
  }();
  if (i < 0 || i > 3) throw DomainError("Pauli index must be in 0..3");
  return paulis[static_cast<std::size_t>(i)];
}

TraceOneHermitian bloch_to_matrix(const BlochVector& theta) {
  ComplexMatrix m(2, 2);
  m(0, 0) = 0.5 * (1.0 + theta[2]);
  m(0, 1) = Complex(0.5 * theta[0], -0.5 * theta[1]);
  m(1, 0) = Complex(0.5 * theta[0], 0.5 * theta[1]);
  m(1, 1) = 0.5 * (1.0 - theta[2]);
  return TraceOneHermitian(HermitianMatrix(m));
}

BlochVector matrix_to_bloch(const HermitianMatrix& m) {
  if (m.dim() != 2) throw DomainError("Bloch vectors are defined for 2 x 2 matrices only");
  // Tr(M sigma_1) = 2 Re m01, Tr(M sigma_2) = -2 Im m01, Tr(M sigma_3) = m00 - m11.
  return BlochVector{{2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(),
                      m(0, 0).real() - m(1, 1).real()}};
}

BlochVector matrix_to_bloch(const TraceOneHermitian& m) { return matrix_to_bloch(m.matrix()); }

ComplexMatrix random_unitary(int dim, RngStream& rng) {
  ComplexMatrix g(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) g(i, j) = Complex(rng.normal(), rng.normal());
  }
  // Modified Gram-Schmidt; equivalent to QR with a positive diagonal in R,
  // which is what makes the distribution Haar.
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < j; ++i) {
      const Complex overlap = g.col(i).dot(g.col(j));
      g.col(j) -= overlap * g.col(i);
    }
    g.col(j) /= g.col(j).norm();
  }
  return g;
}

DensityMatrix random_density(int dim, RngStream& rng, const SpectrumMode& mode) {
  if (dim < 2) throw DomainError("dimension must be at least 2");
  RealVector lambda(dim);
  if (const auto* fixed = std::get_if<FixedSpectrum>(&mode)) {
    if (static_cast<int>(fixed->eigenvalues.size()) != dim) {
      throw DomainError("fixed spectrum length does not match the dimension");
    }
    double sum = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double x = fixed->eigenvalues[static_cast<std::size_t>(i)];
      if (!(x >= 0.0)) throw DomainError("fixed spectrum entries must be nonnegative");
      lambda(i) = x;
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw DomainError("fixed spectrum must sum to 1");
  } else {
    // Normalized exponentials are uniform on the simplex.
    for (int i = 0; i < dim; ++i) lambda(i) = -std::log(1.0 - rng.uniform());
    lambda /= lambda.sum();
  }
  return DensityMatrix(compose(random_unitary(dim, rng), lambda));
}

}  // namespace stateest
