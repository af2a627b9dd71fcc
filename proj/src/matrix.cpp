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

#include "stateest/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "stateest/errors.hpp"

namespace stateest {
namespace {

constexpr double kTraceTolerance = 1e-9;
constexpr double kPsdTolerance = 1e-9;

double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (int j = 0; j < a.cols(); ++j) {
    for (int i = 0; i < a.rows(); ++i) {
      if (i != j) sum += std::norm(a(i, j));
    }
  }
  return std::sqrt(sum);
}

void require_same_dim(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) {
    std::ostringstream msg;
    msg << "dimension mismatch: " << a.dim() << " vs " << b.dim();
    throw DomainError(msg.str());
  }
}

void require_unit_trace(const HermitianMatrix& a) {
  if (std::abs(a.trace() - 1.0) > kTraceTolerance) {
    std::ostringstream msg;
    msg << "fidelity requires trace-one inputs, got trace " << a.trace();
    throw DomainError(msg.str());
  }
}

double real_trace_product(const HermitianMatrix& a, const HermitianMatrix& b) {
  // Tr AB = sum_ij A_ij B_ji; real for Hermitian A, B.
  double sum = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    for (int j = 0; j < a.dim(); ++j) sum += (a(i, j) * b(j, i)).real();
  }
  return sum;
}

double det2(const HermitianMatrix& a) {
  return a(0, 0).real() * a(1, 1).real() - std::norm(a(0, 1));
}

// det2 with cancellation residue flushed to zero, so a pure state does not
// pick up a spurious root term in the qubit fidelity.
double flushed_det2(const HermitianMatrix& a) {
  const double d = det2(a);
  const double scale = std::max(std::abs(a(0, 0).real() * a(1, 1).real()), std::norm(a(0, 1)));
  return std::abs(d) <= 8.0 * std::numeric_limits<double>::epsilon() * scale ? 0.0 : d;
}

}  // namespace

HermitianMatrix::HermitianMatrix(const ComplexMatrix& entries) : entries_(entries) {
  const auto k = entries.rows();
  if (k != entries.cols()) throw DomainError("matrix is not square");
  if (k < 2) throw DomainError("matrix dimension must be at least 2");

  double scale = 1.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < k; ++i) {
      const Complex z = entries(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw DomainError("matrix has a non-finite entry");
      }
      scale = std::max(scale, std::abs(z));
    }
  }
  const double tol = kHermitianTolerance * scale;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (std::abs(entries(i, i).imag()) > tol) {
      std::ostringstream msg;
      msg << "diagonal entry " << i << " has imaginary part " << entries(i, i).imag();
      throw DomainError(msg.str());
    }
    entries_(i, i) = Complex(entries(i, i).real(), 0.0);
    for (Eigen::Index j = i + 1; j < k; ++j) {
      const Complex upper = entries(i, j);
      const Complex lower_conj = std::conj(entries(j, i));
      if (std::abs(upper - lower_conj) > tol) {
        std::ostringstream msg;
        msg << "matrix is not Hermitian at (" << i << ", " << j << ")";
        throw DomainError(msg.str());
      }
      const Complex mid = 0.5 * (upper + lower_conj);
      entries_(i, j) = mid;
      entries_(j, i) = std::conj(mid);
    }
  }
}

HermitianMatrix HermitianMatrix::identity(int dim) {
  return HermitianMatrix(ComplexMatrix::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::diagonal(const std::vector<double>& values) {
  const auto k = static_cast<Eigen::Index>(values.size());
  ComplexMatrix m = ComplexMatrix::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) m(i, i) = values[static_cast<std::size_t>(i)];
  return HermitianMatrix(m);
}

double HermitianMatrix::trace() const { return entries_.diagonal().real().sum(); }

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a, b);
  return HermitianMatrix(a.entries_ + b.entries_);
}

HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a, b);
  return HermitianMatrix(a.entries_ - b.entries_);
}

HermitianMatrix operator*(double s, const HermitianMatrix& a) {
  return HermitianMatrix(s * a.entries_);
}

Spectrum hermitian_eig(const HermitianMatrix& h, const EigOptions& options) {
  const int k = h.dim();
  ComplexMatrix a = h.entries();
  ComplexMatrix v = ComplexMatrix::Identity(k, k);

  const double target = options.relative_tolerance * a.norm();
  double residual = off_diagonal_norm(a);
  int sweep = 0;
  while (residual > target) {
    if (sweep == options.max_sweeps) {
      std::ostringstream msg;
      msg << "Jacobi eigensolver did not converge after " << sweep
          << " sweeps (off-diagonal norm " << residual << ")";
      throw ConvergenceError(msg.str(), residual);
    }
    for (int p = 0; p < k - 1; ++p) {
      for (int q = p + 1; q < k; ++q) {
        const Complex apq = a(p, q);
        const double b = std::abs(apq);
        if (b == 0.0) continue;
        // Phase-rotate column q so the (p,q) entry becomes real and positive,
        // then annihilate it with a real Jacobi rotation.
        const Complex phase = std::conj(apq) / b;
        const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * b);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex gpp = c;
        const Complex gpq = s;
        const Complex gqp = -s * phase;
        const Complex gqq = c * phase;

        const Eigen::VectorXcd col_p = a.col(p);
        const Eigen::VectorXcd col_q = a.col(q);
        a.col(p) = col_p * gpp + col_q * gqp;
        a.col(q) = col_p * gpq + col_q * gqq;
        const Eigen::RowVectorXcd row_p = a.row(p);
        const Eigen::RowVectorXcd row_q = a.row(q);
        a.row(p) = std::conj(gpp) * row_p + std::conj(gqp) * row_q;
        a.row(q) = std::conj(gpq) * row_p + std::conj(gqq) * row_q;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();

        const Eigen::VectorXcd vp = v.col(p);
        const Eigen::VectorXcd vq = v.col(q);
        v.col(p) = vp * gpp + vq * gqp;
        v.col(q) = vp * gpq + vq * gqq;
      }
    }
    ++sweep;
    residual = off_diagonal_norm(a);
  }

  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&a](int x, int y) { return a(x, x).real() > a(y, y).real(); });

  Spectrum out{RealVector(k), ComplexMatrix(k, k)};
  for (int i = 0; i < k; ++i) {
    const int src = order[static_cast<std::size_t>(i)];
    out.eigenvalues(i) = a(src, src).real();
    out.eigenvectors.col(i) = v.col(src);
  }
  return out;
}

double hs_norm(const HermitianMatrix& a) { return a.entries().norm(); }

double hs_distance(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a, b);
  return (a.entries() - b.entries()).norm();
}

namespace {

// Square roots with eigenvalues inside the round-off floor set to zero;
// otherwise a 1e-17 residue would contribute ~3e-9 after the root.
RealVector floored_roots(const RealVector& values) {
  const double top = values.cwiseAbs().maxCoeff();
  const double floor = 8.0 * static_cast<double>(values.size()) * std::numeric_limits<double>::epsilon() * top;
  return values.unaryExpr([floor](double v) { return v > floor ? std::sqrt(v) : 0.0; });
}

}  // namespace

double uhlmann_fidelity(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a, b);
  if (!is_psd(a, kPsdTolerance) || !is_psd(b, kPsdTolerance)) {
    throw UnsupportedInput("Uhlmann fidelity requires positive semidefinite inputs");
  }
  const Spectrum sa = hermitian_eig(a);
  const HermitianMatrix sqrt_a = compose(sa.eigenvectors, floored_roots(sa.eigenvalues));
  const HermitianMatrix inner(sqrt_a.entries() * b.entries() * sqrt_a.entries());
  const double root_trace = floored_roots(hermitian_eig(inner).eigenvalues).sum();
  return root_trace * root_trace;
}

double fidelity(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a, b);
  require_unit_trace(a);
  require_unit_trace(b);
  if (a.dim() == 2) {
    // Re of the principal complex root: a negative product contributes 0.
    const double product = flushed_det2(a) * flushed_det2(b);
    const double root = product > 0.0 ? std::sqrt(product) : 0.0;
    return real_trace_product(a, b) + 2.0 * root;
  }
  return uhlmann_fidelity(a, b);
}

double min_eigenvalue(const HermitianMatrix& h) {
  return hermitian_eig(h).eigenvalues.minCoeff();
}

bool is_psd(const HermitianMatrix& h, double tol) {
  if (tol < 0.0) throw DomainError("PSD tolerance must be nonnegative");
  return min_eigenvalue(h) >= -tol;
}

double determinant(const HermitianMatrix& h) { return hermitian_eig(h).eigenvalues.prod(); }

HermitianMatrix compose(const ComplexMatrix& unitary, const RealVector& values) {
  return HermitianMatrix(unitary * values.cast<Complex>().asDiagonal() * unitary.adjoint());
}

}  // namespace stateest
