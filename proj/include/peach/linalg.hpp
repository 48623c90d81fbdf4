// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

/// \file
/// Dense complex linear-algebra substrate: Kronecker products, column-major
/// vectorization, Hermitian solves, extreme eigenvalues and covariance-shaped
/// complex Gaussian sampling. Everything here is a thin layer over Eigen.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "peach/error.hpp"
#include "peach/rng.hpp"

namespace peach {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Largest row or column count any assembled matrix may have.
inline constexpr Index kMaxDimension = Index{1} << 15;

inline void check_dimension(Index rows, Index cols, const char* what) {
  if (rows > kMaxDimension || cols > kMaxDimension) {
    throw DimensionError(std::string(what) + ": result of size " + std::to_string(rows) + "x" +
                         std::to_string(cols) + " exceeds the dimension limit");
  }
}

/// Counts of the expensive primitives executed on an estimate path. A block
/// application to k columns counts as k matrix-vector products.
struct OpCounter {
  std::uint64_t d_applications = 0;  ///< products with D = P~ R P~^H + S
  std::uint64_t projections = 0;     ///< products with R P~^H (or its adjoint)
  std::uint64_t factorizations = 0;  ///< O(N^3) Cholesky factorizations
  std::uint64_t solves = 0;          ///< triangular solve pairs per right-hand side

  std::uint64_t matvecs() const { return d_applications + projections; }

  OpCounter& operator+=(const OpCounter& o) {
    d_applications += o.d_applications;
    projections += o.projections;
    factorizations += o.factorizations;
    solves += o.solves;
    return *this;
  }
};

/// Square complex matrix with exact conjugate symmetry.
///
/// Construction validates symmetry against a scale-aware tolerance and then
/// replaces the input by its Hermitian part, so entry(i,j) == conj(entry(j,i))
/// holds bit-for-bit afterwards.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  explicit HermitianMatrix(ComplexMatrix m, double tol = 1e-12) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) {
      throw InvalidArgument("HermitianMatrix: matrix is not square");
    }
    if (!m_.allFinite()) throw InvalidArgument("HermitianMatrix: non-finite entries");
    const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
    const double asym = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (m_.size() > 0 && asym > tol * scale) {
      throw InvalidArgument("HermitianMatrix: asymmetry " + std::to_string(asym) +
                            " exceeds tolerance");
    }
    symmetrize();
  }

  /// Hermitian part of an arbitrary square matrix, without validation.
  static HermitianMatrix hermitian_part(const ComplexMatrix& m) {
    HermitianMatrix h;
    h.m_ = m;
    h.symmetrize();
    return h;
  }

  static HermitianMatrix identity(Index dim, double scale = 1.0) {
    HermitianMatrix h;
    h.m_ = ComplexMatrix::Identity(dim, dim) * scale;
    return h;
  }

  static HermitianMatrix zero(Index dim) {
    HermitianMatrix h;
    h.m_ = ComplexMatrix::Zero(dim, dim);
    return h;
  }

  Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(Index i, Index j) const { return m_(i, j); }
  double trace() const { return m_.diagonal().real().sum(); }

  HermitianMatrix scaled(double s) const {
    HermitianMatrix h;
    h.m_ = m_ * s;
    return h;
  }

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim()) throw InvalidArgument("HermitianMatrix: dimension mismatch in sum");
    HermitianMatrix h;
    h.m_ = a.m_ + b.m_;
    return h;
  }

 private:
  void symmetrize() {
    ComplexMatrix sym = 0.5 * (m_ + m_.adjoint());
    m_ = std::move(sym);
    for (Index i = 0; i < m_.rows(); ++i) m_(i, i) = Complex(m_(i, i).real(), 0.0);
  }

  ComplexMatrix m_;
};

/// Kronecker product; block (i,j) of the result is a(i,j) * b.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_dimension(a.rows() * b.rows(), a.cols() * b.cols(), "kron");
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Stacks columns top to bottom, first column first.
inline ComplexVector vectorize(const ComplexMatrix& x) {
  return Eigen::Map<const ComplexVector>(x.data(), x.size());
}

inline ComplexMatrix unvectorize(const ComplexVector& v, Index rows, Index cols) {
  if (rows < 0 || cols < 0 || v.size() != rows * cols) {
    throw DimensionError("unvectorize: vector of length " + std::to_string(v.size()) +
                          " cannot be reshaped to " + std::to_string(rows) + "x" +
                          std::to_string(cols));
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), rows, cols);
}

struct EigenRange {
  double min = 0.0;
  double max = 0.0;
};

/// Smallest and largest eigenvalue of a Hermitian matrix.
///
/// Uses a full (values-only) Hermitian eigensolve, which is exact to working
/// precision at the sizes this library targets; `tol` is accepted for
/// interface compatibility with iterative backends.
inline EigenRange extreme_eigenvalues(const HermitianMatrix& x, double tol = 1e-10) {
  (void)tol;
  if (x.dim() == 0) throw InvalidArgument("extreme_eigenvalues: empty matrix");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(x.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("extreme_eigenvalues: eigensolver did not converge");
  }
  const auto& ev = es.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

/// Cholesky factorization of a Hermitian positive-definite matrix, reusable
/// for many right-hand sides.
class HermitianSolver {
 public:
  HermitianSolver() = default;

  explicit HermitianSolver(const HermitianMatrix& x) : llt_(x.matrix()) {
    if (llt_.info() != Eigen::Success) {
      throw NumericalError("hermitian_solve: matrix is not numerically positive definite");
    }
  }

  Index dim() const { return llt_.rows(); }

  template <typename Rhs>
  ComplexMatrix solve(const Eigen::MatrixBase<Rhs>& b) const {
    if (b.rows() != llt_.rows()) throw InvalidArgument("hermitian_solve: dimension mismatch");
    return llt_.solve(b);
  }

  /// Lower-triangular factor L with x = L L^H.
  ComplexMatrix lower() const { return llt_.matrixL(); }

  /// Solves L z = b only (half of a full solve).
  ComplexMatrix solve_lower(const ComplexMatrix& b) const {
    return llt_.matrixL().solve(b);
  }

 private:
  Eigen::LLT<ComplexMatrix> llt_;
};

inline ComplexVector hermitian_solve(const HermitianMatrix& x, const ComplexVector& b) {
  return HermitianSolver(x).solve(b);
}

/// Draws complex Gaussian vectors with a prescribed covariance: F z where
/// F F^H = cov and z has i.i.d. standard complex normal entries.
///
/// The factor is a Cholesky factor when one exists; otherwise a Hermitian
/// eigen-factor in which eigenvalues down to -1e-10 * lambda_max are clipped
/// to zero. Anything more negative is rejected as not PSD.
class GaussianSampler {
 public:
  GaussianSampler() = default;

  explicit GaussianSampler(const HermitianMatrix& cov) {
    const Index n = cov.dim();
    if (n == 0) throw InvalidArgument("GaussianSampler: empty covariance");
    Eigen::LLT<ComplexMatrix> llt(cov.matrix());
    if (llt.info() == Eigen::Success && llt.matrixL().toDenseMatrix().allFinite()) {
      factor_ = llt.matrixL();
      return;
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(cov.matrix());
    if (es.info() != Eigen::Success) {
      throw NumericalError("GaussianSampler: covariance factorization failed");
    }
    RealVector ev = es.eigenvalues();
    const double top = std::max(0.0, ev.maxCoeff());
    if (ev.minCoeff() < -1e-10 * top) {
      throw NumericalError("GaussianSampler: covariance is not positive semi-definite");
    }
    ev = ev.cwiseMax(0.0).cwiseSqrt();
    factor_ = es.eigenvectors() * ev.asDiagonal();
  }

  Index dim() const { return factor_.rows(); }
  const ComplexMatrix& factor() const { return factor_; }

  ComplexVector sample(RngStream& rng) const {
    return factor_ * rng.complex_normal_vector(factor_.cols());
  }

  /// Colors a block of standard complex normal columns.
  ComplexMatrix color(const ComplexMatrix& white) const { return factor_ * white; }

 private:
  ComplexMatrix factor_;
};

inline ComplexVector sample_gaussian(const HermitianMatrix& cov, RngStream& rng) {
  return GaussianSampler(cov).sample(rng);
}

/// Rayleigh quotient v^H X v / v^H v (real for Hermitian X).
inline double rayleigh(const HermitianMatrix& x, const ComplexVector& v) {
  return (v.adjoint() * x.matrix() * v)(0, 0).real() / v.squaredNorm();
}

}  // namespace peach
