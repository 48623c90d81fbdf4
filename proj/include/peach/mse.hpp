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
/// Analytic mean-square errors of the estimators and the MSE-optimal
/// W-PEACH weights.
///
/// Every estimator in this library has the form vec(H^) = R P~^H p(D) y for
/// some scalar function p. With the eigendecomposition D = U diag(lambda) U^H
/// and the per-mode channel energies c_j = ||(U^H P~ R)_j||^2, the MSE is
///
///   tr(R) - sum_j c_j / lambda_j  +  sum_j (c_j / lambda_j) (1 - lambda_j p(lambda_j))^2
///
/// i.e. the MMSE value plus a non-negative excess. SpectralModel caches the
/// decomposition so any number of orders and weight vectors can be scored
/// without further O(N^3) work, and without the cancellation that
/// evaluating tr(R) + w^T A w - 2 b^T w directly suffers from.

#pragma once

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "peach/error.hpp"
#include "peach/estimators.hpp"
#include "peach/linalg.hpp"
#include "peach/scenario.hpp"

namespace peach {

/// Quadratic MSE model of W-PEACH: MSE(w) = tr(R) + w^T A w - 2 b^T w, with
/// [A]_ij = alpha^(i+j) tr(R P~^H D^(i+j-1) P~ R) and
/// [b]_i  = alpha^i     tr(R P~^H D^(i-1)   P~ R) for i, j = 1..L+1.
struct WeightSystem {
  RealMatrix a;
  RealVector b;
  double alpha = 1.0;

  Index order() const { return b.size() - 1; }
};

/// tr(R) - tr(R P~^H D^-1 P~ R). Valid for singular R.
inline double mmse_mse(const Scenario& scn) {
  const HermitianSolver solver(scn.d_cov());
  const ComplexMatrix whitened = solver.solve_lower(scn.projector().adjoint());
  return scn.r_trace() - whitened.squaredNorm();
}

/// tr((P~^H S^-1 P~)^-1).
inline double mvu_variance(const Scenario& scn) {
  const HermitianSolver s_solver(scn.s_cov());
  const ComplexMatrix info = scn.pilot_tilde().adjoint() * s_solver.solve(scn.pilot_tilde());
  Eigen::LLT<ComplexMatrix> llt(HermitianMatrix::hermitian_part(info).matrix());
  if (llt.info() != Eigen::Success) {
    throw NumericalError("mvu_variance: P~^H S^-1 P~ is rank deficient");
  }
  const Index m = info.rows();
  const ComplexMatrix l_inv = llt.matrixL().solve(ComplexMatrix::Identity(m, m));
  return l_inv.squaredNorm();
}

/// Solves A w = b for the MSE-minimizing weights.
///
/// A is a Hankel moment matrix and grows ill-conditioned quickly with L, so
/// it is equilibrated to unit diagonal before an LDL^T solve and the result
/// is polished by two steps of iterative refinement.
inline WeightVector wpeach_weights_optimal(const WeightSystem& sys) {
  const Index k = sys.b.size();
  if (k == 0 || sys.a.rows() != k || sys.a.cols() != k) {
    throw InvalidArgument("wpeach_weights_optimal: A must be (L+1) x (L+1) and match b");
  }
  const RealVector diag = sys.a.diagonal();
  if (!(diag.minCoeff() > 0.0) || !sys.a.allFinite() || !sys.b.allFinite()) {
    throw NumericalError("wpeach_weights_optimal: weight system is singular");
  }
  const RealVector s = diag.cwiseSqrt().cwiseInverse();
  const RealMatrix scaled = s.asDiagonal() * sys.a * s.asDiagonal();
  Eigen::LDLT<RealMatrix> ldlt(scaled);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 1e-15 * ldlt.vectorD().maxCoeff()) {
    throw NumericalError("wpeach_weights_optimal: weight system is not positive definite");
  }
  const RealVector rhs = s.cwiseProduct(sys.b);
  RealVector x = ldlt.solve(rhs);
  for (int it = 0; it < 2; ++it) x += ldlt.solve(RealVector(rhs - scaled * x));
  WeightVector wv{sys.alpha, std::vector<double>(static_cast<std::size_t>(k))};
  const RealVector w = s.cwiseProduct(x);
  for (Index i = 0; i < k; ++i) wv.weights[static_cast<std::size_t>(i)] = w(i);
  wv.validate();
  return wv;
}

/// tr(R) + w^T A w - 2 b^T w.
inline double wpeach_mse(const WeightSystem& sys, double r_trace, const WeightVector& wv) {
  if (wv.order() != sys.order()) {
    throw InvalidArgument("wpeach_mse: weight vector order does not match the weight system");
  }
  const RealVector w = Eigen::Map<const RealVector>(wv.weights.data(), sys.b.size());
  return r_trace + w.dot(sys.a * w) - 2.0 * sys.b.dot(w);
}

/// Eigendecomposition of D with the channel energy carried by each mode.
class SpectralModel {
 public:
  explicit SpectralModel(const Scenario& scn) : r_trace_(scn.r_trace()) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(scn.d_cov().matrix());
    if (es.info() != Eigen::Success) {
      throw NumericalError("SpectralModel: eigendecomposition of D failed");
    }
    lambda_ = es.eigenvalues();
    if (!(lambda_(0) > 0.0)) throw NumericalError("SpectralModel: D is not positive definite");
    // Rows of U^H (P~ R) give the energy of R^(1/2)-weighted channel per mode.
    const ComplexMatrix modes = es.eigenvectors().adjoint() * scn.projector().adjoint();
    energy_ = modes.rowwise().squaredNorm();
    excess_weight_ = energy_.cwiseQuotient(lambda_);
    mmse_ = r_trace_ - excess_weight_.sum();
  }

  const RealVector& eigenvalues() const { return lambda_; }
  /// c_j = [U^H P~ R^2 P~^H U]_jj
  const RealVector& energies() const { return energy_; }
  double lambda_min() const { return lambda_(0); }
  double lambda_max() const { return lambda_(lambda_.size() - 1); }
  double r_trace() const { return r_trace_; }
  double mmse_mse() const { return mmse_; }

  /// tr(R P~^H D^k P~ R) = sum_j c_j lambda_j^k
  double trace_moment(Index k) const {
    return (energy_.array() * lambda_.array().pow(static_cast<double>(k))).sum();
  }

  /// Excess MSE over MMSE of the order-L PEACH estimator. The PEACH
  /// residual 1 - lambda p(lambda) equals (1 - alpha lambda)^(L+1).
  double peach_excess(Index order, double alpha) const {
    if (order < 0) throw InvalidArgument("peach_mse: order must be >= 0");
    const auto e = 2.0 * static_cast<double>(order + 1);
    return (excess_weight_.array() * (1.0 - alpha * lambda_.array()).abs().pow(e)).sum();
  }

  double peach_mse(Index order, double alpha) const { return mmse_ + peach_excess(order, alpha); }

  /// Excess MSE of W-PEACH with arbitrary weights; residual evaluated by
  /// Horner's rule in x = alpha lambda.
  double wpeach_excess(const WeightVector& wv) const {
    wv.validate();
    double total = 0.0;
    for (Index j = 0; j < lambda_.size(); ++j) {
      const double x = wv.alpha * lambda_(j);
      double p = 0.0;
      for (auto it = wv.weights.rbegin(); it != wv.weights.rend(); ++it) p = p * x + *it;
      const double r = 1.0 - x * p;
      total += excess_weight_(j) * r * r;
    }
    return total;
  }

  double wpeach_mse(const WeightVector& wv) const { return mmse_ + wpeach_excess(wv); }

  /// Exact weight system from the spectral moments:
  /// [A]_ij = sum_j d_j x_j^(i+j), [b]_i = sum_j d_j x_j^i with
  /// d_j = c_j / lambda_j and x_j = alpha lambda_j.
  WeightSystem weight_system(Index order, double alpha) const {
    if (order < 0) throw InvalidArgument("wpeach_weight_system: order must be >= 0");
    if (!(alpha > 0.0)) throw InvalidArgument("wpeach_weight_system: alpha must be positive");
    const Index k = order + 1;
    RealVector moments = RealVector::Zero(2 * k + 1);  // moments(p) = sum d x^p
    for (Index j = 0; j < lambda_.size(); ++j) {
      const double x = alpha * lambda_(j);
      double pw = 1.0;
      for (Index p = 0; p <= 2 * k; ++p) {
        moments(p) += excess_weight_(j) * pw;
        pw *= x;
      }
    }
    WeightSystem sys;
    sys.alpha = alpha;
    sys.a.resize(k, k);
    sys.b.resize(k);
    for (Index i = 1; i <= k; ++i) {
      sys.b(i - 1) = moments(i);
      for (Index j = 1; j <= k; ++j) sys.a(i - 1, j - 1) = moments(i + j);
    }
    return sys;
  }

  /// The minimizer A^-1 b of the weight system, computed as the equivalent
  /// weighted least-squares problem
  ///
  ///   min_w sum_j d_j (1 - sum_l w_l x_j^(l+1))^2
  ///
  /// by column-pivoted QR. A = V^T diag(d) V is the normal matrix of this
  /// problem, so the QR route sees cond(A)^(1/2) and stays accurate for
  /// orders where solving A w = b directly has lost every digit.
  WeightVector optimal_weights(Index order, double alpha) const {
    if (order < 0) throw InvalidArgument("optimal_weights: order must be >= 0");
    if (!(alpha > 0.0)) throw InvalidArgument("optimal_weights: alpha must be positive");
    const Index k = order + 1;
    const Index n = lambda_.size();
    RealMatrix design(n, k);
    RealVector target(n);
    for (Index j = 0; j < n; ++j) {
      const double sd = std::sqrt(excess_weight_(j));
      const double x = alpha * lambda_(j);
      double pw = x;
      for (Index i = 0; i < k; ++i) {
        design(j, i) = sd * pw;
        pw *= x;
      }
      target(j) = sd;
    }
    const RealVector norms = design.colwise().norm();
    if (!(norms.minCoeff() > 0.0)) {
      throw NumericalError("optimal_weights: degenerate scenario (no channel energy)");
    }
    const RealVector inv = norms.cwiseInverse();
    Eigen::ColPivHouseholderQR<RealMatrix> qr(design * inv.asDiagonal());
    const RealVector w = inv.cwiseProduct(RealVector(qr.solve(target)));
    WeightVector wv{alpha, std::vector<double>(w.data(), w.data() + k)};
    wv.validate();
    return wv;
  }

 private:
  double r_trace_;
  RealVector lambda_;
  RealVector energy_;
  RealVector excess_weight_;
  double mmse_ = 0.0;
};

/// Closed-form MSE of the order-L PEACH estimator.
inline double peach_mse(const Scenario& scn, Index order, double alpha) {
  return SpectralModel(scn).peach_mse(order, alpha);
}

inline WeightSystem wpeach_weight_system(const Scenario& scn, Index order, double alpha) {
  return SpectralModel(scn).weight_system(order, alpha);
}

inline double wpeach_mse(const Scenario& scn, const WeightVector& wv) {
  return SpectralModel(scn).wpeach_mse(wv);
}

}  // namespace peach
