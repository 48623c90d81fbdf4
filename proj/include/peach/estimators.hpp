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
/// Linear channel estimators. Each estimator maps a block of vectorized
/// observations (n x k) to a block of vectorized channel estimates (m x k).
///
///   MMSE     vec(H) = R P~^H D^-1 y
///   MVU      vec(H) = (P~^H S^-1 P~)^-1 P~^H S^-1 y
///   PEACH    vec(H) = R P~^H sum_{l=0..L} alpha (I - alpha D)^l y
///   W-PEACH  vec(H) = R P~^H sum_{l=0..L} w_l alpha^(l+1) D^l y
///
/// The polynomial estimators only ever multiply vectors by D; no power of D
/// and no inverse is formed, giving O(L N^2) work per observation.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "peach/error.hpp"
#include "peach/linalg.hpp"
#include "peach/scenario.hpp"

namespace peach {

/// Polynomial coefficients w_0..w_L together with the scale alpha.
struct WeightVector {
  double alpha = 1.0;
  std::vector<double> weights;

  Index order() const { return static_cast<Index>(weights.size()) - 1; }

  void validate() const {
    if (weights.empty()) throw InvalidArgument("WeightVector: at least one weight required");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
      throw InvalidArgument("WeightVector: alpha must be positive and finite");
    }
    for (double w : weights) {
      if (!std::isfinite(w)) throw InvalidArgument("WeightVector: non-finite weight");
    }
  }
};

enum class AlphaRule {
  extreme_eigenvalue,  ///< 2 / (lambda_max(D) + lambda_min(D))
  trace,               ///< 2 / tr(D)
};

inline const char* to_string(AlphaRule rule) {
  return rule == AlphaRule::trace ? "trace" : "extreme_eig";
}

/// Upper bound on lambda_max of a Hermitian matrix from Gershgorin discs.
inline double gershgorin_upper_bound(const HermitianMatrix& x) {
  const ComplexMatrix& m = x.matrix();
  double bound = 0.0;
  for (Index j = 0; j < m.cols(); ++j) {
    const double radius = m.col(j).cwiseAbs().sum() - std::abs(m(j, j));
    bound = std::max(bound, m(j, j).real() + radius);
  }
  return bound;
}

/// Scaling for the truncated Neumann series of D^-1.
inline double alpha_peach(const Scenario& scn, AlphaRule rule = AlphaRule::extreme_eigenvalue) {
  if (rule == AlphaRule::trace) return 2.0 / scn.d_cov().trace();
  const EigenRange ev = extreme_eigenvalues(scn.d_cov());
  return 2.0 / (ev.max + ev.min);
}

/// Default W-PEACH scale 1 / lambda_max(D): keeps (alpha D)^l bounded.
inline double alpha_wpeach(const Scenario& scn) {
  return 1.0 / extreme_eigenvalues(scn.d_cov()).max;
}

/// True when 0 < alpha < 2 / lambda_max(D), i.e. the Neumann series of
/// alpha (I - (I - alpha D))^-1 converges.
inline bool neumann_series_converges(const Scenario& scn, double alpha) {
  if (!(alpha > 0.0)) return false;
  if (alpha * gershgorin_upper_bound(scn.d_cov()) < 2.0) return true;
  return alpha * extreme_eigenvalues(scn.d_cov()).max < 2.0;
}

namespace detail {

inline void check_observations(const Scenario& scn, Index rows, const char* who) {
  if (rows != scn.dims().n()) {
    throw InvalidArgument(std::string(who) + ": observation length " + std::to_string(rows) +
                          " does not match n = " + std::to_string(scn.dims().n()));
  }
}

inline ComplexMatrix as_channel(const Scenario& scn, const ComplexMatrix& vec_h) {
  return unvectorize(vec_h.col(0), scn.dims().nr, scn.dims().nt);
}

}  // namespace detail

/// Bayesian MMSE estimator. Construction factors D once; each application
/// is two triangular solves and one projection.
class MmseEstimator {
 public:
  explicit MmseEstimator(const Scenario& scn, OpCounter* ops = nullptr)
      : scn_(scn), solver_(scn.d_cov()) {
    if (ops) ops->factorizations += 1;
  }

  ComplexMatrix apply(const ComplexMatrix& y, OpCounter* ops = nullptr) const {
    detail::check_observations(scn_, y.rows(), "mmse_estimate");
    ComplexMatrix out = scn_.projector() * solver_.solve(y);
    if (ops) {
      ops->solves += static_cast<std::uint64_t>(y.cols());
      ops->projections += static_cast<std::uint64_t>(y.cols());
    }
    return out;
  }

  ComplexMatrix estimate(const ComplexVector& y) const {
    return detail::as_channel(scn_, apply(y));
  }

 private:
  Scenario scn_;
  HermitianSolver solver_;
};

/// Minimum-variance unbiased estimator. Requires P~^H S^-1 P~ to be
/// invertible, which fails when b < nt or the pilot is rank deficient.
class MvuEstimator {
 public:
  explicit MvuEstimator(const Scenario& scn, OpCounter* ops = nullptr) : scn_(scn) {
    const HermitianSolver s_solver(scn.s_cov());
    const ComplexMatrix s_inv_pt = s_solver.solve(scn.pilot_tilde());
    const HermitianMatrix info =
        HermitianMatrix::hermitian_part(scn.pilot_tilde().adjoint() * s_inv_pt);
    Eigen::LLT<ComplexMatrix> llt(info.matrix());
    if (llt.info() != Eigen::Success || !rank_ok(llt, info)) {
      throw NumericalError("mvu_estimate: P~^H S^-1 P~ is rank deficient");
    }
    gain_ = llt.solve(ComplexMatrix(s_inv_pt.adjoint()));
    if (ops) ops->factorizations += 2;
  }

  ComplexMatrix apply(const ComplexMatrix& y, OpCounter* ops = nullptr) const {
    detail::check_observations(scn_, y.rows(), "mvu_estimate");
    if (ops) ops->projections += static_cast<std::uint64_t>(y.cols());
    return gain_ * y;
  }

  ComplexMatrix estimate(const ComplexVector& y) const {
    return detail::as_channel(scn_, apply(y));
  }

 private:
  static bool rank_ok(const Eigen::LLT<ComplexMatrix>& llt, const HermitianMatrix& info) {
    const RealVector diag = ComplexMatrix(llt.matrixL()).diagonal().real();
    const double scale = std::max(info.matrix().diagonal().real().maxCoeff(), 0.0);
    return diag.minCoeff() > 1e-7 * std::sqrt(scale);
  }

  Scenario scn_;
  ComplexMatrix gain_;
};

/// Unweighted polynomial-expansion estimator of order L.
class PeachEstimator {
 public:
  PeachEstimator(const Scenario& scn, Index order, double alpha) : scn_(scn), order_(order), alpha_(alpha) {
    if (order < 0) throw InvalidArgument("peach_estimate: order must be >= 0");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
      throw InvalidArgument("peach_estimate: alpha must be positive and finite");
    }
    if (!neumann_series_converges(scn, alpha)) {
      warn("PEACH alpha=" + std::to_string(alpha) +
           " violates 0 < alpha < 2/lambda_max(D); the expansion diverges as L grows");
    }
  }

  Index order() const { return order_; }
  double alpha() const { return alpha_; }

  ComplexMatrix apply(const ComplexMatrix& y, OpCounter* ops = nullptr) const {
    const Index orders[] = {order_};
    return std::move(apply_orders(y, orders, ops).front());
  }

  /// Estimates for several orders in one pass of the recursion; `orders`
  /// must be sorted ascending. Costs max(orders) products with D.
  std::vector<ComplexMatrix> apply_orders(const ComplexMatrix& y, std::span<const Index> orders,
                                          OpCounter* ops = nullptr) const {
    detail::check_observations(scn_, y.rows(), "peach_estimate");
    if (orders.empty() || !std::is_sorted(orders.begin(), orders.end()) || orders.front() < 0) {
      throw InvalidArgument("peach_estimate: orders must be non-empty, sorted and >= 0");
    }
    const ComplexMatrix& d = scn_.d_cov().matrix();
    const auto k = static_cast<std::uint64_t>(y.cols());
    std::vector<ComplexMatrix> out;
    out.reserve(orders.size());
    // z_l = (I - alpha D)^l y ; acc = sum_{l' <= l} z_l'
    ComplexMatrix z = y;
    ComplexMatrix acc = y;
    ComplexMatrix dz(y.rows(), y.cols());
    Index l = 0;
    for (Index target : orders) {
      for (; l < target; ++l) {
        dz.noalias() = d * z;
        z -= alpha_ * dz;
        acc += z;
        if (ops) ops->d_applications += k;
      }
      // Scale after the product: a real factor on the product expression
      // sends Eigen down a slow coefficient-wise path.
      ComplexMatrix est = scn_.projector() * acc;
      est *= alpha_;
      out.push_back(std::move(est));
      if (ops) ops->projections += k;
    }
    return out;
  }

  ComplexMatrix estimate(const ComplexVector& y) const {
    return detail::as_channel(scn_, apply(y));
  }

 private:
  Scenario scn_;
  Index order_;
  double alpha_;
};

/// Weighted polynomial-expansion estimator.
class WpeachEstimator {
 public:
  WpeachEstimator(const Scenario& scn, WeightVector weights) : scn_(scn), w_(std::move(weights)) {
    w_.validate();
  }

  const WeightVector& weights() const { return w_; }

  ComplexMatrix apply(const ComplexMatrix& y, OpCounter* ops = nullptr) const {
    return std::move(apply_many(scn_, y, std::span(&w_, 1), ops).front());
  }

  ComplexMatrix estimate(const ComplexVector& y) const {
    return detail::as_channel(scn_, apply(y));
  }

  /// Applies several weight vectors sharing one alpha. The chain
  /// z_l = (alpha D)^l alpha y is computed once up to the largest order and
  /// projected term by term.
  static std::vector<ComplexMatrix> apply_many(const Scenario& scn, const ComplexMatrix& y,
                                               std::span<const WeightVector> weight_sets,
                                               OpCounter* ops = nullptr) {
    detail::check_observations(scn, y.rows(), "wpeach_estimate");
    if (weight_sets.empty()) throw InvalidArgument("wpeach_estimate: no weight vectors");
    const double alpha = weight_sets.front().alpha;
    Index max_order = 0;
    for (const auto& w : weight_sets) {
      w.validate();
      if (w.alpha != alpha) throw InvalidArgument("wpeach_estimate: weight sets must share alpha");
      max_order = std::max(max_order, w.order());
    }
    const auto k = static_cast<std::uint64_t>(y.cols());
    const ComplexMatrix& d = scn.d_cov().matrix();
    std::vector<ComplexMatrix> acc(weight_sets.size());

    if (weight_sets.size() == 1) {
      // Single weight vector: accumulate in observation space, project once.
      const auto& w = weight_sets.front().weights;
      ComplexMatrix z = alpha * y;
      ComplexMatrix sum = w[0] * z;
      ComplexMatrix dz(y.rows(), y.cols());
      for (Index l = 1; l <= max_order; ++l) {
        dz.noalias() = d * z;
        z = alpha * dz;
        sum += w[static_cast<std::size_t>(l)] * z;
      }
      acc[0] = scn.projector() * sum;
      if (ops) {
        ops->d_applications += k * static_cast<std::uint64_t>(max_order);
        ops->projections += k;
      }
      return acc;
    }

    ComplexMatrix z = alpha * y;
    ComplexMatrix dz(y.rows(), y.cols());
    for (Index l = 0; l <= max_order; ++l) {
      if (l > 0) {
        dz.noalias() = d * z;
        z = alpha * dz;
        if (ops) ops->d_applications += k;
      }
      const ComplexMatrix gz = scn.projector() * z;
      if (ops) ops->projections += k;
      for (std::size_t s = 0; s < weight_sets.size(); ++s) {
        const auto& w = weight_sets[s].weights;
        if (l >= static_cast<Index>(w.size())) continue;
        if (acc[s].size() == 0) acc[s] = ComplexMatrix::Zero(gz.rows(), gz.cols());
        acc[s] += w[static_cast<std::size_t>(l)] * gz;
      }
    }
    return acc;
  }

 private:
  Scenario scn_;
  WeightVector w_;
};

/// W-PEACH weights reproducing the order-L PEACH polynomial:
/// alpha sum_l (I - alpha D)^l = sum_k (-1)^k C(L+1, k+1) alpha^(k+1) D^k.
inline WeightVector peach_as_weights(Index order, double alpha) {
  if (order < 0) throw InvalidArgument("peach_as_weights: order must be >= 0");
  WeightVector wv{alpha, std::vector<double>(static_cast<std::size_t>(order + 1))};
  // C(L+1, k+1) via the multiplicative recurrence.
  double binom = static_cast<double>(order + 1);  // C(L+1, 1)
  for (Index k = 0; k <= order; ++k) {
    wv.weights[static_cast<std::size_t>(k)] = (k % 2 == 0 ? 1.0 : -1.0) * binom;
    binom = binom * static_cast<double>(order + 1 - (k + 1)) / static_cast<double>(k + 2);
  }
  return wv;
}

inline ComplexMatrix mmse_estimate(const Scenario& scn, const ComplexVector& y) {
  return MmseEstimator(scn).estimate(y);
}

inline ComplexMatrix mvu_estimate(const Scenario& scn, const ComplexVector& y) {
  return MvuEstimator(scn).estimate(y);
}

inline ComplexMatrix peach_estimate(const Scenario& scn, const ComplexVector& y, Index order,
                                    double alpha) {
  return PeachEstimator(scn, order, alpha).estimate(y);
}

inline ComplexMatrix wpeach_estimate(const Scenario& scn, const ComplexVector& y,
                                     const WeightVector& wv) {
  return WpeachEstimator(scn, wv).estimate(y);
}

}  // namespace peach
