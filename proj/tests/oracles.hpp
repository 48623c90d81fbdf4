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

// Independent reference implementations used by the tests. They follow the
// textbook formulas literally (explicit inverses, explicit matrix powers,
// element loops) and share no code paths with the library beyond Eigen's
// dense types.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "peach/scenario.hpp"

namespace oracle {

using Cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline Mat kron_loop(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline Mat random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& gen) {
  std::normal_distribution<double> n;
  Mat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Cd(n(gen), n(gen));
  return m;
}

/// Random Hermitian positive definite matrix with eigenvalues >= shift.
inline Mat random_hpd(Eigen::Index dim, std::mt19937_64& gen, double shift = 0.5) {
  const Mat x = random_matrix(dim, dim, gen);
  return x * x.adjoint() / static_cast<double>(dim) + shift * Mat::Identity(dim, dim);
}

inline Mat inverse(const Mat& x) { return x.fullPivLu().inverse(); }

/// The textbook form of the Bayesian estimator gain: R P~^H (P~ R P~^H + S)^-1.
inline Mat mmse_gain(const peach::Scenario& s) {
  const Mat& r = s.r_cov().matrix();
  const Mat& pt = s.pilot_tilde();
  return r * pt.adjoint() * inverse(pt * r * pt.adjoint() + s.s_cov().matrix());
}

/// (P~^H S^-1 P~)^-1 P~^H S^-1.
inline Mat mvu_gain(const peach::Scenario& s) {
  const Mat& pt = s.pilot_tilde();
  const Mat s_inv = inverse(s.s_cov().matrix());
  return inverse(pt.adjoint() * s_inv * pt) * pt.adjoint() * s_inv;
}

/// tr((R^-1 + P~^H S^-1 P~)^-1); needs R invertible.
inline double mmse_mse_information_form(const peach::Scenario& s) {
  const Mat& pt = s.pilot_tilde();
  const Mat info = inverse(s.r_cov().matrix()) + pt.adjoint() * inverse(s.s_cov().matrix()) * pt;
  return inverse(info).trace().real();
}

inline double mvu_variance(const peach::Scenario& s) {
  const Mat& pt = s.pilot_tilde();
  return inverse(pt.adjoint() * inverse(s.s_cov().matrix()) * pt).trace().real();
}

inline Mat matrix_power(const Mat& x, int k) {
  Mat out = Mat::Identity(x.rows(), x.cols());
  for (int i = 0; i < k; ++i) out = out * x;
  return out;
}

/// MSE of the linear estimator vec(H^) = F y: tr(R) + tr(F D F^H) - 2 Re tr(F P~ R).
inline double linear_estimator_mse(const peach::Scenario& s, const Mat& f) {
  const Mat& r = s.r_cov().matrix();
  const Mat& d = s.d_cov().matrix();
  const Mat& pt = s.pilot_tilde();
  return r.trace().real() + (f * d * f.adjoint()).trace().real() - 2.0 * (f * pt * r).trace().real();
}

/// A_L = sum_l alpha (I - alpha D)^l, built from explicit powers.
inline Mat peach_polynomial(const peach::Scenario& s, int order, double alpha) {
  const Mat& d = s.d_cov().matrix();
  const Mat step = Mat::Identity(d.rows(), d.cols()) - alpha * d;
  Mat a = Mat::Zero(d.rows(), d.cols());
  for (int l = 0; l <= order; ++l) a += alpha * matrix_power(step, l);
  return a;
}

/// tr(R + R P~^H A_L D A_L^H P~ R - 2 R P~^H A_L P~ R) evaluated densely.
inline double peach_mse(const peach::Scenario& s, int order, double alpha) {
  const Mat& r = s.r_cov().matrix();
  const Mat& pt = s.pilot_tilde();
  const Mat a = peach_polynomial(s, order, alpha);
  const Mat t = r + r * pt.adjoint() * a * s.d_cov().matrix() * a.adjoint() * pt * r -
                2.0 * r * pt.adjoint() * a * pt * r;
  return t.trace().real();
}

/// Weight system from explicit matrix powers. `max_imag` receives the
/// largest imaginary residue of the traces.
struct WeightSystem {
  RMat a;
  RVec b;
  double max_imag = 0.0;
};

inline WeightSystem weight_system(const peach::Scenario& s, int order, double alpha) {
  const Mat& r = s.r_cov().matrix();
  const Mat& pt = s.pilot_tilde();
  const Mat& d = s.d_cov().matrix();
  const int k = order + 1;
  std::vector<Cd> tr(2 * k + 1);
  for (int p = 0; p <= 2 * k; ++p) tr[p] = (r * pt.adjoint() * matrix_power(d, p) * pt * r).trace();
  WeightSystem out;
  out.a.resize(k, k);
  out.b.resize(k);
  for (int i = 1; i <= k; ++i) {
    const Cd bi = std::pow(alpha, i) * tr[i - 1];
    out.b(i - 1) = bi.real();
    out.max_imag = std::max(out.max_imag, std::abs(bi.imag()) / std::abs(bi));
    for (int j = 1; j <= k; ++j) {
      const Cd aij = std::pow(alpha, i + j) * tr[i + j - 1];
      out.a(i - 1, j - 1) = aij.real();
      out.max_imag = std::max(out.max_imag, std::abs(aij.imag()) / std::abs(aij));
    }
  }
  return out;
}

inline double quadratic_mse(const WeightSystem& sys, double r_trace, const RVec& w) {
  return r_trace + w.dot(sys.a * w) - 2.0 * sys.b.dot(w);
}

/// Minimizes the quadratic by conjugate gradients in long double, started
/// from zero and restarted a few times; no factorization involved.
inline RVec minimize_quadratic(const WeightSystem& sys, int restarts = 20) {
  using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using LVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const LMat a = sys.a.cast<long double>();
  const LVec b = sys.b.cast<long double>();
  LVec w = LVec::Zero(b.size());
  for (int r = 0; r < restarts; ++r) {
    LVec g = b - a * w;
    LVec p = g;
    for (Eigen::Index it = 0; it < b.size(); ++it) {
      const long double gg = g.squaredNorm();
      if (gg == 0.0L) break;
      const LVec ap = a * p;
      const long double step = gg / p.dot(ap);
      w += step * p;
      g -= step * ap;
      p = g + (g.squaredNorm() / gg) * p;
    }
  }
  return w.cast<double>();
}

/// Empirical covariance (1/K) sum x x^H of the columns of `samples`.
inline Mat empirical_covariance(const Mat& samples) {
  return samples * samples.adjoint() / static_cast<double>(samples.cols());
}

}  // namespace oracle
