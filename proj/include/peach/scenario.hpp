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
/// Statistical description of one pilot-based estimation problem.
///
/// The receiver observes Y = H P + N with vec(H) ~ CN(0, R) and
/// vec(N) ~ CN(0, S). In vectorized form y = P~ vec(H) + vec(N) with
/// P~ = P^T (x) I. The observation covariance D = P~ R P~^H + S is cached
/// because every estimator is built around it.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "peach/error.hpp"
#include "peach/linalg.hpp"
#include "peach/rng.hpp"

namespace peach {

struct SystemDims {
  Index nt = 1;  ///< transmit antennas
  Index nr = 1;  ///< receive antennas
  Index b = 1;   ///< pilot length in symbols

  Index m() const { return nt * nr; }  ///< channel dimension
  Index n() const { return b * nr; }   ///< observation dimension

  void validate() const {
    if (nt < 1 || nr < 1 || b < 1) {
      throw InvalidArgument("SystemDims: nt, nr and b must all be >= 1");
    }
    check_dimension(m(), n(), "SystemDims");
  }

  bool operator==(const SystemDims&) const = default;
};

/// Pilot power and normalized pilot SNR gamma = p_t / noise_var.
struct SnrSpec {
  double gamma = 1.0;
  double p_t = 1.0;

  static SnrSpec from_db(double gamma_db, double noise_var = 1.0) {
    const double gamma = std::pow(10.0, gamma_db / 10.0);
    return {gamma, gamma * noise_var};
  }
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// One contaminating cell reusing the desired pilot. Its channel covariance
/// enters the disturbance as beta * (sigma_t (x) sigma_r).
struct InterfererSpec {
  double beta = 0.0;
  HermitianMatrix sigma_t;
  HermitianMatrix sigma_r;

  void validate(const SystemDims& dims) const {
    if (!(beta >= 0.0 && beta < 1.0)) {
      throw InvalidArgument("InterfererSpec: beta must lie in [0, 1)");
    }
    if (sigma_t.dim() != dims.nt || sigma_r.dim() != dims.nr) {
      throw InvalidArgument("InterfererSpec: covariance factor dimensions do not match nt/nr");
    }
    for (const HermitianMatrix* f : {&sigma_t, &sigma_r}) {
      if ((f->matrix().diagonal().real().array() - 1.0).abs().maxCoeff() > 1e-12) {
        throw InvalidArgument("InterfererSpec: covariance factors must have unit diagonal");
      }
      const EigenRange ev = extreme_eigenvalues(*f);
      if (ev.min < -1e-10 * std::max(1.0, ev.max)) {
        throw InvalidArgument("InterfererSpec: covariance factor is not PSD");
      }
    }
  }
};

/// Exponential correlation model: entry(i,j) = r^(j-i) for j >= i and the
/// conjugate below the diagonal. Unit diagonal, PSD for |r| < 1.
inline HermitianMatrix exponential_correlation(Index dim, Complex r) {
  if (dim < 1) throw InvalidArgument("exponential_correlation: dim must be >= 1");
  if (!(std::abs(r) < 1.0)) {
    throw InvalidArgument("exponential_correlation: |r| must be < 1");
  }
  check_dimension(dim, dim, "exponential_correlation");
  ComplexMatrix c(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    Complex p = 1.0;
    for (Index d = 0; j + d < dim; ++d) {
      c(j, j + d) = p;
      c(j + d, j) = std::conj(p);
      p *= r;
    }
  }
  return HermitianMatrix(std::move(c));
}

/// Kronecker channel covariance R = rt (x) rr.
inline HermitianMatrix kronecker_covariance(const HermitianMatrix& rt, const HermitianMatrix& rr) {
  return HermitianMatrix::hermitian_part(kron(rt.matrix(), rr.matrix()));
}

/// Scaled-identity pilot sqrt(p_t) I; requires b == nt.
inline ComplexMatrix build_pilot(const SystemDims& dims, double p_t) {
  dims.validate();
  if (dims.b != dims.nt) {
    throw InvalidArgument("build_pilot: scaled-identity pilot requires b == nt");
  }
  if (!(p_t > 0.0)) throw InvalidArgument("build_pilot: pilot power must be positive");
  return ComplexMatrix::Identity(dims.nt, dims.b) * std::sqrt(p_t);
}

/// Custom pilot shape rescaled so that tr(P P^H) / nt == p_t.
inline ComplexMatrix build_pilot(const SystemDims& dims, double p_t, const ComplexMatrix& shape) {
  dims.validate();
  if (shape.rows() != dims.nt || shape.cols() != dims.b) {
    throw InvalidArgument("build_pilot: custom pilot must be nt x b");
  }
  if (!(p_t > 0.0)) throw InvalidArgument("build_pilot: pilot power must be positive");
  const double power = shape.squaredNorm() / static_cast<double>(dims.nt);
  if (!(power > 0.0) || !std::isfinite(power)) {
    throw InvalidArgument("build_pilot: custom pilot has zero or non-finite power");
  }
  return shape * std::sqrt(p_t / power);
}

/// Average pilot power tr(P P^H) / nt.
inline double pilot_power(const ComplexMatrix& pilot) {
  return pilot.squaredNorm() / static_cast<double>(pilot.rows());
}

/// P~ = P^T (x) I_nr, mapping vec(H) to vec(H P).
inline ComplexMatrix pilot_tilde(const ComplexMatrix& pilot, Index nr) {
  return kron(pilot.transpose(), ComplexMatrix::Identity(nr, nr));
}

/// S = sum_i beta_i P~ (sigma_t,i (x) sigma_r,i) P~^H + noise_var I.
inline HermitianMatrix disturbance_covariance(const SystemDims& dims, double noise_var,
                                              const std::vector<InterfererSpec>& interferers,
                                              const ComplexMatrix& p_tilde) {
  dims.validate();
  if (!(noise_var > 0.0)) throw InvalidArgument("disturbance_covariance: noise_var must be > 0");
  if (p_tilde.rows() != dims.n() || p_tilde.cols() != dims.m()) {
    throw InvalidArgument("disturbance_covariance: pilot_tilde has wrong shape");
  }
  ComplexMatrix s = ComplexMatrix::Identity(dims.n(), dims.n()) * noise_var;
  for (const auto& itf : interferers) {
    itf.validate(dims);
    if (itf.beta == 0.0) continue;
    const ComplexMatrix sigma = kron(itf.sigma_t.matrix(), itf.sigma_r.matrix());
    s.noalias() += itf.beta * (p_tilde * sigma * p_tilde.adjoint());
  }
  return HermitianMatrix::hermitian_part(s);
}

/// gamma / (1 + K beta gamma).
inline double normalized_sinr(double gamma, Index k, double beta) {
  if (!(gamma > 0.0) || k < 0 || beta < 0.0) {
    throw InvalidArgument("normalized_sinr: requires gamma > 0, k >= 0, beta >= 0");
  }
  return gamma / (1.0 + static_cast<double>(k) * beta * gamma);
}

/// Immutable estimation scenario. Copies share the underlying matrices, so
/// a Scenario can be passed by value and read from any number of threads.
class Scenario {
 public:
  static Scenario build(const SystemDims& dims, HermitianMatrix r_cov, ComplexMatrix pilot,
                        double noise_var, std::vector<InterfererSpec> interferers = {}) {
    dims.validate();
    if (r_cov.dim() != dims.m()) {
      throw InvalidArgument("Scenario: channel covariance must be (nt*nr) x (nt*nr)");
    }
    if (pilot.rows() != dims.nt || pilot.cols() != dims.b) {
      throw InvalidArgument("Scenario: pilot must be nt x b");
    }
    if (!pilot.allFinite()) throw InvalidArgument("Scenario: pilot has non-finite entries");
    if (!(noise_var > 0.0)) throw InvalidArgument("Scenario: noise_var must be > 0");
    if (dims.b < dims.nt) {
      warn("pilot length b=" + std::to_string(dims.b) + " is shorter than nt=" +
           std::to_string(dims.nt) + "; the MVU estimator is undefined in this regime");
    }

    auto d = std::make_shared<Data>();
    d->dims = dims;
    d->pilot = std::move(pilot);
    d->pilot_tilde = peach::pilot_tilde(d->pilot, dims.nr);
    d->noise_var = noise_var;
    d->s_cov = disturbance_covariance(dims, noise_var, interferers, d->pilot_tilde);
    d->interferers = std::move(interferers);
    d->r_cov = std::move(r_cov);
    d->projector = d->r_cov.matrix() * d->pilot_tilde.adjoint();
    d->d_cov = HermitianMatrix::hermitian_part(d->pilot_tilde * d->projector +
                                               d->s_cov.matrix());
    d->channel_sampler = GaussianSampler(d->r_cov);
    d->disturbance_sampler = GaussianSampler(d->s_cov);
    return Scenario(std::move(d));
  }

  const SystemDims& dims() const { return d_->dims; }
  const HermitianMatrix& r_cov() const { return d_->r_cov; }
  const ComplexMatrix& pilot() const { return d_->pilot; }
  const ComplexMatrix& pilot_tilde() const { return d_->pilot_tilde; }
  double noise_var() const { return d_->noise_var; }
  const std::vector<InterfererSpec>& interferers() const { return d_->interferers; }
  const HermitianMatrix& s_cov() const { return d_->s_cov; }
  const HermitianMatrix& d_cov() const { return d_->d_cov; }
  /// R P~^H (m x n): maps a whitened observation back to channel space.
  const ComplexMatrix& projector() const { return d_->projector; }
  double r_trace() const { return d_->r_cov.trace(); }
  double pilot_power() const { return peach::pilot_power(d_->pilot); }
  const GaussianSampler& channel_sampler() const { return d_->channel_sampler; }
  const GaussianSampler& disturbance_sampler() const { return d_->disturbance_sampler; }

 private:
  struct Data {
    SystemDims dims;
    HermitianMatrix r_cov;
    ComplexMatrix pilot;
    ComplexMatrix pilot_tilde;
    double noise_var = 1.0;
    std::vector<InterfererSpec> interferers;
    HermitianMatrix s_cov;
    HermitianMatrix d_cov;
    ComplexMatrix projector;
    GaussianSampler channel_sampler;
    GaussianSampler disturbance_sampler;
  };

  explicit Scenario(std::shared_ptr<const Data> d) : d_(std::move(d)) {}

  std::shared_ptr<const Data> d_;
};

/// Parameters of the exponential-correlation Kronecker scenario family.
struct ExponentialScenarioParams {
  SystemDims dims{10, 100, 10};
  double gamma_db = 5.0;
  double noise_var = 1.0;
  Complex r_t = 0.5;
  Complex r_r = 0.7;
  Index num_interferers = 0;
  double beta = 0.0;
  Complex interferer_r_t = 0.5;
  Complex interferer_r_r = 0.7;
};

/// Kronecker/exponential channel, scaled-identity pilot at the requested
/// SNR, and `num_interferers` pilot-contaminating cells of strength beta.
inline Scenario make_exponential_scenario(const ExponentialScenarioParams& p) {
  const SnrSpec snr = SnrSpec::from_db(p.gamma_db, p.noise_var);
  HermitianMatrix r = kronecker_covariance(exponential_correlation(p.dims.nt, p.r_t),
                                           exponential_correlation(p.dims.nr, p.r_r));
  std::vector<InterfererSpec> itf;
  for (Index i = 0; i < p.num_interferers; ++i) {
    itf.push_back({p.beta, exponential_correlation(p.dims.nt, p.interferer_r_t),
                   exponential_correlation(p.dims.nr, p.interferer_r_r)});
  }
  return Scenario::build(p.dims, std::move(r), build_pilot(p.dims, snr.p_t), p.noise_var,
                         std::move(itf));
}

/// R = I, P = sqrt(p_t) I, S = noise_var I: every estimator has a scalar
/// closed form here.
inline Scenario make_identity_scenario(const SystemDims& dims, double p_t, double noise_var = 1.0) {
  return Scenario::build(dims, HermitianMatrix::identity(dims.m()), build_pilot(dims, p_t),
                         noise_var);
}

/// One channel realization H (nr x nt).
inline ComplexMatrix sample_channel(const Scenario& scn, RngStream& rng) {
  return unvectorize(scn.channel_sampler().sample(rng), scn.dims().nr, scn.dims().nt);
}

/// vec(H P + N) with a fresh disturbance draw.
inline ComplexVector sample_observation(const Scenario& scn, const ComplexMatrix& h, RngStream& rng) {
  if (h.rows() != scn.dims().nr || h.cols() != scn.dims().nt) {
    throw InvalidArgument("sample_observation: channel must be nr x nt");
  }
  return scn.pilot_tilde() * vectorize(h) + scn.disturbance_sampler().sample(rng);
}

/// A block of independent trials stored column-wise in vectorized form.
struct TrialBlock {
  ComplexMatrix h;  ///< m x count
  ComplexMatrix y;  ///< n x count
};

/// Samples trials [first, first + count). Trial t always draws from the
/// substreams (seed, t, channel) and (seed, t, disturbance), so any
/// partition of trials into blocks reproduces the same white draws.
inline TrialBlock sample_trials(const Scenario& scn, std::uint64_t seed, std::uint64_t first,
                                Index count) {
  const Index m = scn.dims().m();
  const Index n = scn.dims().n();
  ComplexMatrix wh(m, count);
  ComplexMatrix wn(n, count);
  for (Index j = 0; j < count; ++j) {
    const auto trial = first + static_cast<std::uint64_t>(j);
    auto ch = RngStream::derive(seed, trial, StreamRole::channel);
    wh.col(j) = ch.complex_normal_vector(m);
    auto dist = RngStream::derive(seed, trial, StreamRole::disturbance);
    wn.col(j) = dist.complex_normal_vector(n);
  }
  TrialBlock out;
  out.h = scn.channel_sampler().color(wh);
  out.y = scn.pilot_tilde() * out.h + scn.disturbance_sampler().color(wn);
  return out;
}

}  // namespace peach
