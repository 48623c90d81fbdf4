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
/// Sample-based tracking of the W-PEACH weight system over a sliding window.
///
/// Since E[y y^H] = D, every trace tr(R P~^H D^k P~ R) with k >= 1 can be
/// estimated from received signals by the quadratic forms
///
///   q(y, k-1) = y^H P~ R^2 P~^H D^(k-1) y.
///
/// The window keeps, per stored observation, the moments q(y, 0..2L) and a
/// running sum of them, so that a new observation costs 2L products with D
/// and two projections (O(L N^2)), and removing the oldest one is free. The
/// data-independent entry b_1 = alpha tr(P~ R^2 P~^H) comes from Gaussian
/// probe vectors drawn once at construction.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "peach/error.hpp"
#include "peach/estimators.hpp"
#include "peach/linalg.hpp"
#include "peach/mse.hpp"
#include "peach/rng.hpp"
#include "peach/scenario.hpp"

namespace peach {

struct WindowConfig {
  Index order = 3;     ///< polynomial order L
  Index window = 100;  ///< window length T
  double alpha = 1.0;
  Index probes = 0;    ///< probe count for b_1; 0 means "same as window"

  Index probe_count() const { return probes > 0 ? probes : window; }
};

/// Unbiased probe estimate of alpha tr(P~ R^2 P~^H):
/// (alpha / T) sum_i ||R P~^H v_i||^2.
inline double probe_trace_b1(const Scenario& scn, std::span<const ComplexVector> probes,
                             double alpha, OpCounter* ops = nullptr) {
  if (probes.empty()) throw InvalidArgument("probe_trace_b1: at least one probe vector required");
  double sum = 0.0;
  for (const auto& v : probes) {
    if (v.size() != scn.dims().n()) throw InvalidArgument("probe_trace_b1: probe has wrong length");
    sum += (scn.projector() * v).squaredNorm();
  }
  if (ops) ops->projections += probes.size();
  return alpha * sum / static_cast<double>(probes.size());
}

/// Sliding-window approximation of the W-PEACH weight system.
///
/// Lifecycle: construct, feed exactly `window` observations with warm_up(),
/// then call update() once per new observation. Single writer; the state may
/// be moved between threads but not shared mutably.
class SlidingWindowWeights {
 public:
  SlidingWindowWeights(const Scenario& scn, const WindowConfig& cfg, RngStream& probe_rng)
      : scn_(scn), cfg_(cfg) {
    if (cfg.order < 0) throw InvalidArgument("SlidingWindowWeights: order must be >= 0");
    if (cfg.window < 1) throw InvalidArgument("SlidingWindowWeights: window must be >= 1");
    if (!(cfg.alpha > 0.0)) throw InvalidArgument("SlidingWindowWeights: alpha must be positive");
    const Index nm = num_moments();
    moments_ = RealMatrix::Zero(nm, cfg.window);
    sums_ = RealVector::Zero(nm);
    slots_.resize(static_cast<std::size_t>(cfg.window));
    probes_.reserve(static_cast<std::size_t>(cfg.probe_count()));
    for (Index i = 0; i < cfg.probe_count(); ++i) {
      probes_.push_back(probe_rng.complex_normal_vector(scn.dims().n()));
    }
    b1_ = probe_trace_b1(scn, probes_, cfg.alpha, &ops_);
    rebuild_system();
  }

  const WindowConfig& config() const { return cfg_; }
  bool warm() const { return filled_ == cfg_.window; }
  /// Number of observations consumed so far.
  Index time() const { return time_; }
  Index filled() const { return filled_; }

  /// Adds an observation while the window is still filling.
  void warm_up(const ComplexVector& y) {
    if (warm()) throw StateError("SlidingWindowWeights: window already full; use update()");
    const RealVector q = sample_moments(y, &ops_);
    store(head_, y, q);
    sums_ += q;
    head_ = (head_ + 1) % cfg_.window;
    ++filled_;
    ++time_;
    rebuild_system();
  }

  /// Slides the window: adds y_new and removes the oldest observation.
  void update(const ComplexVector& y_new) {
    if (!warm()) throw StateError("SlidingWindowWeights: update() before the window is warm");
    const RealVector q = sample_moments(y_new, &ops_);
    sums_ += q;
    sums_ -= moments_.col(head_);
    store(head_, y_new, q);
    head_ = (head_ + 1) % cfg_.window;
    ++time_;
    // Full turnover: re-sum the stored moments to shed accumulated roundoff.
    if (++since_resum_ == cfg_.window) {
      sums_ = moments_.rowwise().sum();
      since_resum_ = 0;
    }
    rebuild_system();
  }

  const RealMatrix& a_tilde() const { return a_; }
  const RealVector& b_tilde() const { return b_; }
  double probe_b1() const { return b1_; }
  const std::vector<ComplexVector>& probes() const { return probes_; }

  /// Observations currently in the window, oldest first.
  std::vector<ComplexVector> window_contents() const {
    std::vector<ComplexVector> out;
    const Index start = warm() ? head_ : 0;
    for (Index i = 0; i < filled_; ++i) {
      out.push_back(slots_[static_cast<std::size_t>((start + i) % cfg_.window)]);
    }
    return out;
  }

  WeightSystem weight_system() const { return {a_, b_, cfg_.alpha}; }

  /// Solves A~ w = b~ (an (L+1)-dimensional system).
  WeightVector current_weights() const {
    if (!warm()) throw StateError("SlidingWindowWeights: weights requested before warm-up");
    try {
      return wpeach_weights_optimal(weight_system());
    } catch (const NumericalError& e) {
      throw NumericalError(std::string("current_weights: approximate weight system is singular; "
                                       "extend the window (") + e.what() + ")");
    }
  }

  /// q(y, k) = Re y^H P~ R^2 P~^H D^k y for k = 0..2L.
  RealVector sample_moments(const ComplexVector& y, OpCounter* ops = nullptr) const {
    if (y.size() != scn_.dims().n()) {
      throw InvalidArgument("SlidingWindowWeights: observation has wrong length");
    }
    const ComplexVector g = scn_.projector().adjoint() * (scn_.projector() * y);
    if (ops) ops->projections += 2;
    const Index nm = num_moments();
    RealVector q(nm);
    ComplexVector z = y;
    ComplexVector dz(y.size());
    for (Index k = 0; k < nm; ++k) {
      if (k > 0) {
        dz.noalias() = scn_.d_cov().matrix() * z;
        z.swap(dz);
        if (ops) ops->d_applications += 1;
      }
      // g^H D^k y is complex for a single sample (the product of two
      // Hermitian matrices is not Hermitian); its real part is the unbiased
      // estimate of the real trace.
      q(k) = g.dot(z).real();
    }
    return q;
  }

  /// Operation counts accumulated by this state (probes plus all samples).
  const OpCounter& ops() const { return ops_; }

 private:
  Index num_moments() const { return 2 * cfg_.order + 1; }

  void store(Index slot, const ComplexVector& y, const RealVector& q) {
    slots_[static_cast<std::size_t>(slot)] = y;
    moments_.col(slot) = q;
  }

  void rebuild_system() {
    const Index k = cfg_.order + 1;
    const double inv_t = 1.0 / static_cast<double>(cfg_.window);
    RealVector apow(2 * k + 1);
    apow(0) = 1.0;
    for (Index p = 1; p <= 2 * k; ++p) apow(p) = apow(p - 1) * cfg_.alpha;
    a_.resize(k, k);
    b_.resize(k);
    for (Index i = 1; i <= k; ++i) {
      for (Index j = 1; j <= k; ++j) a_(i - 1, j - 1) = apow(i + j) * inv_t * sums_(i + j - 2);
      b_(i - 1) = i == 1 ? b1_ : apow(i) * inv_t * sums_(i - 2);
    }
  }

  Scenario scn_;
  WindowConfig cfg_;
  std::vector<ComplexVector> slots_;
  RealMatrix moments_;
  RealVector sums_;
  Index head_ = 0;
  Index filled_ = 0;
  Index time_ = 0;
  Index since_resum_ = 0;
  std::vector<ComplexVector> probes_;
  double b1_ = 0.0;
  RealMatrix a_;
  RealVector b_;
  OpCounter ops_;
};

/// Builds a warm window from exactly `cfg.window` observations.
inline SlidingWindowWeights window_init(const Scenario& scn, const WindowConfig& cfg,
                                        std::span<const ComplexVector> warmup, RngStream& probe_rng) {
  if (static_cast<Index>(warmup.size()) != cfg.window) {
    throw InvalidArgument("window_init: expected " + std::to_string(cfg.window) +
                          " warm-up observations, got " + std::to_string(warmup.size()));
  }
  SlidingWindowWeights state(scn, cfg, probe_rng);
  for (const auto& y : warmup) state.warm_up(y);
  return state;
}

}  // namespace peach
