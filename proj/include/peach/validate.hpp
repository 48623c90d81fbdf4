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
/// Self-check of library invariants on a small scenario, run by the
/// `validate` CLI subcommand.

#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "peach/adaptive.hpp"
#include "peach/config.hpp"
#include "peach/estimators.hpp"
#include "peach/monte_carlo.hpp"
#include "peach/mse.hpp"
#include "peach/report.hpp"
#include "peach/scenario.hpp"

namespace peach {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline std::string fmt(double v) { return format_real(v); }

}  // namespace detail

/// Runs the invariant checks on an Nt=2, Nr=4, B=2 scenario built from the
/// config's correlation coefficients (beta from the last grid value).
inline std::vector<CheckResult> run_validation(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<CheckResult> out;
  auto check = [&](std::string name, bool ok, std::string detail) {
    out.push_back({std::move(name), ok, std::move(detail)});
  };

  ExperimentConfig small = cfg;
  small.nt = 2;
  small.nr = 4;
  small.b = 2;
  const Scenario scn =
      make_exponential_scenario(small.scenario_params(cfg.gamma_db.front(), cfg.beta.back()));
  const SpectralModel model(scn);
  const double mmse = model.mmse_mse();
  const double mvu = mvu_variance(scn);

  {
    const ComplexMatrix diff = scn.d_cov().matrix() -
                               (scn.pilot_tilde() * scn.r_cov().matrix() *
                                    scn.pilot_tilde().adjoint() +
                                scn.s_cov().matrix());
    const double rel = diff.norm() / scn.d_cov().matrix().norm();
    check("d_cov assembly", rel <= 1e-10, "relative residual " + detail::fmt(rel));
  }
  {
    const EigenRange er = extreme_eigenvalues(scn.d_cov());
    check("lambda_min(D) >= noise_var", er.min >= scn.noise_var() * (1.0 - 1e-12),
          "lambda_min " + detail::fmt(er.min));
  }
  check("mmse below mvu", mmse < mvu, detail::fmt(mmse) + " < " + detail::fmt(mvu));
  {
    const double direct = mmse_mse(scn);
    const double rel = std::abs(direct - mmse) / mmse;
    check("mmse spectral vs Cholesky", rel <= 1e-9, "relative difference " + detail::fmt(rel));
  }

  const double alpha_p = alpha_peach(scn);
  const double alpha_w = alpha_wpeach(scn);
  {
    bool ok = true;
    double prev = model.peach_excess(1, alpha_p);
    for (Index l : {2, 4, 8, 16, 32}) {
      const double gap = model.peach_excess(l, alpha_p);
      ok = ok && gap > 0.0 && gap < prev;
      prev = gap;
    }
    const double gap64 = model.peach_excess(64, alpha_p);
    ok = ok && gap64 < 1e-6 * mmse;
    check("peach converges to mmse", ok, "gap at L=64 " + detail::fmt(gap64 / mmse));
  }
  {
    bool dominance = true;
    bool nesting = true;
    double prev = 0.0;
    for (Index l = 0; l <= 10; ++l) {
      const double w = model.wpeach_mse(model.optimal_weights(l, alpha_w));
      const double p = model.wpeach_mse(peach_as_weights(l, alpha_w));
      dominance = dominance && w <= p + 1e-10 * model.r_trace() && w >= mmse - 1e-10 * mmse;
      if (l > 0) nesting = nesting && w <= prev + 1e-10 * model.r_trace();
      prev = w;
    }
    check("wpeach dominates peach", dominance, "L = 0..10");
    check("wpeach non-increasing in L", nesting, "L = 0..10");
  }
  {
    const Index l = 3;
    const WeightVector w = model.optimal_weights(l, alpha_w);
    auto rng = RngStream::derive(cfg.seed, 0, StreamRole::misc);
    const ComplexVector y1 = rng.complex_normal_vector(scn.dims().n());
    const ComplexVector y2 = rng.complex_normal_vector(scn.dims().n());
    const ComplexVector y12 = y1 + y2;
    double worst = 0.0;
    auto lin = [&](auto&& est) {
      const ComplexMatrix lhs = est(y12);
      const ComplexMatrix rhs = est(y1) + est(y2);
      worst = std::max(worst, (lhs - rhs).norm() / std::max(1e-300, lhs.norm()));
    };
    lin([&](const ComplexVector& y) { return mmse_estimate(scn, y); });
    lin([&](const ComplexVector& y) { return mvu_estimate(scn, y); });
    lin([&](const ComplexVector& y) { return peach_estimate(scn, y, l, alpha_p); });
    lin([&](const ComplexVector& y) { return wpeach_estimate(scn, y, w); });
    check("estimators are linear", worst <= 1e-12, "worst relative residual " + detail::fmt(worst));
  }
  {
    const std::uint64_t trials = std::max<std::uint64_t>(cfg.trials, 10000);
    const Index l = 3;
    const MmseEstimator e_mmse(scn);
    const MvuEstimator e_mvu(scn);
    const PeachEstimator e_peach(scn, l, alpha_p);
    const WpeachEstimator e_wpeach(scn, model.optimal_weights(l, alpha_w));
    const auto mc = monte_carlo_bank(
        scn, 4,
        [&](const ComplexMatrix& y, std::vector<ComplexMatrix>& o) {
          o[0] = e_mmse.apply(y);
          o[1] = e_mvu.apply(y);
          o[2] = e_peach.apply(y);
          o[3] = e_wpeach.apply(y);
        },
        trials, cfg.seed, cfg.threads);
    const double expect[] = {mmse, mvu, model.peach_mse(l, alpha_p),
                             model.wpeach_mse(e_wpeach.weights())};
    const char* names[] = {"mmse", "mvu", "peach", "wpeach"};
    for (int i = 0; i < 4; ++i) {
      const double rel = std::abs(mc[i].mse - expect[i]) / expect[i];
      std::ostringstream d;
      d << "mc " << detail::fmt(mc[i].mse) << " analytic " << detail::fmt(expect[i])
        << " relative " << detail::fmt(rel);
      check(std::string("monte carlo agrees: ") + names[i], rel <= 0.03, d.str());
    }
  }
  {
    WindowConfig wc{2, 16, alpha_w, 0};
    auto probe_rng = RngStream::derive(cfg.seed, 0, StreamRole::probe);
    SlidingWindowWeights state(scn, wc, probe_rng);
    const TrialBlock tb = sample_trials(scn, cfg.seed, 0, 3 * wc.window + 5);
    for (Index t = 0; t < wc.window; ++t) state.warm_up(tb.y.col(t));
    for (Index t = wc.window; t < tb.y.cols(); ++t) state.update(tb.y.col(t));
    RealVector batch = RealVector::Zero(2 * wc.order + 1);
    for (const auto& y : state.window_contents()) batch += state.sample_moments(y);
    double worst = 0.0;
    const double inv_t = 1.0 / static_cast<double>(wc.window);
    for (Index i = 1; i <= wc.order + 1; ++i) {
      for (Index j = 1; j <= wc.order + 1; ++j) {
        const double want = std::pow(alpha_w, static_cast<double>(i + j)) * inv_t * batch(i + j - 2);
        worst = std::max(worst, std::abs(state.a_tilde()(i - 1, j - 1) - want) /
                                    std::max(1e-300, std::abs(want)));
      }
    }
    check("sliding window matches batch", worst <= 1e-8, "worst relative " + detail::fmt(worst));
  }
  return out;
}

}  // namespace peach
