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
/// MSE sweeps over order and SNR, and the sliding-window weights demo.
///
/// Analytic values come from SpectralModel; Monte Carlo (trials > 0) runs
/// every requested estimator on shared draws. Reports are deterministic
/// functions of the config; wall times are only recorded when
/// `cfg.timing` is set.

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "peach/adaptive.hpp"
#include "peach/config.hpp"
#include "peach/estimators.hpp"
#include "peach/monte_carlo.hpp"
#include "peach/mse.hpp"
#include "peach/report.hpp"
#include "peach/rng.hpp"
#include "peach/scenario.hpp"

namespace peach {

namespace detail {

using Clock = std::chrono::steady_clock;

inline double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

/// Wall time per estimate of `fn` applied to one block of observations.
template <typename Fn>
double time_per_estimate(const Scenario& scn, std::uint64_t seed, Fn&& fn) {
  const TrialBlock tb = sample_trials(scn, seed, 0, kTrialBlock);
  const auto start = Clock::now();
  fn(tb.y);
  return elapsed_ms(start) / static_cast<double>(kTrialBlock);
}

/// Evaluates every requested estimator at one (gamma, beta) point.
inline void evaluate_point(const ExperimentConfig& cfg, double gamma_db, double beta,
                           MseReport& report) {
  const Scenario scn = make_exponential_scenario(cfg.scenario_params(gamma_db, beta));
  const SpectralModel model(scn);
  const double tr = model.r_trace();
  const std::vector<Index>& orders = cfg.orders;

  const bool want_mmse = cfg.wants("mmse");
  const bool want_mvu = cfg.wants("mvu");
  const bool want_peach = cfg.wants("peach");
  const bool want_wpeach = cfg.wants("wpeach");

  const double alpha_p = alpha_peach(scn, cfg.alpha_rule_enum());
  const double alpha_w = alpha_wpeach(scn);
  std::vector<WeightVector> weights;
  if (want_wpeach) {
    for (Index l : orders) weights.push_back(model.optimal_weights(l, alpha_w));
  }

  std::optional<MmseEstimator> mmse;
  std::optional<MvuEstimator> mvu;
  std::optional<PeachEstimator> peach;
  if (want_mmse) mmse.emplace(scn);
  if (want_mvu) mvu.emplace(scn);
  if (want_peach) peach.emplace(scn, orders.back(), alpha_p);

  // Monte Carlo outputs, in this order: mmse, mvu, peach[orders], wpeach[orders].
  std::vector<McResult> mc;
  if (cfg.trials > 0) {
    const std::size_t outputs = (want_mmse ? 1 : 0) + (want_mvu ? 1 : 0) +
                                (want_peach ? orders.size() : 0) +
                                (want_wpeach ? orders.size() : 0);
    auto bank = [&](const ComplexMatrix& y, std::vector<ComplexMatrix>& out) {
      std::size_t o = 0;
      if (mmse) out[o++] = mmse->apply(y);
      if (mvu) out[o++] = mvu->apply(y);
      if (peach) {
        for (auto& e : peach->apply_orders(y, orders)) out[o++] = std::move(e);
      }
      if (want_wpeach) {
        for (auto& e : WpeachEstimator::apply_many(scn, y, weights)) out[o++] = std::move(e);
      }
    };
    mc = monte_carlo_bank(scn, outputs, bank, cfg.trials, cfg.seed, cfg.threads);
  }

  std::size_t next_mc = 0;
  auto fill = [&](MseRow& row, std::optional<McResult> r) {
    row.gamma_db = gamma_db;
    row.beta = beta;
    if (r) {
      row.nmse_mc = r->mse / tr;
      row.std_error = r->std_error / tr;
      row.trials = r->trials;
    }
  };
  auto take_mc = [&]() -> std::optional<McResult> {
    if (mc.empty()) return std::nullopt;
    return mc[next_mc++];
  };

  if (want_mmse) {
    const auto r = take_mc();
    const double t = cfg.timing ? time_per_estimate(scn, cfg.seed, [&](const ComplexMatrix& y) {
                                    MmseEstimator(scn).apply(y);
                                  })
                                : 0.0;
    for (Index l : orders) {
      MseRow row{"mmse", l};
      row.nmse_analytic = model.mmse_mse() / tr;
      row.matvecs = 1;
      row.walltime_ms = t;
      fill(row, r);
      report.rows.push_back(row);
    }
  }
  if (want_mvu) {
    const auto r = take_mc();
    const double t = cfg.timing ? time_per_estimate(scn, cfg.seed, [&](const ComplexMatrix& y) {
                                    MvuEstimator(scn).apply(y);
                                  })
                                : 0.0;
    const double var = mvu_variance(scn) / tr;
    for (Index l : orders) {
      MseRow row{"mvu", l};
      row.nmse_analytic = var;
      row.matvecs = 1;
      row.walltime_ms = t;
      fill(row, r);
      report.rows.push_back(row);
    }
  }
  if (want_peach) {
    for (Index l : orders) {
      MseRow row{"peach", l};
      row.nmse_analytic = model.peach_mse(l, alpha_p) / tr;
      row.matvecs = static_cast<std::uint64_t>(l) + 1;
      if (cfg.timing) {
        const PeachEstimator est(scn, l, alpha_p);
        row.walltime_ms =
            time_per_estimate(scn, cfg.seed, [&](const ComplexMatrix& y) { est.apply(y); });
      }
      fill(row, take_mc());
      report.rows.push_back(row);
    }
  }
  if (want_wpeach) {
    for (std::size_t i = 0; i < orders.size(); ++i) {
      MseRow row{"wpeach", orders[i]};
      row.nmse_analytic = model.wpeach_mse(weights[i]) / tr;
      row.matvecs = static_cast<std::uint64_t>(orders[i]) + 1;
      if (cfg.timing) {
        const WpeachEstimator est(scn, weights[i]);
        row.walltime_ms =
            time_per_estimate(scn, cfg.seed, [&](const ComplexMatrix& y) { est.apply(y); });
      }
      fill(row, take_mc());
      report.rows.push_back(row);
    }
  }
}

inline MseReport run_grid(const ExperimentConfig& cfg) {
  cfg.validate();
  MseReport report;
  for (double g : cfg.gamma_db) {
    for (double b : cfg.beta) evaluate_point(cfg, g, b, report);
  }
  report.sort();
  return report;
}

}  // namespace detail

/// Normalized MSE of each estimator against the polynomial order L, for
/// every (gamma, beta) in the grids.
inline MseReport run_order_sweep(const ExperimentConfig& cfg) { return detail::run_grid(cfg); }

/// Normalized MSE of each estimator against gamma at the configured
/// order(s), for every beta in the grid.
inline MseReport run_snr_sweep(const ExperimentConfig& cfg) { return detail::run_grid(cfg); }

/// Streams observations through SlidingWindowWeights at every (gamma, beta)
/// point and compares the resulting weights against the exact optimum.
///
/// Rows: "wpeach" (exact optimal weights) and "wpeach_approx", whose
/// analytic value is the MSE of the approximate weights averaged over the
/// stream_length + 1 weight solves after warm-up. Monte Carlo, when
/// requested, uses the final approximate weights.
inline MseReport run_adaptive_demo(const ExperimentConfig& cfg) {
  cfg.validate();
  MseReport report;
  std::uint64_t point = 0;
  for (double g : cfg.gamma_db) {
    for (double beta : cfg.beta) {
      const Scenario scn = make_exponential_scenario(cfg.scenario_params(g, beta));
      const SpectralModel model(scn);
      const double tr = model.r_trace();
      const double alpha = alpha_wpeach(scn);
      const std::uint64_t stream_seed = substream_seed(cfg.seed, point, StreamRole::observation);
      const TrialBlock stream =
          sample_trials(scn, stream_seed, 0, cfg.window + cfg.stream_length);

      for (Index l : cfg.orders) {
        const WeightVector optimal = model.optimal_weights(l, alpha);
        const auto start = detail::Clock::now();
        WindowConfig wc{l, cfg.window, alpha, cfg.probes};
        auto probe_rng = RngStream::derive(cfg.seed, point, StreamRole::probe);
        SlidingWindowWeights state(scn, wc, probe_rng);
        for (Index t = 0; t < cfg.window; ++t) state.warm_up(stream.y.col(t));

        auto weights_now = [&] {
          if (cfg.inject_exact_weights) {
            return wpeach_weights_optimal(model.weight_system(l, alpha));
          }
          return state.current_weights();
        };
        double mse_sum = model.wpeach_mse(weights_now());
        WeightVector last = weights_now();
        for (Index t = 0; t < cfg.stream_length; ++t) {
          state.update(stream.y.col(cfg.window + t));
          last = weights_now();
          mse_sum += model.wpeach_mse(last);
        }
        const double approx_ms = detail::elapsed_ms(start);

        std::vector<McResult> mc;
        if (cfg.trials > 0) {
          const WeightVector sets[] = {optimal, last};
          mc = monte_carlo_bank(
              scn, 2,
              [&](const ComplexMatrix& y, std::vector<ComplexMatrix>& out) {
                auto res = WpeachEstimator::apply_many(scn, y, sets);
                out[0] = std::move(res[0]);
                out[1] = std::move(res[1]);
              },
              cfg.trials, cfg.seed, cfg.threads);
        }

        MseRow exact{"wpeach", l, g, beta};
        exact.nmse_analytic = model.wpeach_mse(optimal) / tr;
        exact.matvecs = static_cast<std::uint64_t>(l) + 1;
        MseRow approx{"wpeach_approx", l, g, beta};
        approx.nmse_analytic = mse_sum / static_cast<double>(cfg.stream_length + 1) / tr;
        // Per-update cost of the window plus one estimate.
        approx.matvecs = 2 * static_cast<std::uint64_t>(l) + 2 + static_cast<std::uint64_t>(l) + 1;
        if (cfg.timing) {
          approx.walltime_ms = approx_ms / static_cast<double>(cfg.window + cfg.stream_length);
        }
        if (!mc.empty()) {
          for (auto [row, r] : {std::pair{&exact, mc[0]}, std::pair{&approx, mc[1]}}) {
            row->nmse_mc = r.mse / tr;
            row->std_error = r.std_error / tr;
            row->trials = r.trials;
          }
        }
        report.rows.push_back(exact);
        report.rows.push_back(approx);
      }
      ++point;
    }
  }
  report.sort();
  return report;
}

}  // namespace peach
