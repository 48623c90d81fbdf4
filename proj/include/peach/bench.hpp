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
/// Per-estimate cost of each estimator against the channel dimension M.
///
/// Scenarios use nt = b = bench_nt and nr = M / bench_nt, so the
/// observation dimension N equals M. The exact estimators pay for their
/// factorizations on every estimate (the channel statistics are assumed to
/// change between estimates); the polynomial estimators only apply their
/// recursion. W-PEACH weights are computed up front and timed as setup.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "peach/config.hpp"
#include "peach/estimators.hpp"
#include "peach/mse.hpp"
#include "peach/report.hpp"
#include "peach/rng.hpp"
#include "peach/scenario.hpp"

namespace peach {

namespace detail {

/// Median wall time (ms) of one call of each function. Each sample repeats
/// a function enough times to last at least `min_sample_ms`; samples of the
/// different functions are interleaved so that load drift hits all of them.
inline std::vector<double> median_call_ms(const std::vector<std::function<void()>>& fns,
                                          Index repeats, double min_sample_ms = 25.0) {
  using Clock = std::chrono::steady_clock;
  auto time_calls = [](const std::function<void()>& fn, std::uint64_t inner) {
    const auto start = Clock::now();
    for (std::uint64_t i = 0; i < inner; ++i) fn();
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  };
  std::vector<std::uint64_t> inner(fns.size(), 1);
  for (std::size_t f = 0; f < fns.size(); ++f) {
    fns[f]();  // warm caches and allocator
    while (time_calls(fns[f], inner[f]) < min_sample_ms && inner[f] < (1u << 20)) inner[f] *= 2;
  }
  std::vector<std::vector<double>> samples(fns.size());
  for (Index r = 0; r < repeats; ++r) {
    for (std::size_t f = 0; f < fns.size(); ++f) {
      samples[f].push_back(time_calls(fns[f], inner[f]) / static_cast<double>(inner[f]));
    }
  }
  std::vector<double> out;
  for (auto& v : samples) {
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    out.push_back(v[v.size() / 2]);
  }
  return out;
}

}  // namespace detail

inline BenchReport run_complexity_bench(const ExperimentConfig& cfg) {
  cfg.validate();
  const Index order = cfg.bench_order;
  const Index nt = cfg.bench_nt;
  BenchReport report;
  std::vector<double> sizes;
  std::vector<double> t_mmse, t_mvu, t_peach, t_peach2, t_wpeach;

  for (Index m : cfg.bench_sizes) {
    ExponentialScenarioParams p;
    p.dims = {nt, m / nt, nt};
    p.gamma_db = cfg.bench_gamma_db;
    p.r_t = cfg.r_t;
    p.r_r = cfg.r_r;
    const Scenario scn = make_exponential_scenario(p);
    auto rng = RngStream::derive(cfg.seed, static_cast<std::uint64_t>(m), StreamRole::observation);
    const ComplexMatrix y = rng.complex_normal_vector(scn.dims().n());
    volatile double sink = 0.0;

    const auto setup_start = std::chrono::steady_clock::now();
    const double alpha_p = alpha_peach(scn);
    const WeightVector w = SpectralModel(scn).optimal_weights(order, alpha_wpeach(scn));
    report.setup_ms +=
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - setup_start)
            .count();
    const PeachEstimator peach(scn, order, alpha_p);
    const PeachEstimator peach2(scn, 2 * order, alpha_p);
    const WpeachEstimator wpeach(scn, w);

    auto add = [&](const std::string& path, Index l, double ms, const OpCounter& ops,
                   std::vector<double>& series) {
      report.rows.push_back({path, l, m, ms, ops.matvecs(), ops.solves, ops.factorizations});
      series.push_back(ms);
    };

    const std::vector<double> ms = detail::median_call_ms(
        {[&] { sink = sink + std::abs(MmseEstimator(scn).apply(y)(0)); },
         [&] { sink = sink + std::abs(MvuEstimator(scn).apply(y)(0)); },
         [&] { sink = sink + std::abs(peach.apply(y)(0)); },
         [&] { sink = sink + std::abs(peach2.apply(y)(0)); },
         [&] { sink = sink + std::abs(wpeach.apply(y)(0)); }},
        cfg.bench_repeats);

    OpCounter ops;
    MmseEstimator(scn, &ops).apply(y, &ops);
    add("mmse", 0, ms[0], ops, t_mmse);
    ops = {};
    MvuEstimator(scn, &ops).apply(y, &ops);
    add("mvu", 0, ms[1], ops, t_mvu);
    ops = {};
    peach.apply(y, &ops);
    add("peach", order, ms[2], ops, t_peach);
    ops = {};
    peach2.apply(y, &ops);
    add("peach_2L", 2 * order, ms[3], ops, t_peach2);
    ops = {};
    wpeach.apply(y, &ops);
    add("wpeach", order, ms[4], ops, t_wpeach);

    sizes.push_back(static_cast<double>(m));
  }

  report.fits.push_back(fit_loglog("mmse", 0, sizes, t_mmse));
  report.fits.push_back(fit_loglog("mvu", 0, sizes, t_mvu));
  report.fits.push_back(fit_loglog("peach", order, sizes, t_peach));
  report.fits.push_back(fit_loglog("peach_2L", 2 * order, sizes, t_peach2));
  report.fits.push_back(fit_loglog("wpeach", order, sizes, t_wpeach));
  return report;
}

/// Ratio of order-2L to order-L PEACH apply time at the largest size.
inline double peach_doubling_ratio(const BenchReport& report) {
  const BenchRow* l1 = nullptr;
  const BenchRow* l2 = nullptr;
  for (const auto& r : report.rows) {
    if (r.path == "peach" && (!l1 || r.m > l1->m)) l1 = &r;
    if (r.path == "peach_2L" && (!l2 || r.m > l2->m)) l2 = &r;
  }
  if (!l1 || !l2) throw InvalidArgument("peach_doubling_ratio: report lacks PEACH rows");
  return l2->median_ms / l1->median_ms;
}

}  // namespace peach
