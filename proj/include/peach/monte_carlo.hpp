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
/// Seeded Monte Carlo estimation of ||H - H^||_F^2.
///
/// Trials are processed in fixed blocks of kTrialBlock columns. Block
/// boundaries depend only on the trial index, each trial draws from its own
/// substreams, and per-trial errors are reduced in trial order, so results
/// are bit-identical for any thread count.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "peach/error.hpp"
#include "peach/linalg.hpp"
#include "peach/scenario.hpp"

namespace peach {

inline constexpr Index kTrialBlock = 32;

struct McResult {
  double mse = 0.0;
  double std_error = 0.0;  ///< standard error of the mean
  std::uint64_t trials = 0;
};

/// Mean and standard error of per-trial squared errors, summed in order.
inline McResult summarize_errors(const std::vector<double>& errors) {
  McResult r;
  r.trials = errors.size();
  if (errors.empty()) return r;
  double sum = 0.0;
  for (double e : errors) sum += e;
  r.mse = sum / static_cast<double>(errors.size());
  if (errors.size() > 1) {
    double ss = 0.0;
    for (double e : errors) ss += (e - r.mse) * (e - r.mse);
    const auto n = static_cast<double>(errors.size());
    r.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return r;
}

/// Runs `trials` trials through a bank of estimators sharing the same
/// channel and disturbance draws.
///
/// `bank(y_block, out)` must fill `out` (pre-sized to `outputs`) with the
/// vectorized estimates (m x k) for the observation block y (n x k).
template <typename Bank>
std::vector<McResult> monte_carlo_bank(const Scenario& scn, std::size_t outputs, Bank&& bank,
                                       std::uint64_t trials, std::uint64_t seed,
                                       unsigned threads = 1) {
  if (trials < 1) throw InvalidArgument("monte_carlo: trials must be >= 1");
  if (outputs < 1) throw InvalidArgument("monte_carlo: bank has no outputs");
  const std::uint64_t blocks = (trials + kTrialBlock - 1) / kTrialBlock;
  std::vector<std::vector<double>> errors(outputs, std::vector<double>(trials));

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      std::vector<ComplexMatrix> out(outputs);
      for (std::uint64_t blk = next++; blk < blocks; blk = next++) {
        const std::uint64_t first = blk * kTrialBlock;
        const auto count = static_cast<Index>(std::min<std::uint64_t>(kTrialBlock, trials - first));
        const TrialBlock tb = sample_trials(scn, seed, first, count);
        bank(tb.y, out);
        for (std::size_t o = 0; o < outputs; ++o) {
          if (out[o].rows() != tb.h.rows() || out[o].cols() != count) {
            throw InvalidArgument("monte_carlo: estimator returned a block of the wrong shape");
          }
          for (Index j = 0; j < count; ++j) {
            errors[o][first + static_cast<std::uint64_t>(j)] = (tb.h.col(j) - out[o].col(j)).squaredNorm();
          }
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = blocks;
    }
  };

  const unsigned n_threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(blocks)));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<McResult> results;
  results.reserve(outputs);
  for (const auto& e : errors) results.push_back(summarize_errors(e));
  return results;
}

/// Monte Carlo MSE of one estimator exposing `apply(y_block)`.
template <typename Estimator>
McResult monte_carlo_mse(const Scenario& scn, const Estimator& est, std::uint64_t trials,
                         std::uint64_t seed, unsigned threads = 1) {
  return monte_carlo_bank(
      scn, 1, [&](const ComplexMatrix& y, std::vector<ComplexMatrix>& out) { out[0] = est.apply(y); },
      trials, seed, threads)[0];
}

}  // namespace peach
