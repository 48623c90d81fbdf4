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
/// Experiment configuration and its JSON form. Keys are the snake_case field
/// names below; unknown keys are rejected.

#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "peach/error.hpp"
#include "peach/estimators.hpp"
#include "peach/linalg.hpp"
#include "peach/scenario.hpp"

namespace peach {

enum class Experiment { order_sweep, snr_sweep, adaptive_demo, bench, validate };

struct ExperimentConfig {
  // System
  Index nt = 10;
  Index nr = 100;
  Index b = 10;
  // Grids
  std::vector<double> gamma_db{5.0};
  std::vector<double> beta{0.0, 0.1};
  Index num_interferers = 2;
  // Exponential correlation coefficients (desired / interfering channels)
  double r_t = 0.5;
  double r_r = 0.7;
  double interferer_r_t = 0.5;
  double interferer_r_r = 0.7;
  // Estimators
  std::vector<std::string> estimators{"mmse", "mvu", "peach", "wpeach"};
  std::vector<Index> orders{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::string alpha_rule = "extreme_eig";
  // Monte Carlo (0 trials = analytic only)
  std::uint64_t trials = 0;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool timing = false;
  // Sliding-window weights
  Index window = 100;
  Index probes = 0;
  Index stream_length = 100;
  bool inject_exact_weights = false;
  // Complexity benchmark
  std::vector<Index> bench_sizes{64, 128, 256, 512};
  Index bench_nt = 4;
  Index bench_order = 8;
  Index bench_repeats = 7;
  double bench_gamma_db = 10.0;
  // Output
  std::string out;

  SystemDims dims() const { return {nt, nr, b}; }

  AlphaRule alpha_rule_enum() const {
    return alpha_rule == "trace" ? AlphaRule::trace : AlphaRule::extreme_eigenvalue;
  }

  bool wants(const std::string& estimator) const {
    return std::find(estimators.begin(), estimators.end(), estimator) != estimators.end();
  }

  ExponentialScenarioParams scenario_params(double gamma_db_value, double beta_value) const {
    ExponentialScenarioParams p;
    p.dims = dims();
    p.gamma_db = gamma_db_value;
    p.noise_var = 1.0;
    p.r_t = r_t;
    p.r_r = r_r;
    p.num_interferers = beta_value > 0.0 ? num_interferers : 0;
    p.beta = beta_value;
    p.interferer_r_t = interferer_r_t;
    p.interferer_r_r = interferer_r_r;
    return p;
  }

  void validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };
    if (nt < 1 || nr < 1 || b < 1) fail("nt, nr and b must be >= 1");
    if (gamma_db.empty()) fail("gamma_db grid must be non-empty");
    if (beta.empty()) fail("beta grid must be non-empty");
    for (double v : beta) {
      if (!(v >= 0.0 && v < 1.0)) fail("beta values must lie in [0, 1)");
    }
    if (num_interferers < 0) fail("num_interferers must be >= 0");
    for (double r : {r_t, r_r, interferer_r_t, interferer_r_r}) {
      if (!(std::abs(r) < 1.0)) fail("correlation coefficients must satisfy |r| < 1");
    }
    static const std::set<std::string> known{"mmse", "mvu", "peach", "wpeach"};
    if (estimators.empty()) fail("estimators list must be non-empty");
    for (const auto& e : estimators) {
      if (!known.count(e)) fail("unknown estimator '" + e + "'");
    }
    if (orders.empty()) fail("orders grid must be non-empty");
    for (Index l : orders) {
      if (l < 0) fail("orders must be >= 0");
    }
    if (!std::is_sorted(orders.begin(), orders.end())) fail("orders must be sorted ascending");
    if (alpha_rule != "extreme_eig" && alpha_rule != "trace") {
      fail("alpha_rule must be 'extreme_eig' or 'trace'");
    }
    if (threads < 1) fail("threads must be >= 1");
    if (window < 1) fail("window must be >= 1");
    if (probes < 0) fail("probes must be >= 0");
    if (stream_length < 1) fail("stream_length must be >= 1");
    if (bench_sizes.size() < 4) fail("bench_sizes needs at least 4 sizes");
    for (Index m : bench_sizes) {
      if (m < bench_nt || m % bench_nt != 0) fail("bench_sizes must be multiples of bench_nt");
    }
    if (bench_nt < 1 || bench_order < 1 || bench_repeats < 1) {
      fail("bench_nt, bench_order and bench_repeats must be >= 1");
    }
  }
};

/// Default setup for each experiment.
inline ExperimentConfig default_config(Experiment e) {
  ExperimentConfig c;
  switch (e) {
    case Experiment::order_sweep:
      break;
    case Experiment::snr_sweep:
      c.gamma_db = {0, 5, 10, 15, 20, 25, 30, 35, 40};
      c.orders = {10};
      break;
    case Experiment::adaptive_demo:
      c.gamma_db = {0, 5, 10, 15, 20};
      c.beta = {0.0};
      c.orders = {3};
      c.estimators = {"wpeach"};
      break;
    case Experiment::bench:
    case Experiment::validate:
      break;
  }
  return c;
}

namespace detail {

template <typename T>
void read_key(const nlohmann::json& j, const char* key, T& field) {
  if (!j.contains(key)) return;
  try {
    field = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: key '") + key + "' has the wrong type (" + e.what() + ")");
  }
}

}  // namespace detail

/// Parses a config document over the defaults in `base`.
inline ExperimentConfig parse_config(const nlohmann::json& j,
                                     ExperimentConfig base = ExperimentConfig{}) {
  if (!j.is_object()) throw ConfigError("config: top-level JSON value must be an object");
  static const std::set<std::string> keys{
      "nt", "nr", "b", "gamma_db", "beta", "num_interferers", "r_t", "r_r", "interferer_r_t",
      "interferer_r_r", "estimators", "orders", "alpha_rule", "trials", "seed", "threads",
      "timing", "window", "probes", "stream_length", "inject_exact_weights", "bench_sizes",
      "bench_nt", "bench_order", "bench_repeats", "bench_gamma_db", "out"};
  for (const auto& item : j.items()) {
    if (!keys.count(item.key())) throw ConfigError("config: unknown key '" + item.key() + "'");
  }
  ExperimentConfig c = std::move(base);
  using detail::read_key;
  read_key(j, "nt", c.nt);
  read_key(j, "nr", c.nr);
  read_key(j, "b", c.b);
  read_key(j, "gamma_db", c.gamma_db);
  read_key(j, "beta", c.beta);
  read_key(j, "num_interferers", c.num_interferers);
  read_key(j, "r_t", c.r_t);
  read_key(j, "r_r", c.r_r);
  read_key(j, "interferer_r_t", c.interferer_r_t);
  read_key(j, "interferer_r_r", c.interferer_r_r);
  read_key(j, "estimators", c.estimators);
  read_key(j, "orders", c.orders);
  read_key(j, "alpha_rule", c.alpha_rule);
  read_key(j, "trials", c.trials);
  read_key(j, "seed", c.seed);
  read_key(j, "threads", c.threads);
  read_key(j, "timing", c.timing);
  read_key(j, "window", c.window);
  read_key(j, "probes", c.probes);
  read_key(j, "stream_length", c.stream_length);
  read_key(j, "inject_exact_weights", c.inject_exact_weights);
  read_key(j, "bench_sizes", c.bench_sizes);
  read_key(j, "bench_nt", c.bench_nt);
  read_key(j, "bench_order", c.bench_order);
  read_key(j, "bench_repeats", c.bench_repeats);
  read_key(j, "bench_gamma_db", c.bench_gamma_db);
  read_key(j, "out", c.out);
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::string& path, ExperimentConfig base = ExperimentConfig{}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config: '" + path + "' is not valid JSON (" + e.what() + ")");
  }
  return parse_config(j, std::move(base));
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
  return {{"nt", c.nt},
          {"nr", c.nr},
          {"b", c.b},
          {"gamma_db", c.gamma_db},
          {"beta", c.beta},
          {"num_interferers", c.num_interferers},
          {"r_t", c.r_t},
          {"r_r", c.r_r},
          {"interferer_r_t", c.interferer_r_t},
          {"interferer_r_r", c.interferer_r_r},
          {"estimators", c.estimators},
          {"orders", c.orders},
          {"alpha_rule", c.alpha_rule},
          {"trials", c.trials},
          {"seed", c.seed},
          {"threads", c.threads},
          {"timing", c.timing},
          {"window", c.window},
          {"probes", c.probes},
          {"stream_length", c.stream_length},
          {"inject_exact_weights", c.inject_exact_weights},
          {"bench_sizes", c.bench_sizes},
          {"bench_nt", c.bench_nt},
          {"bench_order", c.bench_order},
          {"bench_repeats", c.bench_repeats},
          {"bench_gamma_db", c.bench_gamma_db},
          {"out", c.out}};
}

}  // namespace peach
