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

// Command-line front end: MSE sweeps, sliding-window demo, complexity
// benchmark and the invariant self-check.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "peach/peach.hpp"

namespace {

struct Overrides {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<unsigned> threads;
  bool timing = false;
};

peach::ExperimentConfig resolve(peach::Experiment e, const Overrides& o) {
  peach::ExperimentConfig cfg = peach::default_config(e);
  if (!o.config.empty()) cfg = peach::load_config(o.config, cfg);
  if (!o.out.empty()) cfg.out = o.out;
  if (o.seed) cfg.seed = *o.seed;
  if (o.trials) cfg.trials = *o.trials;
  if (o.threads) cfg.threads = *o.threads;
  if (o.timing) cfg.timing = true;
  cfg.validate();
  return cfg;
}

void emit(const peach::ExperimentConfig& cfg, const std::string& command, const std::string& csv) {
  if (cfg.out.empty()) {
    std::cout << csv;
    return;
  }
  peach::write_file(cfg.out, csv);
  nlohmann::json meta{{"command", command}, {"config", peach::to_json(cfg)}};
  peach::write_file(cfg.out + ".meta.json", meta.dump(2) + "\n");
  std::cerr << "wrote " << cfg.out << "\n";
}

int run_mse(peach::Experiment e, const std::string& command, const Overrides& o) {
  const auto cfg = resolve(e, o);
  peach::MseReport report;
  switch (e) {
    case peach::Experiment::order_sweep:
      report = peach::run_order_sweep(cfg);
      break;
    case peach::Experiment::snr_sweep:
      report = peach::run_snr_sweep(cfg);
      break;
    default:
      report = peach::run_adaptive_demo(cfg);
      break;
  }
  emit(cfg, command, peach::to_csv(report));
  return 0;
}

int run_bench(const Overrides& o) {
  const auto cfg = resolve(peach::Experiment::bench, o);
  const peach::BenchReport report = peach::run_complexity_bench(cfg);
  std::ostringstream rows;
  peach::write_csv(rows, report);
  std::ostringstream fits;
  peach::write_fits_csv(fits, report);
  emit(cfg, "bench", rows.str());
  if (!cfg.out.empty()) peach::write_file(cfg.out + ".fits.csv", fits.str());
  std::cerr << fits.str() << "peach_2L/peach time ratio at largest M: "
            << peach::format_real(peach::peach_doubling_ratio(report)) << "\n"
            << "setup (weights) total ms: " << peach::format_real(report.setup_ms) << "\n";
  return 0;
}

int run_validate(const Overrides& o) {
  const auto cfg = resolve(peach::Experiment::validate, o);
  int failed = 0;
  for (const auto& r : peach::run_validation(cfg)) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
    failed += r.passed ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial-expansion channel estimation experiments"};
  app.require_subcommand(1);
  Overrides o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON experiment config")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output CSV path (stdout if omitted)");
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--trials", o.trials, "Monte Carlo trials per point (0 = analytic only)");
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--timing", o.timing, "record wall times (makes output non-reproducible)");
  };
  auto* order = app.add_subcommand("sweep-order", "normalized MSE against polynomial order");
  auto* snr = app.add_subcommand("sweep-snr", "normalized MSE against pilot SNR");
  auto* demo = app.add_subcommand("adaptive-demo", "sliding-window weights against exact weights");
  auto* bench = app.add_subcommand("bench", "per-estimate cost against channel dimension");
  auto* validate = app.add_subcommand("validate", "run the invariant self-check");
  for (auto* sub : {order, snr, demo, bench, validate}) add_common(sub);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*order) return run_mse(peach::Experiment::order_sweep, "sweep-order", o);
    if (*snr) return run_mse(peach::Experiment::snr_sweep, "sweep-snr", o);
    if (*demo) return run_mse(peach::Experiment::adaptive_demo, "adaptive-demo", o);
    if (*bench) return run_bench(o);
    if (*validate) return run_validate(o);
  } catch (const peach::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
