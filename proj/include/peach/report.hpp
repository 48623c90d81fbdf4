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
/// Sweep and benchmark reports and their CSV form.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "peach/error.hpp"
#include "peach/linalg.hpp"

namespace peach {

/// One (estimator, L, gamma, beta) point. MSE values are normalized by
/// tr(R); nmse_mc and std_error are NaN when Monte Carlo was not run.
struct MseRow {
  std::string estimator;
  Index order = 0;
  double gamma_db = 0.0;
  double beta = 0.0;
  double nmse_analytic = std::numeric_limits<double>::quiet_NaN();
  double nmse_mc = std::numeric_limits<double>::quiet_NaN();
  double std_error = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t trials = 0;
  double walltime_ms = 0.0;
  std::uint64_t matvecs = 0;  ///< products with D or R P~^H per estimate

  auto key() const { return std::tie(estimator, order, gamma_db, beta); }
};

struct MseReport {
  std::vector<MseRow> rows;

  void sort() {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const MseRow& a, const MseRow& b) { return a.key() < b.key(); });
  }

  /// First row matching the key; throws if absent.
  const MseRow& find(const std::string& estimator, Index order, double gamma_db,
                     double beta) const {
    for (const auto& r : rows) {
      if (r.estimator == estimator && r.order == order && r.gamma_db == gamma_db && r.beta == beta) {
        return r;
      }
    }
    throw InvalidArgument("MseReport: no row for " + estimator + " L=" + std::to_string(order));
  }
};

inline constexpr const char* kMseCsvHeader =
    "estimator,L,gamma_db,beta,nmse_analytic,nmse_mc,stderr,trials,walltime_ms,matvecs";

/// %.10g, with "nan"/"inf" spelled portably.
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline double parse_real(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) throw InvalidArgument("csv: bad number '" + s + "'");
  return v;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline std::uint64_t parse_count(const std::string& s) {
  std::size_t pos = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty() || s.front() == '-') {
    throw InvalidArgument("csv: bad count '" + s + "'");
  }
  return v;
}

}  // namespace detail

inline void write_csv(std::ostream& os, const MseReport& report) {
  os << kMseCsvHeader << '\n';
  for (const auto& r : report.rows) {
    os << r.estimator << ',' << r.order << ',' << format_real(r.gamma_db) << ','
       << format_real(r.beta) << ',' << format_real(r.nmse_analytic) << ','
       << format_real(r.nmse_mc) << ',' << format_real(r.std_error) << ',' << r.trials << ','
       << format_real(r.walltime_ms) << ',' << r.matvecs << '\n';
  }
}

inline std::string to_csv(const MseReport& report) {
  std::ostringstream os;
  write_csv(os, report);
  return os.str();
}

inline MseReport read_mse_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kMseCsvHeader) {
    throw InvalidArgument("csv: missing or unexpected MSE header");
  }
  MseReport report;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 10) throw InvalidArgument("csv: expected 10 fields in '" + line + "'");
    MseRow r;
    r.estimator = f[0];
    r.order = static_cast<Index>(detail::parse_count(f[1]));
    r.gamma_db = parse_real(f[2]);
    r.beta = parse_real(f[3]);
    r.nmse_analytic = parse_real(f[4]);
    r.nmse_mc = parse_real(f[5]);
    r.std_error = parse_real(f[6]);
    r.trials = detail::parse_count(f[7]);
    r.walltime_ms = parse_real(f[8]);
    r.matvecs = detail::parse_count(f[9]);
    report.rows.push_back(std::move(r));
  }
  return report;
}

inline MseReport parse_mse_csv(const std::string& text) {
  std::istringstream is(text);
  return read_mse_csv(is);
}

/// Timing of one estimate path at one size.
struct BenchRow {
  std::string path;  ///< "mmse", "mvu", "peach_L", "peach_2L", "wpeach"
  Index order = 0;
  Index m = 0;
  double median_ms = 0.0;  ///< per estimate
  std::uint64_t matvecs = 0;
  std::uint64_t solves = 0;
  std::uint64_t factorizations = 0;
};

/// Least-squares fit of log(time) against log(M) for one path.
struct ScalingFit {
  std::string path;
  Index order = 0;
  double slope = 0.0;
  double r_squared = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<ScalingFit> fits;
  double setup_ms = 0.0;  ///< weight/factorization precomputation, reported separately

  const ScalingFit& fit(const std::string& path) const {
    for (const auto& f : fits) {
      if (f.path == path) return f;
    }
    throw InvalidArgument("BenchReport: no fit for path '" + path + "'");
  }
};

inline ScalingFit fit_loglog(const std::string& path, Index order, const std::vector<double>& x,
                             const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("fit_loglog: need at least two matching points");
  }
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  const double cxx = sxx - sx * sx / n;
  const double cxy = sxy - sx * sy / n;
  const double cyy = syy - sy * sy / n;
  ScalingFit f{path, order, cxy / cxx, 1.0};
  if (cyy > 0.0) f.r_squared = cxy * cxy / (cxx * cyy);
  return f;
}

inline void write_csv(std::ostream& os, const BenchReport& report) {
  os << "path,L,M,median_ms,matvecs,solves,factorizations\n";
  for (const auto& r : report.rows) {
    os << r.path << ',' << r.order << ',' << r.m << ',' << format_real(r.median_ms) << ','
       << r.matvecs << ',' << r.solves << ',' << r.factorizations << '\n';
  }
}

inline void write_fits_csv(std::ostream& os, const BenchReport& report) {
  os << "path,L,slope,r_squared\n";
  for (const auto& f : report.fits) {
    os << f.path << ',' << f.order << ',' << format_real(f.slope) << ','
       << format_real(f.r_squared) << '\n';
  }
}

/// Writes `text` to `path`, failing loudly.
inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw ConfigError("write to '" + path + "' failed");
}

}  // namespace peach
