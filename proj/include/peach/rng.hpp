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

#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace peach {

/// Purpose tag mixed into substream derivation so that channel, disturbance
/// and probe draws of the same trial never share a stream.
enum class StreamRole : std::uint64_t {
  channel = 0x43484e4cULL,
  disturbance = 0x44495354ULL,
  probe = 0x50524f42ULL,
  observation = 0x4f425356ULL,
  misc = 0x4d495343ULL,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Hash of (master seed, index, role) used to seed one substream.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index,
                                       StreamRole role) noexcept {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ index);
  h = mix64(h ^ static_cast<std::uint64_t>(role));
  return h;
}

/// Deterministic random stream producing standard complex Gaussian samples
/// (x + iy)/sqrt(2) with x, y ~ N(0, 1). Streams are never shared between
/// threads; derive one per trial instead.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  static RngStream derive(std::uint64_t master, std::uint64_t index, StreamRole role) {
    return RngStream(substream_seed(master, index, role));
  }

  double normal() { return normal_(engine_); }

  std::complex<double> complex_normal() {
    constexpr double kScale = 0.70710678118654752440;
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {re * kScale, im * kScale};
  }

  Eigen::VectorXcd complex_normal_vector(Eigen::Index dim) {
    Eigen::VectorXcd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = complex_normal();
    return v;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace peach
