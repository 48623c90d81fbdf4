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

#include <functional>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace peach {

/// Bad input shape or out-of-domain parameter.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Matrix or problem size beyond the configured limit.
class DimensionError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Factorization, eigensolve or linear-system failure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation invoked in the wrong lifecycle state (e.g. an unfilled window).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-fatal diagnostics (e.g. a divergent PEACH scaling). Routed through a
// replaceable sink so tests and the CLI can capture them.
namespace detail {

struct WarningSink {
  std::mutex mutex;
  std::function<void(std::string_view)> handler = [](std::string_view msg) {
    std::clog << "peach: warning: " << msg << '\n';
  };
};

inline WarningSink& warning_sink() {
  static WarningSink sink;
  return sink;
}

}  // namespace detail

/// Installs a warning handler and returns the previous one.
inline std::function<void(std::string_view)> set_warning_handler(
    std::function<void(std::string_view)> handler) {
  auto& sink = detail::warning_sink();
  std::lock_guard lock(sink.mutex);
  return std::exchange(sink.handler, std::move(handler));
}

inline void warn(std::string_view message) {
  auto& sink = detail::warning_sink();
  std::lock_guard lock(sink.mutex);
  if (sink.handler) sink.handler(message);
}

}  // namespace peach
