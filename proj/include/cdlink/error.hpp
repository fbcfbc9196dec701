/**
 * Copyright 2026 The cdlink Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace cdlink {

/// Failure category; the CLI maps each one to a process exit code.
enum class ErrorKind {
  config,  // invalid parameters or configuration (exit 2)
  data,    // malformed or inconsistent input data (exit 3)
  outage,  // SNR below every MODCOD threshold (exit 4)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class LinkOutage : public Error {
 public:
  explicit LinkOutage(const std::string& what) : Error(ErrorKind::outage, what) {}
};

/// Throws `e` again, as the same subclass, with a "[stage] " prefix on the message.
[[noreturn]] inline void rethrow_with_stage(const Error& e, const std::string& stage) {
  const std::string what = "[" + stage + "] " + e.what();
  switch (e.kind()) {
    case ErrorKind::config: throw ConfigError(what);
    case ErrorKind::data: throw DataError(what);
    case ErrorKind::outage: throw LinkOutage(what);
  }
  throw Error(e.kind(), what);
}

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return 2;
    case ErrorKind::data: return 3;
    case ErrorKind::outage: return 4;
  }
  return 1;
}

}  // namespace cdlink
