// Copyright 2026 The Primo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PRIMO_ERROR_HPP_
#define PRIMO_ERROR_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace primo {

enum class ErrorCode : int {
  kInvalidArgument = 1,
  kDegenerateBasis,
  kDivergence,
  kUndefinedSteering,
  kInsufficientData,
  kNonPhysicalFit,
  kDegenerateData,
  kIo,
  kParse,
};

const char* to_string(ErrorCode code);

// All library failures are reported as primo::Error. The C API maps the code
// onto primo_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised when integration produces a non-finite state.
class DivergenceError : public Error {
 public:
  DivergenceError(std::int64_t step, const std::string& what)
      : Error(ErrorCode::kDivergence,
              what + " (step " + std::to_string(step) + ")"),
        step_(step) {}

  std::int64_t step() const noexcept { return step_; }

 private:
  std::int64_t step_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorCode::kInvalidArgument, what);
}

}  // namespace primo

#endif  // PRIMO_ERROR_HPP_
