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


#ifndef PRIMO_TESTS_TESTING_HPP_
#define PRIMO_TESTS_TESTING_HPP_

#include <gtest/gtest.h>

#include "primo/error.hpp"

namespace primo::testing {

template <class F>
::testing::AssertionResult throws_code(F&& fn, ErrorCode want) {
  try {
    fn();
  } catch (const Error& e) {
    if (e.code() == want) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure()
           << "got " << to_string(e.code()) << ": " << e.what();
  }
  return ::testing::AssertionFailure() << "nothing thrown";
}

}  // namespace primo::testing

#endif  // PRIMO_TESTS_TESTING_HPP_
