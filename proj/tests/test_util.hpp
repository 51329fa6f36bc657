/* Copyright 2026 The delta-forge Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef DELTA_TESTS_TEST_UTIL_HPP
#define DELTA_TESTS_TEST_UTIL_HPP

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "delta/mfa/dsl.hpp"

namespace delta::testing {

inline std::string read_data(const std::string& name) {
  std::ifstream is(std::string(DELTA_DATA_DIR) + "/" + name);
  if (!is) throw std::runtime_error("missing test data " + name);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

inline mfa::Program load_program(const std::string& name) { return mfa::parse_program(read_data(name)); }

inline constexpr const char* kOneRed = R"(START start:
    NEXT entry

PULLER_RB entry:
    [R] end

END end
)";

}  // namespace delta::testing

#endif  // DELTA_TESTS_TEST_UTIL_HPP
