// Copyright 2026 The Zigzag Authors
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

#pragma once

// Built-in check batteries behind `zigzag verify <suite>`. Sizes and seeds are
// pinned so a suite's JSON summary is reproducible.

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace zigzag {

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string relation;  // how measured is compared to threshold: "<", "<=", ">", ">=", "=="
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckResult> checks;
  double seconds = 0.0;
  bool pass() const;
};

// algebra, dynamics, equivariance, nonrel, variations, manybody.
const std::vector<std::string>& suite_names();

// Runs one suite, or every suite for "all". Unknown names throw
// Error(kInvalid, "suite", ...).
std::vector<SuiteResult> run_verify(const std::string& suite, int workers = 1);

// {"pass": ..., "suites": [{"suite", "pass", "checks": [...]}]}. Timing is
// left out so the summary is byte-stable.
nlohmann::json verify_json(const std::vector<SuiteResult>& results);

}  // namespace zigzag
