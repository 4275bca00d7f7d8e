// Copyright 2026 The mmbell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mmbell/bell.hpp"

namespace mmbell {

/// Outcome of one self-check group. detail carries either the covered range
/// or the first counterexample found.
struct VerifyGroupResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  /// Empty runs every group; otherwise the single group to run.
  std::string group_filter;
  /// Override for the region closed form, so tests can prove the check
  /// actually rejects a wrong implementation. Null uses the library routine.
  std::function<RegionPair(int, int)> regions_impl;
};

std::vector<std::string> verification_group_names();

/// Cross-validates the closed forms against brute-force and dense-state
/// routes. Throws std::domain_error for an unknown group filter.
std::vector<VerifyGroupResult> run_verification(const VerifyOptions& options = {});

}  // namespace mmbell
