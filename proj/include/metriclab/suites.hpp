// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "metriclab/json_io.hpp"

namespace metriclab::suites {

struct Failure {
  int trial = 0;
  io::json inputs;      // full reproduction inputs, inline
  double observed = 0;
  double bound = 0;
  double margin = 0;    // bound - observed
  std::string note;
};

struct SuiteReport {
  std::string suite;
  int trials = 0;
  uint64_t seed = 0;
  std::vector<Failure> failures;
  double worstMargin = 0;  // min over all checks of bound - observed
  double elapsedMs = 0;
  io::json extra;          // per-suite counters
};

using SuiteFn = SuiteReport (*)(int trials, uint64_t seed);

/// All runnable suites by CLI name.
const std::map<std::string, SuiteFn>& registry();

/// Runs one suite; throws UnknownSuite for unlisted names.
SuiteReport run_suite(const std::string& name, int trials, uint64_t seed);

io::json report_to_json(const SuiteReport& rep);

} // namespace metriclab::suites
