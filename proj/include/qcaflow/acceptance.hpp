// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// The reproduction suite behind `qcaflow reproduce` and the acceptance
// test binary. Each criterion yields one record; the shared 24x24x3 grid
// is evaluated once and reused.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace qcaflow {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string measured;
  std::string expected;
  double tolerance = 0.0;
  std::vector<std::string> details;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  // Replaces every upper-bound tolerance (used to force the failure path).
  std::optional<double> tol_override;
  std::size_t workers = 1;
  // Empty runs all of 1..10.
  std::vector<int> only;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

// One line per criterion: "[PASS] 4 predicate-equivalence  measured=... ".
std::string format_line(const CriterionResult& r);
std::string format_table(const std::vector<CriterionResult>& rs, bool with_details);
nlohmann::ordered_json acceptance_json(const std::vector<CriterionResult>& rs);

}  // namespace qcaflow
