// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Closed-form renormalization flow (phi, theta) -> (phi', theta') for qubit
// automata, its iteration, fixed points, and a numeric cross-check.
//
// The map implemented here is the one the numeric pipeline realizes with
// U = exp(-i theta n.sigma) on both scales. The literal tabulated entries
// are available separately through published_entries().
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qcaflow/angle.hpp"
#include "qcaflow/model.hpp"

namespace qcaflow {

enum class CaseTag { diagonal, antidiagonal, local };
std::string_view case_name(CaseTag c);
CaseTag parse_case(std::string_view s);

struct ProjectionLabel {
  enum class Kind { Q1, Q2, I_otimes_c, c_otimes_I };
  Kind kind = Kind::Q1;
  int c = 0;          // the fixed cell value for I_otimes_c / c_otimes_I
  char branch = 'a';  // Q1: 'a' or 'b'; the c families: '+' or '-'; Q2: 0

  // "Q1_a", "Q1_b", "Q2", "IxC0+", "C1xI-"; matches tile_by_label.
  std::string to_string() const;
  static ProjectionLabel parse(std::string_view s);
  bool operator==(const ProjectionLabel&) const = default;
};

// Every label with its branch filled in; `Q1` alone gives both Q1 branches.
std::vector<ProjectionLabel> expand_branches(std::string_view family);
std::vector<ProjectionLabel> all_projection_labels();

struct FlowState {
  Angle phi;
  Angle theta;
  CaseTag case_tag = CaseTag::diagonal;
  ProjectionLabel projection;
  // (-pi, pi] representatives.
  FlowState normalized() const;
};

// phi mod 2pi and theta mod pi, plus identical tags.
bool same_state(const FlowState& a, const FlowState& b, double tol = 1e-9);

FlowState flow_step(const FlowState& s);

enum class Termination { fixed_point, cycle, max_iterations };
std::string_view termination_name(Termination t);

struct FlowTrajectory {
  std::vector<FlowState> states;
  Termination terminated_by = Termination::max_iterations;
  std::size_t cycle_length = 0;
};
FlowTrajectory iterate(const FlowState& s, std::size_t max_iters);

// Sign change plus bisection on the wrapped residual, phi first (phi'
// depends on phi only), then theta. Roots snap to p/q pi with q <= 64.
// The antidiagonal case has no fixed points: its image is diagonal-type.
std::vector<FlowState> find_fixed_points(const ProjectionLabel& label,
                                         std::size_t grid_resolution,
                                         CaseTag case_tag = CaseTag::diagonal);

// Parameters on the fine scale that realize a state: axis z for the
// diagonal and local cases, axis x with theta = pi/2 for the antidiagonal.
QubitQCAParams params_for_state(const FlowState& s);

// Max over (phi' mod 2pi, theta' mod pi) of |numeric - closed form|.
double cross_validate(const FlowState& s, std::size_t f);

// Literal tabulated candidates for (phi', theta'); empty for the local case.
std::vector<std::pair<Angle, Angle>> published_entries(const FlowState& s);

}  // namespace qcaflow
