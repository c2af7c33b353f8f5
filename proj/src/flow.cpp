// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
#include "qcaflow/flow.hpp"

#include <cmath>
#include <functional>

#include "qcaflow/errors.hpp"
#include "qcaflow/renorm.hpp"

namespace qcaflow {

std::string_view case_name(CaseTag c) {
  switch (c) {
    case CaseTag::diagonal: return "diagonal";
    case CaseTag::antidiagonal: return "antidiagonal";
    case CaseTag::local: return "local";
  }
  return "diagonal";
}

CaseTag parse_case(std::string_view s) {
  if (s == "diagonal") return CaseTag::diagonal;
  if (s == "antidiagonal") return CaseTag::antidiagonal;
  if (s == "local") return CaseTag::local;
  throw ConfigError("unknown case '" + std::string(s) + "' (diagonal, antidiagonal, local)");
}

std::string ProjectionLabel::to_string() const {
  switch (kind) {
    case Kind::Q1: return std::string("Q1_") + branch;
    case Kind::Q2: return "Q2";
    case Kind::I_otimes_c: return "IxC" + std::to_string(c) + branch;
    case Kind::c_otimes_I: return "C" + std::to_string(c) + "xI" + branch;
  }
  return "Q2";
}

ProjectionLabel ProjectionLabel::parse(std::string_view s) {
  ProjectionLabel l;
  if (s == "Q1" || s == "Q1_a") return l;
  if (s == "Q1_b") {
    l.branch = 'b';
    return l;
  }
  if (s == "Q2") {
    l.kind = Kind::Q2;
    l.branch = 0;
    return l;
  }
  // Reuse the tile parser for validation of the c families.
  const TileProjection t = tile_by_label(s);
  const std::string& canon = t.label;
  l.kind = canon[0] == 'I' ? Kind::I_otimes_c : Kind::c_otimes_I;
  l.c = (canon[0] == 'I' ? canon[3] : canon[1]) - '0';
  l.branch = canon.back();
  return l;
}

std::vector<ProjectionLabel> expand_branches(std::string_view family) {
  const std::string f(family);
  if (f == "Q1") return {ProjectionLabel::parse("Q1_a"), ProjectionLabel::parse("Q1_b")};
  if (f == "IxC0" || f == "IxC1" || f == "C0xI" || f == "C1xI")
    return {ProjectionLabel::parse(f + "+"), ProjectionLabel::parse(f + "-")};
  return {ProjectionLabel::parse(f)};
}

std::vector<ProjectionLabel> all_projection_labels() {
  std::vector<ProjectionLabel> out;
  for (const char* f : {"Q1", "Q2", "IxC0", "IxC1", "C0xI", "C1xI"})
    for (const auto& l : expand_branches(f)) out.push_back(l);
  return out;
}

FlowState FlowState::normalized() const {
  FlowState s = *this;
  s.phi = phi.normalized();
  s.theta = theta.normalized();
  return s;
}

bool same_state(const FlowState& a, const FlowState& b, double tol) {
  return a.case_tag == b.case_tag && a.projection == b.projection &&
         a.phi.equal_mod(b.phi, 2, tol) && a.theta.equal_mod(b.theta, 1, tol);
}

namespace {

using Kind = ProjectionLabel::Kind;

int sign_of(const ProjectionLabel& l) { return l.branch == '-' ? -1 : 1; }

std::pair<Angle, Angle> realized_map(const ProjectionLabel& l, CaseTag c, const Angle& phi,
                                     const Angle& theta) {
  if (c == CaseTag::antidiagonal) {
    switch (l.kind) {
      case Kind::Q1: return {phi * 2, -phi};
      case Kind::Q2: return {phi * -2, phi};
      default: return {Angle{}, phi * ((2 * l.c - 1) * sign_of(l))};
    }
  }
  switch (l.kind) {
    case Kind::Q1:
      if (l.branch == 'b') return {phi * 2, phi * -3 - theta * 4};
      return {phi * 2, phi + theta * 4};
    case Kind::Q2: return {phi * -2, phi};
    default: return {Angle{}, (theta + phi * l.c) * (2 * sign_of(l))};
  }
}

void check_case(const FlowState& s) {
  if (s.case_tag == CaseTag::local && !s.phi.equal_mod(Angle{}, 2, 1e-9))
    throw PreconditionError("local case requires phi = 0 mod 2pi");
  if (s.case_tag == CaseTag::antidiagonal &&
      !s.theta.equal_mod(Angle::pi_fraction(1, 2), 1, 1e-9))
    throw PreconditionError("antidiagonal case requires theta = pi/2 mod pi");
}

// Snap x (radians) to p/q pi with q <= 64 when within 1e-10.
Angle snap(double x) {
  const double r = x / kPi;
  for (std::int64_t q = 1; q <= 64; ++q) {
    const double p = std::round(r * static_cast<double>(q));
    if (std::abs(r * static_cast<double>(q) - p) < 1e-10 * static_cast<double>(q))
      return Angle::pi_fraction(static_cast<std::int64_t>(p), q);
  }
  return Angle::radians(x);
}

// Roots of a 2pi-periodic wrapped residual on (-pi, pi].
std::vector<double> wrapped_roots(const std::function<double(double)>& g, std::size_t res) {
  const std::size_t n = res * 16;
  std::vector<double> xs(n + 1), gs(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    xs[i] = -kPi + 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
    gs[i] = g(xs[i]);
  }
  std::vector<double> roots;
  auto push = [&](double x) {
    x = wrap_2pi(x);
    for (double r : roots)
      if (circle_distance(r, x, 2 * kPi) < 1e-9) return;
    roots.push_back(x);
  };
  for (std::size_t i = 0; i <= n; ++i)
    if (std::abs(gs[i]) < 1e-13) push(xs[i]);
  for (std::size_t i = 0; i < n; ++i) {
    double a = xs[i], b = xs[i + 1], ga = gs[i], gb = gs[i + 1];
    if (!(ga * gb < 0.0) || std::abs(gb - ga) > kPi) continue;  // no root, or a wrap jump
    for (int it = 0; it < 80; ++it) {
      const double m = 0.5 * (a + b), gm = g(m);
      if ((ga < 0.0) == (gm < 0.0)) {
        a = m;
        ga = gm;
      } else {
        b = m;
      }
    }
    push(0.5 * (a + b));
  }
  return roots;
}

}  // namespace

FlowState flow_step(const FlowState& s) {
  check_case(s);
  auto [phi2, theta2] = realized_map(s.projection, s.case_tag, s.phi, s.theta);
  FlowState out;
  out.phi = phi2.normalized();
  out.theta = theta2.normalized();
  out.projection = s.projection;
  out.case_tag = out.phi.equal_mod(Angle{}, 2, 1e-12) ? CaseTag::local : CaseTag::diagonal;
  return out;
}

std::string_view termination_name(Termination t) {
  switch (t) {
    case Termination::fixed_point: return "fixed_point";
    case Termination::cycle: return "cycle";
    case Termination::max_iterations: return "max_iterations";
  }
  return "max_iterations";
}

FlowTrajectory iterate(const FlowState& s, std::size_t max_iters) {
  if (max_iters < 1) throw PreconditionError("iterate needs max_iters >= 1");
  FlowTrajectory t;
  t.states.push_back(s.normalized());
  for (std::size_t it = 0; it < max_iters; ++it) {
    const FlowState next = flow_step(t.states.back());
    if (same_state(next, t.states.back())) {
      t.terminated_by = Termination::fixed_point;
      return t;
    }
    for (std::size_t j = 0; j + 1 < t.states.size(); ++j)
      if (same_state(next, t.states[j])) {
        t.terminated_by = Termination::cycle;
        t.cycle_length = t.states.size() - j;
        return t;
      }
    t.states.push_back(next);
  }
  t.terminated_by = Termination::max_iterations;
  return t;
}

std::vector<FlowState> find_fixed_points(const ProjectionLabel& label,
                                         std::size_t grid_resolution, CaseTag case_tag) {
  if (grid_resolution < 8) throw PreconditionError("grid_resolution must be >= 8");
  std::vector<FlowState> out;
  if (case_tag == CaseTag::antidiagonal) return out;
  auto map = [&](double phi, double theta) {
    return realized_map(label, CaseTag::diagonal, Angle::radians(phi), Angle::radians(theta));
  };
  const auto phi_roots = wrapped_roots(
      [&](double phi) { return wrap_2pi(map(phi, 0.0).first.value() - phi); }, grid_resolution);
  for (double phi : phi_roots) {
    const Angle phi_s = snap(phi);
    if (case_tag == CaseTag::local && !phi_s.equal_mod(Angle{}, 2, 1e-9)) continue;
    std::vector<Angle> thetas;
    for (double shift : {0.0, kPi}) {
      const auto roots = wrapped_roots(
          [&](double th) {
            return wrap_2pi(map(phi_s.value(), th).second.value() - th - shift);
          },
          grid_resolution);
      for (double th : roots) {
        const Angle a = snap(th);
        bool dup = false;
        for (const auto& b : thetas) dup = dup || a.equal_mod(b, 1, 1e-9);
        if (!dup) thetas.push_back(a);
      }
    }
    for (const auto& th : thetas) {
      FlowState s;
      s.phi = phi_s.normalized();
      s.theta = th.normalized();
      s.projection = label;
      s.case_tag = s.phi.equal_mod(Angle{}, 2, 1e-12) ? CaseTag::local : CaseTag::diagonal;
      out.push_back(s);
    }
  }
  return out;
}

QubitQCAParams params_for_state(const FlowState& s) {
  switch (s.case_tag) {
    case CaseTag::antidiagonal:
      return QubitQCAParams::from_axis(s.phi.value(), kPi / 2, {1, 0, 0});
    case CaseTag::local:
      return QubitQCAParams::from_axis(0.0, s.theta.value(), {0, 0, 1});
    case CaseTag::diagonal:
    default:
      return QubitQCAParams::from_axis(s.phi.value(), s.theta.value(), {0, 0, 1});
  }
}

double cross_validate(const FlowState& s, std::size_t f) {
  check_case(s);
  const QubitQCAParams p = params_for_state(s);
  if (!closed_form_renormalizable(p))
    throw PreconditionError("cross_validate: state is not renormalizable");
  const RenormResult r = renormalize_qubit(p, tile_by_label(s.projection.to_string()), f);
  if (!r.renormalizable || !r.fitted)
    throw NumericalInstability("cross_validate: pipeline produced no diagonal fit (commutator " +
                               std::to_string(r.commutator_residual) + ")");
  const FlowState e = flow_step(s);
  return std::max(circle_distance(r.fitted->phi_prime, e.phi.value(), 2 * kPi),
                  circle_distance(r.fitted->theta_prime, e.theta.value(), kPi));
}

std::vector<std::pair<Angle, Angle>> published_entries(const FlowState& s) {
  const Angle& phi = s.phi;
  const Angle& th = s.theta;
  const ProjectionLabel& l = s.projection;
  if (s.case_tag == CaseTag::local) return {};
  if (s.case_tag == CaseTag::antidiagonal) {
    switch (l.kind) {
      case Kind::Q1: return {{phi * 2, -phi}};
      case Kind::Q2: return {{phi * -2, phi}};
      default: {
        const Angle v = phi * (2 * l.c - 1);
        return {{Angle{}, -v}, {Angle{}, v}};
      }
    }
  }
  switch (l.kind) {
    case Kind::Q1: return {{phi * 2, phi - th * 4}, {phi * 2, th * 4 - phi * 3}};
    case Kind::Q2: return {{phi * -2, phi}};
    default: {
      const Angle v = (th + phi * (l.c == 0 ? 1 : 0)) * 2;
      return {{Angle{}, v}, {Angle{}, -v}};
    }
  }
}

}  // namespace qcaflow
