// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// qcaflow: renormalizability checks, coarse-grained rules, grid scans,
// flow iteration and index computation for qubit cellular automata.
//
// Exit codes: 0 ok, 1 analysis-negative, 2 configuration error,
// 3 numerical instability or an internal inconsistency.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qcaflow/acceptance.hpp"
#include "qcaflow/angle.hpp"
#include "qcaflow/errors.hpp"
#include "qcaflow/flow.hpp"
#include "qcaflow/io.hpp"
#include "qcaflow/kernels.hpp"
#include "qcaflow/renorm.hpp"
#include "qcaflow/scan.hpp"
#include "qcaflow/support.hpp"

namespace {

using namespace qcaflow;
using io::Json;

constexpr int kOk = 0, kNegative = 1, kConfig = 2, kNumeric = 3;

struct Options {
  std::string phi = "0", theta = "0";
  std::string axis = "0,0,1";
  std::string euler;
  std::size_t cells = 0;  // 0: command default
  std::size_t tiles = 4;
  std::string proj = "Q1";
  std::string branch;
  double tol = kDefaultTol;
  bool tol_set = false;
  std::string out;
  std::string format = "json";
  std::string generator = "qubit";
  std::size_t phi_steps = 24, theta_steps = 24;
  std::vector<std::string> axes;
  std::size_t max_iters = 16;
  bool cross = false;
  std::string case_tag;
  std::size_t probe = 0;
  std::uint64_t seed = 1;
  bool json = false;
  std::size_t block = 1;
  std::size_t workers = 0;
};

std::vector<double> split_doubles(const std::string& s, std::size_t want, const char* what) {
  std::vector<double> v;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(tok, &used));
      if (used != tok.size() && tok.find_first_not_of(' ', used) != std::string::npos)
        throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError(std::string(what) + ": cannot parse '" + tok + "' as a number");
    }
  }
  if (v.size() != want)
    throw ConfigError(std::string(what) + ": expected " + std::to_string(want) +
                      " comma-separated values, got '" + s + "'");
  return v;
}

std::array<double, 3> parse_axis(const std::string& s) {
  const auto v = split_doubles(s, 3, "--axis");
  return {v[0], v[1], v[2]};
}

QubitQCAParams params_of(const Options& o) {
  const double phi = Angle::parse(o.phi).value();
  if (!o.euler.empty()) {
    const auto e = split_doubles(o.euler, 3, "--euler");
    return QubitQCAParams::from_euler(phi, EulerAngles{e[0], e[1], e[2]});
  }
  return QubitQCAParams::from_axis(phi, Angle::parse(o.theta).value(), parse_axis(o.axis));
}

std::size_t cells_of(const Options& o, std::size_t dflt) {
  const std::size_t n = o.cells ? o.cells : dflt;
  if (n % 2 != 0 || n < 6 || n > kMaxQubits)
    throw ConfigError("--cells must be even and between 6 and " + std::to_string(kMaxQubits) +
                      ", got " + std::to_string(n));
  return n;
}

// "Q1" + branch "b" -> "Q1_b"; "IxC0" + "-" -> "IxC0-".
std::string with_branch(std::string label, const std::string& branch) {
  if (branch.empty()) return label;
  if (label == "Q1") return "Q1_" + branch;
  if (label.size() == 4 && (label.rfind("IxC", 0) == 0 || label.find("xI") == 2))
    return label + branch;
  throw ConfigError("--branch does not apply to projection '" + label + "'");
}

TileProjection resolve_tile(const Options& o, const std::optional<QubitQCAParams>& p) {
  if (o.proj.rfind("file:", 0) == 0)
    return TileProjection::from_matrix(io::read_matrix_file(o.proj.substr(5)), "file");
  const std::string label = with_branch(o.proj, o.branch);
  if (label.rfind("eig:", 0) == 0) {
    if (!p) throw ConfigError("eigenbasis projections need qubit parameters");
    const auto [e0, e1] = local_eigenbasis(*p);
    return tile_by_label(label.substr(4), e0, e1, TileFamily::eigenbasis, "eig:");
  }
  return tile_by_label(label);
}

StepUnitary resolve_generator(const Options& o, std::size_t cells) {
  const WrappedLattice lat{cells, 2};
  const std::string& g = o.generator;
  if (g == "qubit") return build_step_unitary(params_of(o), lat);
  if (g == "identity") return build_identity(lat);
  if (g.rfind("shift:", 0) == 0) {
    long k = 0;
    try {
      k = std::stol(g.substr(6));
    } catch (const std::exception&) {
      throw ConfigError("--generator shift:k needs an integer k, got '" + g + "'");
    }
    return build_shift(lat, k);
  }
  if (g.rfind("file:", 0) == 0) {
    ComplexMatrix m = io::read_matrix_file(g.substr(5));
    if (m.rows() != lat.dim() || m.cols() != lat.dim())
      throw ConfigError("generator matrix is " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()) + ", expected " + std::to_string(lat.dim()) +
                        " for " + std::to_string(cells) + " cells");
    if (!m.is_unitary(1e-10)) throw ConfigError("generator matrix is not unitary");
    return StepUnitary{lat, std::move(m), std::nullopt, "file"};
  }
  throw ConfigError("unknown generator '" + g + "' (qubit, identity, shift:k, file:<path>)");
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw ConfigError("cannot write '" + o.out + "'");
  f << text;
}

void emit_json(const Options& o, const Json& j) { emit(o, j.dump(2) + "\n"); }

void require_json(const Options& o, const char* cmd) {
  if (o.format != "json")
    throw ConfigError(std::string(cmd) + " only supports --format json");
}

Tolerances tolerances_of(const Options& o) {
  Tolerances t;
  if (o.tol_set) t.commutator = o.tol;
  return t;
}

// Case of the qubit parameters, when the closed form applies.
std::optional<CaseTag> case_of(const QubitQCAParams& p) {
  if (circle_distance(p.phi, 0.0, 2 * kPi) < 1e-9) return CaseTag::local;
  if (std::abs(p.axis[0]) < 1e-12 && std::abs(p.axis[1]) < 1e-12) return CaseTag::diagonal;
  if (std::abs(p.axis[2]) < 1e-12 && circle_distance(p.theta, kPi / 2, kPi) < 1e-9)
    return CaseTag::antidiagonal;
  return std::nullopt;
}

int cmd_check(const Options& o) {
  require_json(o, "check");
  const QubitQCAParams p = params_of(o);
  const PointReport r = evaluate_point(p, cells_of(o, 8), o.tol);
  Json j = io::to_json(r);
  j["renormalizable"] = r.numeric;
  emit_json(o, j);
  if (!r.agrees()) {
    std::cerr << "qcaflow: numeric verdict " << r.numeric << " disagrees with the closed-form "
              << "predicate " << r.predicate << "\n";
    return kNumeric;
  }
  return kOk;
}

int cmd_renorm(const Options& o) {
  require_json(o, "renorm");
  const Tolerances tol = tolerances_of(o);
  Json j{{"schema", io::kSchema}};
  if (o.generator != "qubit") {
    const std::size_t cells = o.cells ? cells_of(o, 8) : 2 * o.tiles;
    const StepUnitary step = resolve_generator(o, cells);
    const TileProjection tile = resolve_tile(o, std::nullopt);
    const RenormResult r = renormalize(step, tile, 2, tol);
    j["generator"] = step.label;
    j["result"] = io::to_json(r);
    emit_json(o, j);
    return r.renormalizable ? kOk : kNegative;
  }
  const QubitQCAParams p = params_of(o);
  const TileProjection tile = resolve_tile(o, p);
  if (o.tiles < 3 || 2 * o.tiles > kMaxQubits)
    throw ConfigError("--tiles must be between 3 and " + std::to_string(kMaxQubits / 2));
  const RenormResult r = renormalize_qubit(p, tile, o.tiles, tol);
  j["params"] = io::to_json(p);
  j["result"] = io::to_json(r);
  j["predicate"] = closed_form_renormalizable(p, tol.commutator);

  Json flags = Json::array();
  const auto ct = case_of(p);
  // The closed form covers computational tiles, and eigenbasis tiles at phi = 0.
  std::optional<ProjectionLabel> label;
  const bool eig = tile.label.rfind("eig:", 0) == 0;
  if (ct && tile.label != "file" && (!eig || *ct == CaseTag::local))
    label = ProjectionLabel::parse(eig ? tile.label.substr(4) : tile.label);
  if (ct && label) {
    FlowState s{Angle::parse(o.phi), Angle::parse(o.theta), *ct, *label};
    if (*ct == CaseTag::local) s.phi = Angle{};
    const FlowState e = flow_step(s);
    Json closed{{"case", std::string(case_name(*ct))},
                {"phi_prime", e.phi.value()},
                {"theta_prime", e.theta.value()},
                {"phi_prime_exact", e.phi.exact() ? Json(e.phi.to_string()) : Json(nullptr)},
                {"theta_prime_exact", e.theta.exact() ? Json(e.theta.to_string()) : Json(nullptr)}};
    Json listed = Json::array();
    for (const auto& [a, b] : published_entries(s))
      listed.push_back({{"phi_prime", a.value()}, {"theta_prime", b.value()}});
    closed["listed_entries"] = std::move(listed);
    if (r.fitted) {
      closed["deviation"] =
          std::max(circle_distance(r.fitted->phi_prime, e.phi.value(), 2 * kPi),
                   circle_distance(r.fitted->theta_prime, e.theta.value(), kPi));
    }
    j["closed_form"] = std::move(closed);
  }
  if (r.fitted && r.classification != Classification::non_diagonal_unclassified &&
      circle_distance(r.fitted->phi_prime, p.phi, 2 * kPi) < tol.acceptance &&
      circle_distance(r.fitted->theta_prime, p.theta, kPi) < tol.acceptance)
    flags.push_back("FIXED-POINT");
  j["flags"] = std::move(flags);

  if (o.probe > 0) {
    std::mt19937_64 rng(o.seed);
    const QubitCircuit w2(p, 2 * o.tiles, 2);
    std::size_t passing = 0;
    double min_res = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < o.probe; ++k) {
      const CommutationResult c =
          commutation_check(w2, random_tile_projection(rng), o.tiles, tol.commutator);
      passing += c.passes;
      min_res = std::min(min_res, c.residual);
    }
    j["random_probes"] = {{"count", o.probe}, {"seed", o.seed}, {"passing", passing},
                          {"min_residual", min_res}};
  }
  if (!r.renormalizable) {
    // Structured refusal: per-tile residuals for the enumerated family.
    const PointReport pr = evaluate_point(p, 2 * o.tiles, tol.commutator);
    Json tiles = Json::array();
    for (const auto& t : pr.tiles) tiles.push_back({{"label", t.label}, {"residual", t.residual}});
    j["refusal"] = {{"reason", "projection does not commute with two steps"},
                    {"tile_residuals", std::move(tiles)}};
  }
  emit_json(o, j);
  return r.renormalizable ? kOk : kNegative;
}

int cmd_scan(const Options& o) {
  if (o.format != "json" && o.format != "csv") throw ConfigError("--format must be json or csv");
  if (o.phi_steps < 2 || o.theta_steps < 2)
    throw ConfigError("--phi-steps and --theta-steps must be at least 2");
  ScanGrid g{o.phi_steps, o.theta_steps, {}};
  if (o.axes.empty()) {
    g.axes = {{0, 0, 1}, {1, 0, 0}, {1, 1, 1}};
  } else {
    for (const auto& a : o.axes) {
      std::stringstream ss(a);
      for (std::string tok; std::getline(ss, tok, ';');) g.axes.push_back(parse_axis(tok));
    }
  }
  const std::size_t workers = o.workers ? o.workers : default_workers();
  const ScanReport rep = run_scan(g, cells_of(o, 8), o.tol, workers);
  emit(o, o.format == "csv" ? io::scan_csv(rep) : io::to_json(rep).dump(2) + "\n");
  if (rep.disagreements() != 0) {
    std::cerr << "qcaflow: " << rep.disagreements()
              << " predicate/numeric disagreements\n";
    return kNumeric;
  }
  return kOk;
}

int cmd_flow(const Options& o) {
  if (o.format != "json" && o.format != "csv") throw ConfigError("--format must be json or csv");
  FlowState s;
  s.phi = Angle::parse(o.phi);
  s.theta = Angle::parse(o.theta);
  s.projection = ProjectionLabel::parse(with_branch(o.proj, o.branch));
  if (!o.case_tag.empty())
    s.case_tag = parse_case(o.case_tag);
  else
    s.case_tag = s.phi.equal_mod(Angle{}, 2, 1e-12) ? CaseTag::local : CaseTag::diagonal;
  if (!closed_form_renormalizable(params_for_state(s)))
    throw PreconditionError("start state is not renormalizable");
  if (o.max_iters < 1) throw ConfigError("--max-iters must be at least 1");
  const FlowTrajectory t = iterate(s, o.max_iters);
  if (o.format == "csv") {
    emit(o, io::trajectory_csv(t));
    return kOk;
  }
  Json j{{"schema", io::kSchema}};
  j["trajectory"] = io::to_json(t);
  if (o.cross) {
    Json cv = Json::array();
    for (const auto& st : t.states) cv.push_back(cross_validate(st, o.tiles));
    j["cross_validation"] = std::move(cv);
  }
  emit_json(o, j);
  return kOk;
}

int cmd_index(const Options& o) {
  require_json(o, "index");
  const std::size_t dflt = std::max<std::size_t>(6, 4 * o.block);
  const std::size_t cells = o.cells ? o.cells : dflt;
  if (cells > kMaxQubits) throw ConfigError("--cells exceeds " + std::to_string(kMaxQubits));
  const StepUnitary step = resolve_generator(o, cells);
  const IndexResult r = qca_index(step, o.block, o.tol);
  Json j{{"schema", io::kSchema}, {"generator", step.label}};
  j["index"] = io::to_json(r);
  const bool unit = r.dim_L == r.dim_cell;
  j["margolus_realizable"] = unit;
  if (step.params) {
    const auto [l1, l2] = margolus_layers(*step.params, step.lattice);
    j["margolus_residual"] = frobenius_distance(l2.matrix * l1.matrix, step.matrix);
  }
  emit_json(o, j);
  return kOk;
}

int cmd_reproduce(const Options& o) {
  AcceptanceOptions ao;
  if (o.tol_set) ao.tol_override = o.tol;
  ao.workers = o.workers ? o.workers : default_workers();
  const auto rs = run_acceptance(ao);
  if (o.json)
    emit_json(o, acceptance_json(rs));
  else
    emit(o, format_table(rs, false));
  for (const auto& r : rs)
    if (!r.pass) return kNegative;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcaflow: coarse-graining and renormalization flow of qubit cellular automata"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key=value file mirroring the long flags (quote values with spaces)");
  app.footer(
      "Angles accept radians or rational multiples of pi: 0.37, pi, 2/3 pi, pi/4, 3pi/4.\n"
      "Exit codes: 0 ok, 1 negative result, 2 configuration error, 3 numerical problem.\n"
      "QCAFLOW_WORKERS sets the scan worker count; QCAFLOW_ISA=scalar disables AVX2.");
  Options o;
  app.add_option("--phi", o.phi, "Controlled-phase angle");
  app.add_option("--theta", o.theta, "Rotation angle of U = exp(-i theta n.sigma)");
  app.add_option("--axis", o.axis, "Rotation axis x,y,z (normalized)");
  app.add_option("--euler", o.euler, "U from Euler angles a1,g,a2 (overrides --theta/--axis)");
  app.add_option("--cells", o.cells, "Ring size (even, 6..14)");
  app.add_option("--tiles", o.tiles, "Number of size-2 tiles for renorm and flow checks");
  app.add_option("--proj", o.proj,
                 "Tile projection: Q1, Q1_a, Q1_b, Q2, IxC0, IxC1, C0xI, C1xI, eig:<label>, "
                 "file:<path>");
  app.add_option("--branch", o.branch, "Branch suffix: a/b for Q1, +/- for the c families");
  app.add_option("--tol", o.tol, "Commutator tolerance; for reproduce, overrides every bound")
      ->each([&](const std::string&) { o.tol_set = true; });
  app.add_option("--out", o.out, "Write the report to a file instead of stdout");
  app.add_option("--format", o.format, "json or csv (scan, flow)");
  app.add_option("--generator", o.generator, "qubit, identity, shift:k or file:<path>");
  app.add_option("--phi-steps", o.phi_steps, "Scan grid size in phi");
  app.add_option("--theta-steps", o.theta_steps, "Scan grid size in theta");
  app.add_option("--axes", o.axes, "Scan axes, ';'-separated x,y,z triples");
  app.add_option("--max-iters", o.max_iters, "Flow iteration limit");
  app.add_flag("--cross-validate", o.cross, "Add the numeric cross-check per flow step");
  app.add_option("--case", o.case_tag, "Flow case: diagonal, antidiagonal or local");
  app.add_option("--probe-random", o.probe, "Also test K Haar-random tile projections");
  app.add_option("--seed", o.seed, "Seed for --probe-random");
  app.add_flag("--json", o.json, "Machine-readable reproduce summary");
  app.add_option("--block", o.block, "Cells per block for the index (2 for radius-2 steps)");
  app.add_option("--workers", o.workers, "Worker threads (default QCAFLOW_WORKERS or all cores)");

  struct Cmd {
    const char* name;
    const char* help;
    int (*run)(const Options&);
  };
  const Cmd cmds[] = {
      {"check", "Renormalizability verdict, witnesses and predicate agreement", cmd_check},
      {"renorm", "Coarse-grained rule for one tile projection", cmd_renorm},
      {"scan", "Grid scan of the predicate against the numeric verdict", cmd_scan},
      {"flow", "Iterate the closed-form flow map", cmd_flow},
      {"index", "Index of a step and its Margolus realizability", cmd_index},
      {"reproduce", "Run the full reproduction suite", cmd_reproduce}};
  std::vector<CLI::App*> subs;
  for (const auto& c : cmds) subs.push_back(app.add_subcommand(c.name, c.help)->fallthrough());

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }
  try {
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (subs[i]->parsed()) return cmds[i].run(o);
  } catch (const ConfigError& e) {
    std::cerr << "qcaflow: configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const PreconditionError& e) {
    std::cerr << "qcaflow: invalid input: " << e.what() << "\n";
    return kConfig;
  } catch (const DimensionError& e) {
    std::cerr << "qcaflow: invalid input: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "qcaflow: numerical error: " << e.what() << "\n";
    return kNumeric;
  }
  return kConfig;
}
