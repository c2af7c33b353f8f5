// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
#include "qcaflow/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "qcaflow/errors.hpp"

namespace qcaflow::io {

std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

Json to_json(const ComplexMatrix& m) {
  Json re = Json::array(), im = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json rr = Json::array(), ri = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ri.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im"))
    throw ConfigError("matrix JSON needs 're' and 'im' arrays");
  const Json& re = j.at("re");
  const Json& im = j.at("im");
  if (!re.is_array() || !im.is_array() || re.size() != im.size() || re.empty())
    throw ConfigError("matrix JSON: 're' and 'im' must be equal-sized nonempty arrays");
  const std::size_t rows = re.size(), cols = re.at(0).size();
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!re.at(i).is_array() || !im.at(i).is_array() || re.at(i).size() != cols ||
        im.at(i).size() != cols)
      throw ConfigError("matrix JSON: row " + std::to_string(i) + " has the wrong length");
    for (std::size_t k = 0; k < cols; ++k) {
      if (!re.at(i).at(k).is_number() || !im.at(i).at(k).is_number())
        throw ConfigError("matrix JSON: non-numeric entry at row " + std::to_string(i) +
                          ", column " + std::to_string(k));
      m(i, k) = cplx(re.at(i).at(k).get<double>(), im.at(i).at(k).get<double>());
    }
  }
  return m;
}

ComplexMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open matrix file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("matrix file '" + path + "': " + e.what());
  }
  return matrix_from_json(j);
}

Json to_json(const QubitQCAParams& p) {
  Json j{{"phi", p.phi}, {"theta", p.theta}, {"axis", {p.axis[0], p.axis[1], p.axis[2]}}};
  if (p.euler) j["euler"] = {p.euler->alpha1, p.euler->gamma, p.euler->alpha2};
  return j;
}

Json to_json(const Tolerances& t) {
  return Json{{"construction", t.construction},
              {"rank", t.rank},
              {"commutator", t.commutator},
              {"acceptance", t.acceptance}};
}

Json to_json(const TileProjection& t) {
  return Json{{"label", t.label},
              {"family", std::string(family_name(t.family))},
              {"rank", t.rank},
              {"matrix", to_json(t.matrix)}};
}

Json to_json(const RenormResult& r, bool include_matrix) {
  Json j{{"renormalizable", r.renormalizable},
         {"projection", r.projection.label},
         {"branch", r.branch},
         {"n_tiles", r.n_tiles},
         {"commutator_residual", r.commutator_residual},
         {"unitarity_residual", r.unitarity_residual},
         {"classification", std::string(classification_name(r.classification))}};
  if (r.classification == Classification::shift) j["shift_direction"] = r.shift_direction;
  if (r.fitted)
    j["fitted"] = {{"phi_prime", r.fitted->phi_prime},
                   {"theta_prime", r.fitted->theta_prime},
                   {"global_phase", r.fitted->global_phase},
                   {"fit_residual", r.fitted->residual}};
  if (r.diagnostics) j["diagnostics"] = {{"delta", r.diagnostics->delta}, {"chi", r.diagnostics->chi}};
  if (include_matrix && r.v_s) j["v_s"] = to_json(*r.v_s);
  j["tolerances"] = to_json(r.tolerances);
  return j;
}

Json to_json(const PointReport& r) {
  Json tiles = Json::array();
  for (const auto& t : r.tiles)
    tiles.push_back({{"label", t.label}, {"residual", t.residual}, {"passes", t.passes},
                     {"partial", t.partial}});
  return Json{{"params", to_json(r.params)}, {"cells", r.cells},
              {"predicate", r.predicate},     {"numeric", r.numeric},
              {"agrees", r.agrees()},         {"witnesses", r.witnesses},
              {"max_residual", r.max_residual}, {"tiles", std::move(tiles)}};
}

Json to_json(const ScanReport& r) {
  Json axes = Json::array();
  for (const auto& a : r.grid.axes) axes.push_back({a[0], a[1], a[2]});
  Json rows = Json::array();
  for (const auto& row : r.rows) rows.push_back(to_json(row));
  return Json{{"schema", kSchema},
              {"grid", {{"phi_steps", r.grid.phi_steps},
                        {"theta_steps", r.grid.theta_steps},
                        {"axes", std::move(axes)}}},
              {"cells", r.cells},
              {"tolerance", r.tolerance},
              {"points", r.rows.size()},
              {"disagreements", r.disagreements()},
              {"rows", std::move(rows)}};
}

Json to_json(const IndexResult& r) {
  return Json{{"value", r.value},       {"dim_L", r.dim_L}, {"dim_cell", r.dim_cell},
              {"lattice_size", r.lattice_size}, {"block", r.block}, {"tolerance", r.tolerance}};
}

Json to_json(const FlowState& s) {
  return Json{{"phi", s.phi.value()},
              {"theta", s.theta.value()},
              {"phi_exact", s.phi.exact() ? Json(s.phi.to_string()) : Json(nullptr)},
              {"theta_exact", s.theta.exact() ? Json(s.theta.to_string()) : Json(nullptr)},
              {"case", std::string(case_name(s.case_tag))},
              {"projection", s.projection.to_string()}};
}

Json to_json(const FlowTrajectory& t) {
  Json states = Json::array();
  for (const auto& s : t.states) states.push_back(to_json(s));
  Json j{{"terminated_by", std::string(termination_name(t.terminated_by))}};
  if (t.terminated_by == Termination::cycle) j["cycle_length"] = t.cycle_length;
  j["states"] = std::move(states);
  return j;
}

std::string scan_csv(const ScanReport& r) {
  std::ostringstream os;
  os << "phi,theta,nx,ny,nz,predicate,numeric,witness,max_residual\n";
  for (const auto& row : r.rows) {
    std::string w;
    for (std::size_t i = 0; i < row.witnesses.size(); ++i) w += (i ? ";" : "") + row.witnesses[i];
    os << format_double(row.params.phi) << ',' << format_double(row.params.theta) << ','
       << format_double(row.params.axis[0]) << ',' << format_double(row.params.axis[1]) << ','
       << format_double(row.params.axis[2]) << ',' << (row.predicate ? "true" : "false") << ','
       << (row.numeric ? "true" : "false") << ',' << w << ','
       << format_double(row.max_residual) << '\n';
  }
  return os.str();
}

std::string trajectory_csv(const FlowTrajectory& t) {
  std::ostringstream os;
  os << "step,phi,theta,case,projection\n";
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    const auto& s = t.states[i];
    os << i << ',' << format_double(s.phi.value()) << ',' << format_double(s.theta.value()) << ','
       << case_name(s.case_tag) << ',' << s.projection.to_string() << '\n';
  }
  return os.str();
}

}  // namespace qcaflow::io
