// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <clocale>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "qcaflow/angle.hpp"
#include "qcaflow/errors.hpp"
#include "qcaflow/io.hpp"

using namespace qcaflow;

namespace {

std::string temp_path(const char* name) {
  return std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/qcaflow_" + name;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("matrix JSON round trip is exact") {
  std::mt19937_64 rng(61);
  const ComplexMatrix m = oracle::to(oracle::random_matrix(3, 5, rng));
  const io::Json j = io::to_json(m);
  CHECK(j.contains("re"));
  CHECK(j["im"].size() == 3);
  const ComplexMatrix back = io::matrix_from_json(io::Json::parse(j.dump()));
  CHECK(frobenius_distance(back, m) == 0.0);
}

TEST_CASE("matrix JSON errors") {
  CHECK_THROWS_AS(io::matrix_from_json(io::Json::parse(R"({"re": [[1]]})")), ConfigError);
  CHECK_THROWS_AS(io::matrix_from_json(io::Json::parse(R"({"re": [[1, 2]], "im": [[0]]})")), ConfigError);
  CHECK_THROWS_AS(io::matrix_from_json(io::Json::parse(R"({"re": [["a"]], "im": [[0]]})")), ConfigError);
  CHECK_THROWS_AS(io::read_matrix_file("/nonexistent/qcaflow.json"), ConfigError);
  const std::string p = temp_path("bad.json");
  std::ofstream(p) << "{ not json";
  CHECK_THROWS_AS(io::read_matrix_file(p), ConfigError);
  std::remove(p.c_str());
}

TEST_CASE("matrix file feeds a tile projection") {
  const std::string p = temp_path("tile.json");
  std::ofstream(p) << io::to_json(tile_by_label("Q2").matrix).dump();
  const TileProjection t = TileProjection::from_matrix(io::read_matrix_file(p), "file");
  CHECK(t.rank == 2);
  std::remove(p.c_str());
}

TEST_CASE("reports re-serialize identically") {
  const PointReport r = evaluate_point(QubitQCAParams::from_axis(1.1, 0.3, {0, 0, 1}), 6);
  const std::string a = io::to_json(r).dump(2);
  CHECK(io::Json::parse(a).dump(2) == a);
  const ScanReport s = run_scan(ScanGrid{2, 2, {{0, 0, 1}}}, 6, kDefaultTol, 2);
  const std::string b = io::to_json(s).dump();
  CHECK(io::Json::parse(b).dump() == b);
  CHECK(io::Json::parse(b)["schema"] == io::kSchema);
  const RenormResult rr = renormalize_qubit(QubitQCAParams::from_axis(1.0, 0.2, {0, 0, 1}),
                                            tile_by_label("Q2"), 3);
  const io::Json rj = io::to_json(rr);
  CHECK(rj["classification"] == "diagonal-rule");
  CHECK(rj.contains("v_s"));
  CHECK_FALSE(io::to_json(rr, false).contains("v_s"));
  CHECK(rj["tolerances"]["acceptance"] == 1e-8);
}

TEST_CASE("scan CSV layout") {
  const ScanReport s = run_scan(ScanGrid{2, 2, {{0, 0, 1}, {1, 0, 0}}}, 6, kDefaultTol, 1);
  const auto ls = lines(io::scan_csv(s));
  REQUIRE(ls.size() == 9);
  CHECK(ls[0] == "phi,theta,nx,ny,nz,predicate,numeric,witness,max_residual");
  // First row: phi = theta = 0 on axis z, every tile witnesses.
  CHECK(ls[1].rfind("0,0,0,0,1,true,true,Q1_a;Q2;IxC0+;IxC1+;C0xI+;C1xI+,", 0) == 0);
  for (std::size_t i = 1; i < ls.size(); ++i) {
    std::size_t commas = 0;
    for (char c : ls[i]) commas += c == ',';
    CHECK(commas == 8);
  }
}

TEST_CASE("numbers ignore the C locale") {
  const char* old = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = old ? old : "C";
  const bool switched = std::setlocale(LC_NUMERIC, "de_DE.UTF-8") != nullptr;
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(-1.25e-10) == "-1.25e-10");
  std::setlocale(LC_NUMERIC, saved.c_str());
  if (!switched) MESSAGE("de_DE locale unavailable; checked under the default locale only");
}

TEST_CASE("trajectory outputs") {
  const FlowState s{Angle::pi_fraction(1, 2), Angle::pi_fraction(1, 7), CaseTag::diagonal,
                    ProjectionLabel::parse("Q2")};
  const FlowTrajectory t = iterate(s, 5);
  const auto ls = lines(io::trajectory_csv(t));
  CHECK(ls[0] == "step,phi,theta,case,projection");
  CHECK(ls.size() == t.states.size() + 1);
  const io::Json j = io::to_json(t);
  CHECK(j["states"][0]["phi_exact"] == "1/2 pi");
  CHECK(j["states"][0]["projection"] == "Q2");
  CHECK(j["terminated_by"] == std::string(termination_name(t.terminated_by)));
}
