// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qcaflow/angle.hpp"
#include "qcaflow/errors.hpp"
#include "qcaflow/renorm.hpp"

using namespace qcaflow;

namespace {

QubitQCAParams zp(double phi, double theta) { return QubitQCAParams::from_axis(phi, theta, {0, 0, 1}); }
QubitQCAParams xp(double phi, double theta) { return QubitQCAParams::from_axis(phi, theta, {1, 0, 0}); }

StepUnitary two_steps(const QubitQCAParams& p, std::size_t n) {
  return StepUnitary{{n, 2}, QubitCircuit(p, n, 2).dense(), p, "w2"};
}

// ||W^2 Pi - Pi W^2|| from the enumerated step and an explicit tensor product.
double oracle_commutator(const QubitQCAParams& p, const TileProjection& t, std::size_t n) {
  const oracle::Mat w = oracle::qubit_step(p.phi, p.theta, p.axis, n);
  const oracle::Mat w2 = oracle::mul(w, w);
  const oracle::Mat pi = oracle::chain(oracle::projector(t.basis), n / 2);
  return oracle::dist(oracle::mul(w2, pi), oracle::mul(pi, w2));
}

}  // namespace

TEST_CASE("tile labels and orderings") {
  const TileProjection q1a = tile_by_label("Q1_a");
  CHECK(q1a.rank == 2);
  CHECK(q1a.basis[0][0] == cplx(1));
  CHECK(q1a.basis[1][3] == cplx(1));
  CHECK(tile_by_label("Q1_b").basis[0][3] == cplx(1));
  CHECK(tile_by_label("Q1").label == "Q1_a");
  const TileProjection q2 = tile_by_label("Q2");
  CHECK(q2.basis[0][1] == cplx(1));
  CHECK(q2.basis[1][2] == cplx(1));
  // IxC1+ keeps |01>, |11>; the minus branch reverses them.
  CHECK(tile_by_label("IxC1+").basis[0][1] == cplx(1));
  CHECK(tile_by_label("IxC1+").basis[1][3] == cplx(1));
  CHECK(tile_by_label("IxC1-").basis[0][3] == cplx(1));
  CHECK(tile_by_label("C1xI+").basis[0][2] == cplx(1));
  CHECK(tile_by_label("C1xI+").basis[1][3] == cplx(1));
  CHECK(tile_by_label("IxC0").label == "IxC0+");
  CHECK(tile_by_label("IxC0-").branch() == "-");
  CHECK(q1a.branch() == "a");
  CHECK_THROWS_AS(tile_by_label("Q3"), ConfigError);
  CHECK_THROWS_AS(tile_by_label("IxC2+"), ConfigError);
}

TEST_CASE("tile construction validates its input") {
  CHECK_THROWS_AS(TileProjection::from_matrix(ComplexMatrix::identity(4), "full"), PreconditionError);
  ComplexMatrix notproj = ComplexMatrix::identity(4);
  notproj(0, 1) = 0.5;
  CHECK_THROWS_AS(TileProjection::from_matrix(notproj, "bad"), PreconditionError);
  CHECK_THROWS_AS(TileProjection::from_basis({{1, 0, 0, 0}, {1, 0, 0, 0}}, TileFamily::custom, "dup"),
                  PreconditionError);
  const TileProjection t = TileProjection::from_matrix(tile_by_label("Q2").matrix, "m");
  CHECK(t.rank == 2);
  CHECK(frobenius_distance(t.matrix, tile_by_label("Q2").matrix) < 1e-12);
}

TEST_CASE("enumeration adds the eigenbasis family only at phi = 0") {
  CHECK(enumerate_tile_projections(xp(0.5, 0.3)).size() == 6);
  CHECK(enumerate_tile_projections(zp(0.0, 0.3)).size() == 6);
  const auto e = enumerate_tile_projections(xp(0.0, 0.3));
  REQUIRE(e.size() == 12);
  CHECK(e[6].label.rfind("eig:", 0) == 0);
  // Eigenbasis tiles commute with U (x) U.
  const ComplexMatrix u = local_unitary(xp(0.0, 0.3));
  for (std::size_t i = 6; i < 12; ++i) CHECK(commutator_norm(e[i].matrix, kron(u, u)) < 1e-12);
}

TEST_CASE("chain projector examples") {
  const ComplexMatrix p2 = chain_projector(tile_by_label("Q1"), 2);
  CHECK(p2.rows() == 16);
  CHECK(std::abs(p2.trace() - cplx(4)) < 1e-14);
  const ComplexMatrix p3 = chain_projector(tile_by_label("Q1"), 3);
  for (std::size_t j = 0; j < 64; ++j) {
    const bool kept = oracle::bit(j, 0, 6) == oracle::bit(j, 1, 6) &&
                      oracle::bit(j, 2, 6) == oracle::bit(j, 3, 6) &&
                      oracle::bit(j, 4, 6) == oracle::bit(j, 5, 6);
    CHECK(p3(j, j) == cplx(kept ? 1.0 : 0.0));
  }
  CHECK(p3.max_offdiag() == 0.0);
  std::mt19937_64 rng(41);
  const TileProjection r = random_tile_projection(rng);
  CHECK(oracle::dist(chain_projector(r, 3), oracle::chain(oracle::from(r.matrix), 3)) < 1e-13);
}

TEST_CASE("isometry identities") {
  std::mt19937_64 rng(42);
  std::vector<TileProjection> tiles = enumerate_tile_projections(xp(0.0, 0.8));
  tiles.push_back(random_tile_projection(rng));
  for (const auto& t : tiles) {
    CAPTURE(t.label);
    const IsometryJ j = build_J(t, 3);
    CHECK(j.matrix.rows() == 8);
    CHECK(j.matrix.cols() == 64);
    CHECK(frobenius_distance(j.matrix * j.matrix.adjoint(), ComplexMatrix::identity(8)) < 1e-12);
    CHECK(frobenius_distance(j.matrix.adjoint() * j.matrix, chain_projector(t, 3)) < 1e-12);
    // Matrix-free application.
    std::normal_distribution<double> g;
    std::vector<cplx> v(64), c(8);
    for (auto& x : v) x = {g(rng), g(rng)};
    for (auto& x : c) x = {g(rng), g(rng)};
    const auto jv = apply_J(j.tile_map, 3, v);
    const auto jc = apply_J_adjoint(j.tile_map, 3, c);
    for (std::size_t i = 0; i < 8; ++i) {
      cplx ref = 0;
      for (std::size_t k = 0; k < 64; ++k) ref += j.matrix(i, k) * v[k];
      CHECK(std::abs(jv[i] - ref) < 1e-12);
    }
    for (std::size_t k = 0; k < 64; ++k) {
      cplx ref = 0;
      for (std::size_t i = 0; i < 8; ++i) ref += std::conj(j.matrix(i, k)) * c[i];
      CHECK(std::abs(jc[k] - ref) < 1e-12);
    }
  }
}

TEST_CASE("commutation check examples") {
  for (const auto& t : enumerate_tile_projections(zp(1.0, 0.2))) {
    const CommutationResult r = commutation_check(build_identity({8, 2}), t);
    CHECK(r.passes);
    CHECK(r.residual == 0.0);
  }
  const auto pz = zp(kPi / 2, 0.3);
  const CommutationResult rz = commutation_check(two_steps(pz, 8), tile_by_label("Q1"));
  CHECK(rz.passes);
  CHECK(oracle_commutator(pz, tile_by_label("Q1"), 8) < 1e-10);

  const auto px = xp(kPi / 2, 0.3);
  const StepUnitary w2 = two_steps(px, 8);
  for (const auto& t : enumerate_tile_projections(px)) {
    CAPTURE(t.label);
    const CommutationResult r = commutation_check(w2, t);
    CHECK_FALSE(r.passes);
    CHECK(std::abs(r.residual - oracle_commutator(px, t, 8)) < 1e-9);
  }
}

TEST_CASE("matrix-free commutator equals the dense route") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi), ax(-1.0, 1.0);
  for (int i = 0; i < 6; ++i) {
    auto p = QubitQCAParams::from_axis(ang(rng), ang(rng), {ax(rng), ax(rng), ax(rng)});
    if (i == 0) p = zp(0.4, 1.3);
    if (i == 1) p = xp(0.0, 0.9);
    const StepUnitary dense = two_steps(p, 8);
    const QubitCircuit circ(p, 8, 2);
    for (const auto& t : enumerate_tile_projections(p)) {
      const CommutationResult a = commutation_check(dense, t);
      const CommutationResult b = commutation_check(circ, t, 4);
      CHECK(a.passes == b.passes);
      CHECK(std::abs(a.residual - b.residual) < 1e-9);
      CHECK_FALSE(b.partial);
      const CommutationResult c = commutation_check(circ, t, 4, kDefaultTol, true);
      CHECK(c.passes == a.passes);
      CHECK(c.residual <= a.residual + 1e-12);
    }
  }
}

TEST_CASE("renormalized unitary examples") {
  const WrappedLattice l8{8, 2};
  {
    const RenormResult r = renormalize(build_shift(l8, 1), tile_by_label("Q1"), 2);
    REQUIRE(r.v_s);
    CHECK(r.classification == Classification::shift);
    CHECK(r.shift_direction == 1);
    CHECK(phase_equal(*r.v_s, translation_operator(4, 1)).distance < 1e-14);
  }
  {
    const IsometryJ j = build_J(tile_by_label("Q2"), 4);
    const Renormalized v = renormalized_unitary(build_identity(l8), j);
    CHECK(frobenius_distance(v.v_s, ComplexMatrix::identity(16)) < 1e-14);
  }
  {
    const IsometryJ j = build_J(tile_by_label("Q1"), 4);
    const Renormalized v = renormalized_unitary(two_steps(zp(kPi / 3, kPi / 5), 8), j);
    CHECK(v.unitarity_residual < 1e-12);
    CHECK(v.v_s.is_diagonal(1e-12));
    const Renormalized mf = renormalized_unitary(QubitCircuit(zp(kPi / 3, kPi / 5), 8, 2), j);
    CHECK(frobenius_distance(mf.v_s, v.v_s) < 1e-12);
  }
}

TEST_CASE("diagonal fit examples") {
  const DiagonalFit id = fit_diagonal_rule(ComplexMatrix::identity(16), 4);
  CHECK(std::abs(id.phi_prime) < 1e-14);
  CHECK(std::abs(id.theta_prime) < 1e-14);
  CHECK(std::abs(id.global_phase) < 1e-14);
  CHECK(id.residual < 1e-14);

  const StepUnitary w = build_coarse_step(2 * kPi / 3, 2 * kPi / 3, 4);
  const DiagonalFit f = fit_diagonal_rule(w.matrix, 4);
  CHECK(circle_distance(f.phi_prime, 2 * kPi / 3, 2 * kPi) < 1e-10);
  CHECK(circle_distance(f.theta_prime, 2 * kPi / 3, kPi) < 1e-10);
  CHECK(f.residual < 1e-10);

  const ComplexMatrix shifted = w.matrix * std::polar(1.0, 0.7);
  CHECK(circle_distance(fit_diagonal_rule(shifted, 4).global_phase,
                        fit_diagonal_rule(w.matrix, 4).global_phase + 0.7, 2 * kPi) < 1e-10);
  CHECK_THROWS_WITH_AS(fit_diagonal_rule(translation_operator(4, 1), 4),
                       doctest::Contains("non-diagonal-unclassified"), PreconditionError);
  CHECK_THROWS_AS(fit_diagonal_rule(ComplexMatrix::identity(4), 2), PreconditionError);
}

TEST_CASE("coarse step builder matches basis enumeration") {
  CHECK(oracle::dist(build_coarse_step(0.8, -0.3, 4).matrix,
                     oracle::qubit_step(0.8, -0.3, {0, 0, 1}, 4)) < 1e-13);
}

TEST_CASE("pipeline fit reconstructs the renormalized unitary") {
  // The fitted rule must rebuild v_s up to a global phase; the rebuild uses
  // the enumerated coarse step, independent of the fitting formulas.
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
  for (const char* lab : {"Q1_a", "Q1_b", "Q2", "IxC0+", "IxC1-", "C0xI+", "C1xI-"}) {
    for (int i = 0; i < 3; ++i) {
      const auto p = zp(ang(rng), ang(rng));
      const RenormResult r = renormalize_qubit(p, tile_by_label(lab), 4);
      REQUIRE(r.renormalizable);
      REQUIRE(r.fitted);
      REQUIRE(r.v_s);
      const oracle::Mat w = oracle::qubit_step(r.fitted->phi_prime, r.fitted->theta_prime, {0, 0, 1}, 4);
      const PhaseMatch m = phase_equal(oracle::to(w), *r.v_s);
      CHECK(m.distance < 1e-9);
      CHECK(circle_distance(m.alpha, r.fitted->global_phase, 2 * kPi) < 1e-9);
    }
  }
}

TEST_CASE("pipeline at (pi/3, pi/5) with Q1") {
  const RenormResult r = renormalize_qubit(zp(kPi / 3, kPi / 5), tile_by_label("Q1"), 4);
  REQUIRE(r.fitted);
  CHECK(r.classification == Classification::diagonal_rule);
  CHECK(r.branch == "a");
  CHECK(circle_distance(r.fitted->phi_prime, 2 * kPi / 3, 2 * kPi) < 1e-10);
  // The rule realized with U = exp(-i theta sz) on both scales is
  // theta' = phi + 4 theta for the |00>-first branch (mod pi).
  CHECK(circle_distance(r.fitted->theta_prime, kPi / 3 + 4 * kPi / 5, kPi) < 1e-10);
  const RenormResult b = renormalize_qubit(zp(kPi / 3, kPi / 5), tile_by_label("Q1_b"), 4);
  REQUIRE(b.fitted);
  CHECK(circle_distance(b.fitted->theta_prime, -kPi - 4 * kPi / 5, kPi) < 1e-10);
}

TEST_CASE("classification") {
  const RenormResult local = renormalize_qubit(zp(0.0, 0.4), tile_by_label("Q1"), 4);
  CHECK(local.classification == Classification::local_unitary);
  const auto px = xp(0.0, 0.4);
  // Off the z axis only the eigenbasis tiles witness the local case.
  for (const auto& t : enumerate_tile_projections(px)) {
    const RenormResult r = renormalize_qubit(px, t, 4);
    const bool eig = t.label.rfind("eig:", 0) == 0;
    CHECK(r.renormalizable == eig);
    if (eig) CHECK(r.classification == Classification::local_unitary);
  }
  const RenormResult neg = renormalize_qubit(xp(1.0, 0.5), tile_by_label("Q2"), 4);
  CHECK_FALSE(neg.renormalizable);
  CHECK(neg.classification == Classification::non_diagonal_unclassified);
  CHECK(neg.commutator_residual > 0.1);
  CHECK(neg.tolerances.commutator == 1e-9);
  CHECK(neg.tolerances.construction == 1e-12);
  CHECK(classification_name(Classification::shift) == "shift");
  CHECK_THROWS_AS(renormalize(build_identity({6, 2}), tile_by_label("Q1"), 4), PreconditionError);
}

TEST_CASE("closed-form predicate examples and oracle agreement") {
  std::mt19937_64 rng(45);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi), ax(-1.0, 1.0);
  CHECK(closed_form_renormalizable(xp(0.0, 1.3)));
  CHECK(closed_form_renormalizable(QubitQCAParams::from_axis(0.0, 0.4, {1, 2, 3})));
  CHECK(closed_form_renormalizable(zp(kPi / 2, 0.37)));
  CHECK_FALSE(closed_form_renormalizable(xp(kPi / 2, 0.37)));
  CHECK(closed_form_renormalizable(xp(kPi / 2, kPi / 2)));
  for (int i = 0; i < 200; ++i) {
    const auto p = QubitQCAParams::from_axis(ang(rng), ang(rng), {ax(rng), ax(rng), ax(rng)});
    CHECK(closed_form_renormalizable(p) == oracle::predicate(p.phi, p.theta, p.axis));
  }
}

TEST_CASE("Schmidt condition examples") {
  for (const auto& t : enumerate_tile_projections(zp(0.3, 0.3)))
    CHECK(schmidt_condition_check(ComplexMatrix::identity(4), t).passes);
  const SchmidtCheck a = schmidt_condition_check(build_G(zp(kPi / 3, kPi / 5)), tile_by_label("Q1"));
  CHECK(a.passes);
  CHECK(a.g2_commutator < 1e-10);
  CHECK(a.max_rank == 1);
  const SchmidtCheck b = schmidt_condition_check(build_G(xp(kPi / 3, kPi / 5)), tile_by_label("Q1"));
  CHECK_FALSE(b.passes);
  CHECK_FALSE(closed_form_renormalizable(xp(kPi / 3, kPi / 5)));
}

TEST_CASE("Schmidt condition agrees with the commutator on random points") {
  std::mt19937_64 rng(46);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi), ax(-1.0, 1.0);
  for (int i = 0; i < 8; ++i) {
    auto p = QubitQCAParams::from_axis(ang(rng), ang(rng), {ax(rng), ax(rng), ax(rng)});
    if (i % 4 == 1) p = zp(p.phi, p.theta);
    if (i % 4 == 2) p = xp(p.phi, kPi / 2);
    if (i % 4 == 3) p = xp(0.0, p.theta);
    const StepUnitary w2 = two_steps(p, 8);
    for (const auto& t : enumerate_tile_projections(p))
      CHECK(schmidt_condition_check(build_G(p), t).passes == commutation_check(w2, t).passes);
  }
}

TEST_CASE("reindex equation examples") {
  CHECK(verify_reindex_equation(QubitQCAParams{}, tile_by_label("Q1"), 4) < 1e-14);
  CHECK(verify_reindex_equation(zp(2 * kPi / 3, 2 * kPi / 3), tile_by_label("Q2"), 4) < 1e-9);
  CHECK(verify_reindex_equation(xp(kPi / 2, 0.37), tile_by_label("Q1"), 4) > 0.1);
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi), ax(-1.0, 1.0);
  for (int i = 0; i < 4; ++i) {
    const auto p = QubitQCAParams::from_axis(ang(rng), ang(rng), {ax(rng), ax(rng), ax(rng)});
    for (const auto& t : enumerate_tile_projections(p))
      CHECK(std::abs(verify_reindex_equation(p, t, 4) - commutation_check(two_steps(p, 8), t).residual) <
            1e-10);
  }
}

TEST_CASE("random tiles do not witness generic points") {
  std::mt19937_64 rng(48);
  const QubitCircuit w2(xp(1.0, 0.5), 8, 2);
  for (int i = 0; i < 10; ++i) {
    const TileProjection t = random_tile_projection(rng);
    CHECK(t.rank == 2);
    CHECK(t.label == "haar");
    CHECK_FALSE(commutation_check(w2, t, 4).passes);
  }
}
