// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qcaflow/angle.hpp"
#include "qcaflow/errors.hpp"
#include "qcaflow/linalg.hpp"
#include "qcaflow/model.hpp"

using namespace qcaflow;

namespace {

ComplexMatrix proj_q1() {
  ComplexMatrix p(4, 4);
  p(0, 0) = p(3, 3) = 1;
  return p;
}

ComplexMatrix ket_bra(std::size_t d, std::size_t i, std::size_t j) {
  ComplexMatrix m(d, d);
  m(i, j) = 1;
  return m;
}

}  // namespace

TEST_CASE("kron basics") {
  CHECK(frobenius_distance(kron(ComplexMatrix::identity(2), ComplexMatrix::identity(2)),
                           ComplexMatrix::identity(4)) == 0.0);
  const ComplexMatrix zz = kron(pauli(3), pauli(3));
  const cplx want[] = {1, -1, -1, 1};
  for (int i = 0; i < 4; ++i) CHECK(zz(i, i) == want[i]);
  CHECK(zz.max_offdiag() == 0.0);
}

TEST_CASE("kron(C_pi, I) flips the sign of |110>") {
  const ComplexMatrix m = kron(controlled_phase(kPi), ComplexMatrix::identity(2));
  // |110> is basis index 6 with cell 0 most significant.
  for (std::size_t j = 0; j < 8; ++j) {
    const double want = j == 6 || j == 7 ? -1.0 : 1.0;
    CHECK(std::abs(m(j, j) - cplx(want)) < 1e-15);
  }
  CHECK(m.max_offdiag() < 1e-15);
}

TEST_CASE("kron agrees with the index formula on random rectangular factors") {
  std::mt19937_64 rng(11);
  for (auto [ra, ca, rb, cb] : {std::array<std::size_t, 4>{2, 3, 4, 1}, {1, 1, 3, 3}, {4, 4, 2, 2},
                                {3, 2, 2, 5}}) {
    const auto a = oracle::random_matrix(ra, ca, rng), b = oracle::random_matrix(rb, cb, rng);
    CHECK(oracle::dist(kron(oracle::to(a), oracle::to(b)), oracle::kron(a, b)) < 1e-13);
  }
  const std::vector<cplx> u{1.0, 2.0}, v{cplx(0, 1), 3.0};
  const auto w = kron(u, v);
  REQUIRE(w.size() == 4);
  CHECK(w[1] == cplx(3.0));
  CHECK(w[2] == cplx(0, 2));
}

TEST_CASE("matrix product and adjoint follow the definitions") {
  std::mt19937_64 rng(12);
  const auto a = oracle::random_matrix(5, 7, rng), b = oracle::random_matrix(7, 3, rng);
  CHECK(oracle::dist(oracle::to(a) * oracle::to(b), oracle::mul(a, b)) < 1e-12);
  CHECK(oracle::dist(oracle::to(a).adjoint(), oracle::dagger(a)) == 0.0);
  CHECK_THROWS_AS(oracle::to(a) * oracle::to(a), DimensionError);
  CHECK_THROWS_AS(oracle::to(a) + oracle::to(b), DimensionError);
}

TEST_CASE("operator Schmidt examples") {
  SUBCASE("Q1 projector has two unit terms") {
    const auto os = operator_schmidt(proj_q1(), {2, 2});
    REQUIRE(os.rank() == 2);
    for (const auto& t : os.terms) {
      CHECK(std::abs(t.weight - 1.0) < 1e-12);
      // Each factor is |k><k| for the same k.
      CHECK(t.left.is_diagonal(1e-12));
      CHECK(t.right.is_diagonal(1e-12));
      CHECK(std::abs(std::abs(t.left.trace()) - 1.0) < 1e-12);
    }
    CHECK(frobenius_distance(os.reconstruct(), proj_q1()) < 1e-12);
  }
  SUBCASE("identity is a product with weight 2") {
    const auto os = operator_schmidt(ComplexMatrix::identity(4), {2, 2});
    REQUIRE(os.rank() == 1);
    CHECK(std::abs(os.terms[0].weight - 2.0) < 1e-12);
    const ComplexMatrix half = ComplexMatrix::identity(2) * cplx(1 / std::sqrt(2.0));
    CHECK(frobenius_distance(os.terms[0].left, half) < 1e-12);
    CHECK(frobenius_distance(os.terms[0].right, half) < 1e-12);
  }
  SUBCASE("swap has rank 4") {
    const auto os = operator_schmidt(swap_gate(2), {2, 2});
    CHECK(os.rank() == 4);
    for (const auto& t : os.terms) CHECK(std::abs(t.weight - 1.0) < 1e-12);
  }
}

TEST_CASE("operator Schmidt factors are HS-orthonormal and reconstruct") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dl = 2 + trial % 3, dr = 2 + (trial / 3) % 3;
    const ComplexMatrix m = oracle::to(oracle::random_matrix(dl * dr, dl * dr, rng));
    const auto os = operator_schmidt(m, {dl, dr});
    CHECK(os.rank() == std::min(dl * dl, dr * dr));
    CHECK(frobenius_distance(os.reconstruct(), m) < 1e-10 * m.frobenius_norm());
    for (std::size_t a = 0; a < os.rank(); ++a)
      for (std::size_t b = 0; b < os.rank(); ++b) {
        const double want = a == b ? 1.0 : 0.0;
        CHECK(std::abs(hs_inner(os.terms[a].left, os.terms[b].left) - want) < 1e-10);
        CHECK(std::abs(hs_inner(os.terms[a].right, os.terms[b].right) - want) < 1e-10);
      }
    for (std::size_t a = 1; a < os.rank(); ++a)
      CHECK(os.terms[a].weight <= os.terms[a - 1].weight + 1e-12);
  }
}

TEST_CASE("realign matches the index regrouping") {
  std::mt19937_64 rng(14);
  const auto m = oracle::random_matrix(6, 6, rng);
  CHECK(oracle::dist(realign(oracle::to(m), {2, 3}), oracle::realign(m, 2, 3)) == 0.0);
  CHECK(oracle::dist(realign(oracle::to(m), {3, 2}), oracle::realign(m, 3, 2)) == 0.0);
}

TEST_CASE("phase_equal examples") {
  const ComplexMatrix id = ComplexMatrix::identity(2);
  auto pm = phase_equal(id, id * std::polar(1.0, kPi / 7));
  CHECK(pm.equal);
  // b = e^{i alpha} a.
  CHECK(std::abs(pm.alpha - kPi / 7) < 1e-12);

  pm = phase_equal(pauli(1), pauli(3));
  CHECK_FALSE(pm.equal);
  CHECK(pm.alpha == 0.0);

  const ComplexMatrix c = controlled_phase(kPi / 2);
  pm = phase_equal(c, c * std::polar(1.0, -0.3));
  CHECK(pm.equal);
  CHECK(std::abs(pm.alpha - (-0.3)) < 1e-12);
  CHECK(pm.distance < 1e-12);
}

TEST_CASE("partial trace examples and oracle") {
  CHECK(frobenius_distance(partial_trace(ComplexMatrix::identity(4), {2, 2}, Side::left),
                           ComplexMatrix::identity(2) * cplx(2)) < 1e-15);
  CHECK(frobenius_distance(partial_trace(ket_bra(4, 0, 0), {2, 2}, Side::right), ket_bra(2, 0, 0)) <
        1e-15);
  CHECK(frobenius_distance(partial_trace(swap_gate(2), {2, 2}, Side::left),
                           ComplexMatrix::identity(2)) < 1e-15);
  std::mt19937_64 rng(15);
  const auto m = oracle::random_matrix(6, 6, rng);
  CHECK(oracle::dist(partial_trace(oracle::to(m), {2, 3}, Side::left),
                     oracle::partial_trace(m, 2, 3, true)) < 1e-13);
  CHECK(oracle::dist(partial_trace(oracle::to(m), {2, 3}, Side::right),
                     oracle::partial_trace(m, 2, 3, false)) < 1e-13);
}

TEST_CASE("translation operator examples") {
  CHECK(frobenius_distance(translation_operator(4, 0), ComplexMatrix::identity(16)) == 0.0);
  CHECK(frobenius_distance(translation_operator(2, 1), swap_gate(2)) == 0.0);
  // |1000> -> |0100>
  const ComplexMatrix t = translation_operator(4, 1);
  CHECK(t(0b0100, 0b1000) == cplx(1));
  for (long k : {-3L, -1L, 1L, 2L, 5L})
    CHECK(oracle::dist(translation_operator(5, k), oracle::shift(5, k)) == 0.0);
  CHECK(frobenius_distance(translation_operator(6, 1) * translation_operator(6, -1),
                           ComplexMatrix::identity(64)) == 0.0);
}

TEST_CASE("permute_conjugate equals conjugation by the permutation matrix") {
  std::mt19937_64 rng(16);
  const ComplexMatrix m = oracle::to(oracle::random_matrix(8, 8, rng));
  const auto perm = translation_permutation(3, 1);
  const ComplexMatrix p = translation_operator(3, 1);
  CHECK(frobenius_distance(permute_conjugate(m, perm), p * m * p.adjoint()) < 1e-13);
}

TEST_CASE("commutator and unitarity helpers") {
  CHECK(std::abs(commutator_norm(pauli(1), pauli(3)) - std::sqrt(8.0)) < 1e-14);
  CHECK(commutator_norm(kron(pauli(3), ComplexMatrix::identity(2)), controlled_phase(0.4)) == 0.0);
  CHECK(swap_gate(3).is_unitary(1e-14));
  CHECK(swap_gate(2).unitarity_residual() == 0.0);
  CHECK_FALSE((ComplexMatrix::identity(2) * cplx(2)).is_unitary(1e-6));
  CHECK(std::abs(hs_inner(pauli(2), pauli(2)) - cplx(2)) < 1e-15);
  CHECK(frobenius_distance(kron_power(pauli(1), 3), kron(pauli(1), kron(pauli(1), pauli(1)))) ==
        0.0);
}

TEST_CASE("dense cap and dimension guards") {
  CHECK(checked_qubit_dim(kMaxQubits) == (std::size_t(1) << kMaxQubits));
  CHECK_THROWS_AS(checked_qubit_dim(kMaxQubits + 1), DimensionError);
  CHECK_THROWS_AS(operator_schmidt(ComplexMatrix::identity(6), {2, 2}), DimensionError);
  CHECK_THROWS_AS(partial_trace(ComplexMatrix::identity(5), {2, 2}, Side::left), DimensionError);
}
