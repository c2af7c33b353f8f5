// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
#include "qcaflow/support.hpp"

#include <cmath>
#include <string>

#include "qcaflow/errors.hpp"
#include "qcaflow/kernels.hpp"

namespace qcaflow {

SpanBuilder::SpanBuilder(std::size_t ambient_dim, double tol)
    : ambient_(ambient_dim), tol_(tol) {}

bool SpanBuilder::add(const ComplexMatrix& m) {
  if (m.rows() != ambient_ || m.cols() != ambient_)
    throw DimensionError("span element has the wrong size");
  if (full()) return false;
  const auto& k = kernels::active();
  const double n0 = m.frobenius_norm();
  if (n0 == 0.0) return false;
  ComplexMatrix v = m;
  // Two Gram-Schmidt passes keep the residual honest near rank deficiency.
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis_) {
      const cplx c = k.dot(b.data(), v.data(), v.size());
      k.axpy(v.data(), b.data(), v.size(), -c);
    }
  const double r = v.frobenius_norm();
  if (r <= tol_ * n0) return false;
  v *= 1.0 / r;
  basis_.push_back(std::move(v));
  return true;
}

AlgebraSpan algebra_closure(std::span<const ComplexMatrix> span, double tol) {
  if (span.empty()) throw PreconditionError("algebra_closure of an empty list");
  const std::size_t d = span.front().rows();
  SpanBuilder b(d, tol);
  for (const auto& m : span) {
    b.add(m);
    b.add(m.adjoint());
  }
  std::size_t frontier_begin = 0;
  for (int round = 0; round < 10; ++round) {
    const std::size_t end = b.dim();
    if (frontier_begin == end || b.full())
      return {d, b.take(), true, tol};
    // Everything before `frontier_begin` was already multiplied pairwise.
    const std::vector<ComplexMatrix> snapshot = b.basis();
    for (std::size_t i = frontier_begin; i < end && !b.full(); ++i)
      for (std::size_t j = 0; j < end && !b.full(); ++j) {
        b.add(snapshot[i] * snapshot[j]);
        b.add(snapshot[j] * snapshot[i]);
      }
    frontier_begin = end;
  }
  if (b.dim() == frontier_begin || b.full()) return {d, b.take(), true, tol};
  throw NumericalInstability("algebra closure did not stabilise within 10 rounds");
}

AlgebraSpan support_algebra(std::span<const ComplexMatrix> images, Bipartition split,
                            Side side, double tol,
                            std::span<const ComplexMatrix> other_basis) {
  const std::size_t dl = split.dim_left, dr = split.dim_right;
  const std::size_t keep = side == Side::left ? dl : dr;
  const std::size_t other = side == Side::left ? dr : dl;
  for (const auto& m : images)
    if (!m.square() || m.rows() != split.total())
      throw DimensionError("support_algebra: image does not match the split " +
                           std::to_string(dl) + "|" + std::to_string(dr));
  for (const auto& e : other_basis)
    if (e.rows() != other || e.cols() != other)
      throw DimensionError("support_algebra: complement basis has the wrong size");

  std::vector<ComplexMatrix> slices;
  auto entry = [&](const ComplexMatrix& m, std::size_t a, std::size_t ap, std::size_t o,
                   std::size_t op) -> cplx {
    return side == Side::left ? m(a * dr + o, ap * dr + op) : m(o * dr + a, op * dr + ap);
  };
  for (const auto& m : images) {
    const double scale = m.frobenius_norm();
    auto push = [&](ComplexMatrix s) {
      if (s.frobenius_norm() > 1e-13 * scale) slices.push_back(std::move(s));
    };
    if (other_basis.empty()) {
      for (std::size_t o = 0; o < other; ++o)
        for (std::size_t op = 0; op < other; ++op) {
          ComplexMatrix s(keep, keep);
          for (std::size_t a = 0; a < keep; ++a)
            for (std::size_t ap = 0; ap < keep; ++ap) s(a, ap) = entry(m, a, ap, o, op);
          push(std::move(s));
        }
    } else {
      for (const auto& e : other_basis) {
        ComplexMatrix s(keep, keep);
        for (std::size_t o = 0; o < other; ++o)
          for (std::size_t op = 0; op < other; ++op) {
            const cplx w = std::conj(e(o, op));
            if (w == cplx{}) continue;
            for (std::size_t a = 0; a < keep; ++a)
              for (std::size_t ap = 0; ap < keep; ++ap) s(a, ap) += w * entry(m, a, ap, o, op);
          }
        push(std::move(s));
      }
    }
  }
  slices.push_back(ComplexMatrix::identity(keep));
  return algebra_closure(slices, tol);
}

IndexResult qca_index(const StepUnitary& step, std::size_t block, double tol) {
  const std::size_t n = step.lattice.n_cells;
  if (step.lattice.cell_dim != 2) throw PreconditionError("qca_index supports qubit cells");
  if (block < 1) throw PreconditionError("index block size must be >= 1");
  if (n < 6 || n < 4 * block)
    throw PreconditionError("index needs n >= max(6, 4*block) cells, got " +
                            std::to_string(n));
  if (step.matrix.rows() != step.lattice.dim() || !step.matrix.square())
    throw DimensionError("step matrix does not match its lattice");
  const double ures = step.matrix.unitarity_residual();
  if (ures > 1e-8)
    throw PreconditionError("qca_index of a non-unitary step (residual " +
                            std::to_string(ures) + ")");

  const ComplexMatrix& w = step.matrix;
  const ComplexMatrix w_adj = w.adjoint();
  const std::size_t dim = w.rows();

  // Generators of A_B1 (x) A_B2, i.e. cells block .. 3*block-1. By
  // translation invariance their left support over blocks 0,1 is L0.
  std::vector<std::vector<std::pair<std::size_t, int>>> gens;
  if (block == 1) {
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) gens.push_back({{1, a}, {2, b}});
  } else {
    for (std::size_t q = block; q < 3 * block; ++q) {
      gens.push_back({{q, 1}});
      gens.push_back({{q, 3}});
    }
  }
  std::vector<ComplexMatrix> images;
  images.reserve(gens.size());
  for (const auto& g : gens) {
    ComplexMatrix gw = w;
    for (auto [q, k] : g)
      if (k != 0) apply_one_cell(gw.data(), n, dim, q, pauli(k));
    images.push_back(w_adj * gw);
  }
  const std::size_t dl = std::size_t{1} << (2 * block);
  const AlgebraSpan l0 = support_algebra(images, {dl, dim / dl}, Side::left, tol);
  IndexResult r;
  r.dim_L = l0.dim();
  r.dim_cell = dl;  // d^(2 block)
  r.value = std::sqrt(static_cast<double>(r.dim_L) / static_cast<double>(r.dim_cell));
  r.lattice_size = n;
  r.block = block;
  r.tolerance = tol;
  return r;
}

bool is_product_unitary(const ComplexMatrix& m, Bipartition split, double tol) {
  const double ures = m.unitarity_residual();
  if (ures > 1e-8)
    throw PreconditionError("is_product_unitary of a non-unitary matrix (residual " +
                            std::to_string(ures) + ")");
  return operator_schmidt(m, split, tol).rank() == 1;
}

}  // namespace qcaflow
