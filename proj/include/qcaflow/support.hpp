// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Support algebras and the index of a translation-invariant automaton.
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qcaflow/linalg.hpp"
#include "qcaflow/model.hpp"

namespace qcaflow {

struct AlgebraSpan {
  std::size_t ambient_dim = 0;          // matrices are ambient_dim x ambient_dim
  std::vector<ComplexMatrix> basis;     // HS-orthonormal
  bool closed = false;
  double tolerance = kDefaultTol;
  std::size_t dim() const { return basis.size(); }
};

// Incremental HS-orthonormal span with a relative rank cutoff.
class SpanBuilder {
 public:
  explicit SpanBuilder(std::size_t ambient_dim, double tol = kDefaultTol);
  // True if `m` enlarged the span.
  bool add(const ComplexMatrix& m);
  std::size_t dim() const { return basis_.size(); }
  bool full() const { return basis_.size() == ambient_ * ambient_; }
  const std::vector<ComplexMatrix>& basis() const { return basis_; }
  std::vector<ComplexMatrix> take() { return std::move(basis_); }

 private:
  std::size_t ambient_;
  double tol_;
  std::vector<ComplexMatrix> basis_;
};

// Adjoins adjoints and pairwise products until the dimension is stable.
// More than 10 rounds throws NumericalInstability.
AlgebraSpan algebra_closure(std::span<const ComplexMatrix> span,
                            double tol = kDefaultTol);

// Left (or right) support: slice each image as sum_mu a_mu (x) e_mu over
// an HS-orthonormal basis {e_mu} of the other factor, then close the
// slices together with the identity. `other_basis` defaults to matrix
// units.
AlgebraSpan support_algebra(std::span<const ComplexMatrix> images, Bipartition split,
                            Side side, double tol = kDefaultTol,
                            std::span<const ComplexMatrix> other_basis = {});

struct IndexResult {
  double value = 1.0;
  std::size_t dim_L = 0;
  std::size_t dim_cell = 0;
  std::size_t lattice_size = 0;
  std::size_t block = 1;
  double tolerance = kDefaultTol;
};

// Index from L0 = S(T(A_B0 (x) A_B1), A_B-1 (x) A_B0) where B_k are blocks
// of `block` cells: value = sqrt(dim L0 / d^(2 block)). block = 1 is the
// nearest-neighbour form; use 2 for radius-2 steps such as compositions
// of two nearest-neighbour automata. Assumes translation invariance.
IndexResult qca_index(const StepUnitary& step, std::size_t block = 1,
                      double tol = kDefaultTol);

// Schmidt rank 1 across the split.
bool is_product_unitary(const ComplexMatrix& m, Bipartition split,
                        double tol = kDefaultTol);

}  // namespace qcaflow
