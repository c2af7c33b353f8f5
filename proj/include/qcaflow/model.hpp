// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Wrapped one-dimensional qubit automata: the local rotation U, the
// controlled phase C_phi, the global step W = (U x ... x U) D_phi, its
// Margolus layers, and shifts.
//
// Heisenberg convention: the step acts on observables as A -> W^dag A W.
#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcaflow/linalg.hpp"

namespace qcaflow {

struct EulerAngles {
  double alpha1 = 0.0;
  double gamma = 0.0;
  double alpha2 = 0.0;
  double alpha() const { return alpha1 + alpha2; }
};

struct QubitQCAParams {
  double phi = 0.0;
  double theta = 0.0;
  std::array<double, 3> axis{0.0, 0.0, 1.0};
  std::optional<EulerAngles> euler;

  // Normalizes the axis (rejecting near-zero ones) and the angles.
  static QubitQCAParams from_axis(double phi, double theta,
                                  std::array<double, 3> axis);
  // U = e^{i a1 sz} e^{i g sy} e^{i a2 sz}, rewritten as (theta, axis).
  static QubitQCAParams from_euler(double phi, EulerAngles e);

  // Throws PreconditionError on a non-unit axis.
  void validate() const;
};

struct WrappedLattice {
  std::size_t n_cells = 8;
  std::size_t cell_dim = 2;

  std::size_t dim() const;
  // Even and at least 6: large enough that neighbourhood overlaps on the
  // ring match the infinite chain.
  bool regular() const { return n_cells % 2 == 0 && n_cells >= 6; }
  void require_regular() const;
};

struct StepUnitary {
  WrappedLattice lattice;
  ComplexMatrix matrix;
  std::optional<QubitQCAParams> params;
  std::string label;
};

ComplexMatrix local_unitary(const QubitQCAParams& p);
ComplexMatrix controlled_phase(double phi);
// C_phi (U x U) C_phi
ComplexMatrix build_G(const QubitQCAParams& p);

StepUnitary build_step_unitary(const QubitQCAParams& p, const WrappedLattice& lat);
StepUnitary build_shift(const WrappedLattice& lat, long k);
StepUnitary build_identity(const WrappedLattice& lat);
// Dense product of two steps on the same lattice (apply b, then a).
StepUnitary compose(const StepUnitary& a, const StepUnitary& b);
StepUnitary step_power(const StepUnitary& s, std::size_t times);

// layer1 = prod over even pairs (2x, 2x+1) of C_phi;
// layer2 = prod over odd pairs (2x+1, 2x+2) of (U x U) C_phi.
std::pair<StepUnitary, StepUnitary> margolus_layers(const QubitQCAParams& p,
                                                    const WrappedLattice& lat);
// Staggered product of arbitrary two-cell blocks: layer2 * layer1.
ComplexMatrix margolus_product(const ComplexMatrix& m1, const ComplexMatrix& m2,
                               std::size_t n_cells);

// ||tau W tau^dag - W||_F with tau the unit translation.
double translation_residual(const StepUnitary& s);

// Per-basis-state phase of D_phi: exp(i phi * #adjacent 11 pairs).
std::vector<cplx> interaction_phases(double phi, std::size_t n_cells);

// In-place gate application, left multiplication on a row-major block of
// `cols` columns (cols = 1 for a state vector).
void apply_one_cell(cplx* data, std::size_t n_qubits, std::size_t cols,
                    std::size_t q, const ComplexMatrix& u);
void apply_two_cell(cplx* data, std::size_t n_qubits, std::size_t cols,
                    std::size_t qa, std::size_t qb, const ComplexMatrix& g);
void apply_diagonal(cplx* data, std::size_t dim, std::size_t cols,
                    std::span<const cplx> d);

// Anything that can act on state vectors without being stored densely.
class LinearAction {
 public:
  virtual ~LinearAction() = default;
  virtual std::size_t dim() const = 0;
  virtual void apply(std::vector<cplx>& v) const = 0;
  virtual void apply_adjoint(std::vector<cplx>& v) const = 0;
};

class DenseAction final : public LinearAction {
 public:
  explicit DenseAction(ComplexMatrix m);
  std::size_t dim() const override { return m_.rows(); }
  void apply(std::vector<cplx>& v) const override;
  void apply_adjoint(std::vector<cplx>& v) const override;

 private:
  ComplexMatrix m_;
  ComplexMatrix adj_;
};

// W^power, applied gate by gate. Memory is O(2^n) instead of O(4^n).
class QubitCircuit final : public LinearAction {
 public:
  QubitCircuit(const QubitQCAParams& p, std::size_t n_cells, std::size_t power = 1);
  std::size_t dim() const override { return dim_; }
  void apply(std::vector<cplx>& v) const override;
  void apply_adjoint(std::vector<cplx>& v) const override;
  // W^power as a dense matrix, built by row operations only.
  ComplexMatrix dense() const;

 private:
  std::size_t n_;
  std::size_t dim_;
  std::size_t power_;
  ComplexMatrix u_, u_adj_;
  std::vector<cplx> d_, d_conj_;
};

}  // namespace qcaflow
