// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
#include "qcaflow/model.hpp"

#include <cmath>
#include <string>

#include "qcaflow/angle.hpp"
#include "qcaflow/errors.hpp"
#include "qcaflow/kernels.hpp"

namespace qcaflow {

QubitQCAParams QubitQCAParams::from_axis(double phi, double theta,
                                         std::array<double, 3> axis) {
  const double len = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (!(len > 1e-12)) throw PreconditionError("rotation axis has zero length");
  QubitQCAParams p;
  p.phi = wrap_2pi(phi);
  p.theta = wrap_2pi(theta);
  for (int k = 0; k < 3; ++k) p.axis[k] = axis[k] / len;
  return p;
}

QubitQCAParams QubitQCAParams::from_euler(double phi, EulerAngles e) {
  const cplx i1(0.0, 1.0);
  auto rz = [&](double a) {
    return ComplexMatrix{{std::exp(i1 * a), 0}, {0, std::exp(-i1 * a)}};
  };
  const ComplexMatrix ry{{std::cos(e.gamma), std::sin(e.gamma)},
                         {-std::sin(e.gamma), std::cos(e.gamma)}};
  const ComplexMatrix u = rz(e.alpha1) * ry * rz(e.alpha2);
  // u = c I - i s n.sigma with c = tr(u)/2 and s n_k = i tr(sigma_k u)/2.
  const double c = (u.trace() / 2.0).real();
  std::array<double, 3> v{};
  for (int k = 0; k < 3; ++k) v[k] = (i1 * hs_inner(pauli(k + 1), u) / 2.0).real();
  const double s = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  QubitQCAParams p = s > 1e-14 ? from_axis(phi, std::atan2(s, c), v)
                               : from_axis(phi, std::atan2(0.0, c), {0, 0, 1});
  p.euler = e;
  return p;
}

void QubitQCAParams::validate() const {
  const double len = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (std::abs(len - 1.0) > 1e-12)
    throw PreconditionError("rotation axis is not a unit vector (|n| = " +
                            std::to_string(len) + ")");
}

std::size_t WrappedLattice::dim() const {
  if (cell_dim == 2) return checked_qubit_dim(n_cells);
  std::size_t d = 1;
  for (std::size_t x = 0; x < n_cells; ++x) {
    d *= cell_dim;
    if (d > (std::size_t{1} << kMaxQubits))
      throw DimensionError("lattice exceeds the dense storage cap");
  }
  return d;
}

void WrappedLattice::require_regular() const {
  if (!regular())
    throw PreconditionError("lattice of " + std::to_string(n_cells) +
                            " cells is below the regularity minimum (even, >= 6)");
}

ComplexMatrix local_unitary(const QubitQCAParams& p) {
  p.validate();
  const cplx i1(0.0, 1.0);
  const double c = std::cos(p.theta), s = std::sin(p.theta);
  const auto& n = p.axis;
  // cos(theta) I - i sin(theta) (n . sigma)
  return ComplexMatrix{{c - i1 * s * n[2], -i1 * s * (n[0] - i1 * n[1])},
                       {-i1 * s * (n[0] + i1 * n[1]), c + i1 * s * n[2]}};
}

ComplexMatrix controlled_phase(double phi) {
  const cplx d[4] = {1.0, 1.0, 1.0, std::polar(1.0, phi)};
  return ComplexMatrix::diagonal(d);
}

ComplexMatrix build_G(const QubitQCAParams& p) {
  const ComplexMatrix c = controlled_phase(p.phi);
  const ComplexMatrix u = local_unitary(p);
  return c * kron(u, u) * c;
}

std::vector<cplx> interaction_phases(double phi, std::size_t n_cells) {
  const std::size_t dim = checked_qubit_dim(n_cells);
  std::vector<cplx> d(dim);
  std::vector<cplx> by_count(n_cells + 1);
  for (std::size_t c = 0; c <= n_cells; ++c) by_count[c] = std::polar(1.0, phi * c);
  for (std::size_t j = 0; j < dim; ++j) {
    // Rotating j by one bit lines each cell up with its right neighbour.
    const std::size_t rot = ((j << 1) | (j >> (n_cells - 1))) & (dim - 1);
    d[j] = by_count[static_cast<std::size_t>(__builtin_popcountll(j & rot))];
  }
  return d;
}

void apply_one_cell(cplx* data, std::size_t n_qubits, std::size_t cols,
                    std::size_t q, const ComplexMatrix& u) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  const std::size_t s = std::size_t{1} << (n_qubits - 1 - q);
  const auto& k = kernels::active();
  for (std::size_t base = 0; base < dim; base += 2 * s)
    k.rotate_pair(data + base * cols, data + (base + s) * cols, s * cols, u.data());
}

void apply_two_cell(cplx* data, std::size_t n_qubits, std::size_t cols,
                    std::size_t qa, std::size_t qb, const ComplexMatrix& g) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  const std::size_t sa = std::size_t{1} << (n_qubits - 1 - qa);
  const std::size_t sb = std::size_t{1} << (n_qubits - 1 - qb);
  const std::size_t run = std::min(sa, sb);
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < dim; i += run) {
    if (i & (sa | sb)) continue;
    k.mix_quad(data + i * cols, data + (i + sb) * cols, data + (i + sa) * cols,
               data + (i + sa + sb) * cols, run * cols, g.data());
  }
}

void apply_diagonal(cplx* data, std::size_t dim, std::size_t cols,
                    std::span<const cplx> d) {
  const auto& k = kernels::active();
  if (cols == 1) {
    k.hadamard(data, d.data(), dim);
    return;
  }
  for (std::size_t i = 0; i < dim; ++i) k.scale(data + i * cols, cols, d[i]);
}

StepUnitary build_step_unitary(const QubitQCAParams& p, const WrappedLattice& lat) {
  if (lat.cell_dim != 2) throw PreconditionError("qubit steps need cell_dim 2");
  if (lat.n_cells < 2) throw PreconditionError("lattice too small for a ring step");
  QubitCircuit w(p, lat.n_cells);
  return {lat, w.dense(), p, "qubit-step"};
}

StepUnitary build_shift(const WrappedLattice& lat, long k) {
  std::string label = k == 0 ? "shift0" : (k > 0 ? "shift+" : "shift") + std::to_string(k);
  return {lat, translation_operator(lat.n_cells, k, lat.cell_dim), std::nullopt, label};
}

StepUnitary build_identity(const WrappedLattice& lat) {
  return {lat, ComplexMatrix::identity(lat.dim()), std::nullopt, "identity"};
}

StepUnitary compose(const StepUnitary& a, const StepUnitary& b) {
  if (a.lattice.n_cells != b.lattice.n_cells || a.lattice.cell_dim != b.lattice.cell_dim)
    throw DimensionError("composing steps on different lattices");
  return {a.lattice, a.matrix * b.matrix, std::nullopt, a.label + "*" + b.label};
}

StepUnitary step_power(const StepUnitary& s, std::size_t times) {
  if (times == 0) return build_identity(s.lattice);
  ComplexMatrix m = s.matrix;
  for (std::size_t t = 1; t < times; ++t) m = s.matrix * m;
  return {s.lattice, std::move(m), s.params, s.label + "^" + std::to_string(times)};
}

std::pair<StepUnitary, StepUnitary> margolus_layers(const QubitQCAParams& p,
                                                    const WrappedLattice& lat) {
  if (lat.n_cells % 2 != 0 || lat.n_cells < 2)
    throw PreconditionError("Margolus layers need an even ring");
  const std::size_t n = lat.n_cells, dim = lat.dim();
  const ComplexMatrix c = controlled_phase(p.phi);
  const ComplexMatrix u = local_unitary(p);
  const ComplexMatrix m2 = kron(u, u) * c;
  ComplexMatrix l1 = ComplexMatrix::identity(dim), l2 = ComplexMatrix::identity(dim);
  for (std::size_t x = 0; x < n; x += 2) apply_two_cell(l1.data(), n, dim, x, x + 1, c);
  for (std::size_t x = 1; x < n; x += 2)
    apply_two_cell(l2.data(), n, dim, x, (x + 1) % n, m2);
  return {StepUnitary{lat, std::move(l1), p, "margolus-layer1"},
          StepUnitary{lat, std::move(l2), p, "margolus-layer2"}};
}

ComplexMatrix margolus_product(const ComplexMatrix& m1, const ComplexMatrix& m2,
                               std::size_t n_cells) {
  if (n_cells % 2 != 0) throw PreconditionError("Margolus product needs an even ring");
  const std::size_t dim = checked_qubit_dim(n_cells);
  ComplexMatrix r = ComplexMatrix::identity(dim);
  for (std::size_t x = 0; x < n_cells; x += 2) apply_two_cell(r.data(), n_cells, dim, x, x + 1, m1);
  for (std::size_t x = 1; x < n_cells; x += 2)
    apply_two_cell(r.data(), n_cells, dim, x, (x + 1) % n_cells, m2);
  return r;
}

double translation_residual(const StepUnitary& s) {
  const auto perm = translation_permutation(s.lattice.n_cells, 1, s.lattice.cell_dim);
  return frobenius_distance(permute_conjugate(s.matrix, perm), s.matrix);
}

DenseAction::DenseAction(ComplexMatrix m) : m_(std::move(m)), adj_(m_.adjoint()) {
  if (!m_.square()) throw DimensionError("DenseAction needs a square matrix");
}

void DenseAction::apply(std::vector<cplx>& v) const {
  std::vector<cplx> out(m_.rows());
  kernels::active().gemm(m_.data(), v.data(), out.data(), m_.rows(), m_.cols(), 1);
  v.swap(out);
}

void DenseAction::apply_adjoint(std::vector<cplx>& v) const {
  std::vector<cplx> out(adj_.rows());
  kernels::active().gemm(adj_.data(), v.data(), out.data(), adj_.rows(), adj_.cols(), 1);
  v.swap(out);
}

QubitCircuit::QubitCircuit(const QubitQCAParams& p, std::size_t n_cells, std::size_t power)
    : n_(n_cells),
      dim_(checked_qubit_dim(n_cells)),
      power_(power),
      u_(local_unitary(p)),
      u_adj_(u_.adjoint()),
      d_(interaction_phases(p.phi, n_cells)),
      d_conj_(d_.size()) {
  for (std::size_t i = 0; i < d_.size(); ++i) d_conj_[i] = std::conj(d_[i]);
}

void QubitCircuit::apply(std::vector<cplx>& v) const {
  if (v.size() != dim_) throw DimensionError("QubitCircuit::apply: vector size");
  for (std::size_t t = 0; t < power_; ++t) {
    apply_diagonal(v.data(), dim_, 1, d_);
    for (std::size_t q = 0; q < n_; ++q) apply_one_cell(v.data(), n_, 1, q, u_);
  }
}

void QubitCircuit::apply_adjoint(std::vector<cplx>& v) const {
  if (v.size() != dim_) throw DimensionError("QubitCircuit::apply_adjoint: vector size");
  for (std::size_t t = 0; t < power_; ++t) {
    for (std::size_t q = 0; q < n_; ++q) apply_one_cell(v.data(), n_, 1, q, u_adj_);
    apply_diagonal(v.data(), dim_, 1, d_conj_);
  }
}

ComplexMatrix QubitCircuit::dense() const {
  ComplexMatrix m = ComplexMatrix::identity(dim_);
  for (std::size_t t = 0; t < power_; ++t) {
    apply_diagonal(m.data(), dim_, dim_, d_);
    for (std::size_t q = 0; q < n_; ++q) apply_one_cell(m.data(), n_, dim_, q, u_);
  }
  return m;
}

}  // namespace qcaflow
