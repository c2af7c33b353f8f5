// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
#include "qcaflow/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eigen_bridge.hpp"
#include "qcaflow/errors.hpp"
#include "qcaflow/kernels.hpp"

namespace qcaflow {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::vector<cplx> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols)
    throw DimensionError("matrix data has " + std::to_string(data_.size()) +
                         " entries, expected " + std::to_string(rows * cols));
}

ComplexMatrix::ComplexMatrix(
    std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::column(std::span<const cplx> v) {
  return ComplexMatrix(v.size(), 1, std::vector<cplx>(v.begin(), v.end()));
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

cplx ComplexMatrix::trace() const {
  cplx t{};
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  return std::sqrt(kernels::active().dot(data(), data(), size()).real());
}

double ComplexMatrix::max_offdiag() const {
  double m = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (i != j) m = std::max(m, std::abs((*this)(i, j)));
  return m;
}

bool ComplexMatrix::is_diagonal(double tol) const { return max_offdiag() < tol; }

double ComplexMatrix::unitarity_residual() const {
  if (!square()) throw DimensionError("unitarity of a non-square matrix");
  ComplexMatrix g = adjoint() * (*this);
  for (std::size_t i = 0; i < rows_; ++i) g(i, i) -= 1.0;
  return g.frobenius_norm();
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix sum");
  kernels::active().axpy(data(), o.data(), size(), 1.0);
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix difference");
  kernels::active().axpy(data(), o.data(), size(), -1.0);
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  kernels::active().scale(data(), size(), s);
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows())
    throw DimensionError("product of " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " and " +
                         std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  ComplexMatrix c(a.rows(), b.cols());
  kernels::active().gemm(a.data(), b.data(), c.data(), a.rows(), a.cols(),
                         b.cols());
  return c;
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("distance between differently shaped matrices");
  return std::sqrt(kernels::active().dist2(a.data(), b.data(), a.size()));
}

cplx hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.size() != b.size()) throw DimensionError("HS inner product");
  return kernels::active().dot(a.data(), b.data(), a.size());
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b) {
  return frobenius_distance(a * b, b * a);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx s = a(i, j);
      if (s == cplx{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k) {
        cplx* dst = r.row(i * b.rows() + k) + j * b.cols();
        const cplx* src = b.row(k);
        for (std::size_t l = 0; l < b.cols(); ++l) dst[l] = s * src[l];
      }
    }
  return r;
}

ComplexMatrix kron_power(const ComplexMatrix& a, std::size_t times) {
  ComplexMatrix r = ComplexMatrix::identity(1);
  for (std::size_t t = 0; t < times; ++t) r = kron(r, a);
  return r;
}

std::vector<cplx> kron(std::span<const cplx> a, std::span<const cplx> b) {
  std::vector<cplx> r(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i * b.size() + j] = a[i] * b[j];
  return r;
}

ComplexMatrix pauli(int k) {
  const cplx i1(0.0, 1.0);
  switch (k) {
    case 0: return {{1, 0}, {0, 1}};
    case 1: return {{0, 1}, {1, 0}};
    case 2: return {{0, -i1}, {i1, 0}};
    case 3: return {{1, 0}, {0, -1}};
  }
  throw PreconditionError("pauli index must be 0..3");
}

ComplexMatrix swap_gate(std::size_t d) {
  ComplexMatrix s(d * d, d * d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) s(b * d + a, a * d + b) = 1.0;
  return s;
}

ComplexMatrix OperatorSchmidt::reconstruct() const {
  if (terms.empty()) return {};
  const auto& t0 = terms.front();
  ComplexMatrix r(t0.left.rows() * t0.right.rows(),
                  t0.left.cols() * t0.right.cols());
  for (const auto& t : terms) r += kron(t.left, t.right) * cplx(t.weight);
  return r;
}

ComplexMatrix realign(const ComplexMatrix& m, Bipartition split) {
  const std::size_t dl = split.dim_left, dr = split.dim_right;
  if (!m.square() || m.rows() != split.total())
    throw DimensionError("realign: matrix " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + " does not match split " +
                         std::to_string(dl) + "|" + std::to_string(dr));
  ComplexMatrix r(dl * dl, dr * dr);
  for (std::size_t i = 0; i < dl; ++i)
    for (std::size_t j = 0; j < dr; ++j)
      for (std::size_t ip = 0; ip < dl; ++ip)
        for (std::size_t jp = 0; jp < dr; ++jp)
          r(i * dl + ip, j * dr + jp) = m(i * dr + j, ip * dr + jp);
  return r;
}

OperatorSchmidt operator_schmidt(const ComplexMatrix& m, Bipartition split,
                                 double tol) {
  const std::size_t dl = split.dim_left, dr = split.dim_right;
  const Eigen::MatrixXcd r = detail::to_eigen(realign(m, split));
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  OperatorSchmidt out{{}, tol, 0.0};
  if (s.size() == 0 || s(0) == 0.0) return out;
  out.cutoff = tol * s(0);
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) <= out.cutoff) break;
    ComplexMatrix left(dl, dl), right(dr, dr);
    for (std::size_t i = 0; i < dl; ++i)
      for (std::size_t ip = 0; ip < dl; ++ip) left(i, ip) = svd.matrixU()(i * dl + ip, k);
    for (std::size_t j = 0; j < dr; ++j)
      for (std::size_t jp = 0; jp < dr; ++jp)
        right(j, jp) = std::conj(svd.matrixV()(j * dr + jp, k));
    std::size_t arg = 0;
    for (std::size_t e = 1; e < left.size(); ++e)
      if (std::abs(left.data()[e]) > std::abs(left.data()[arg]) + 1e-12) arg = e;
    const cplx lead = left.data()[arg];
    const cplx fix = std::conj(lead) / std::abs(lead);
    left *= fix;
    right *= std::conj(fix);
    out.terms.push_back({s(k), std::move(left), std::move(right)});
  }
  return out;
}

PhaseMatch phase_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("phase_equal on differently shaped matrices");
  const cplx ov = hs_inner(a, b);
  const double scale = a.frobenius_norm() * b.frobenius_norm();
  if (std::abs(ov) <= 1e-14 * std::max(scale, 1e-300))
    return {false, 0.0, frobenius_distance(a, b)};
  const double alpha = std::arg(ov);
  const double dist = frobenius_distance(a * std::polar(1.0, alpha), b);
  return {dist < tol, alpha, dist};
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Bipartition split, Side traced) {
  const std::size_t dl = split.dim_left, dr = split.dim_right;
  if (!m.square() || m.rows() != split.total())
    throw DimensionError("partial_trace: split does not match matrix");
  if (traced == Side::left) {
    ComplexMatrix r(dr, dr);
    for (std::size_t i = 0; i < dl; ++i)
      for (std::size_t j = 0; j < dr; ++j)
        for (std::size_t jp = 0; jp < dr; ++jp) r(j, jp) += m(i * dr + j, i * dr + jp);
    return r;
  }
  ComplexMatrix r(dl, dl);
  for (std::size_t i = 0; i < dl; ++i)
    for (std::size_t ip = 0; ip < dl; ++ip)
      for (std::size_t j = 0; j < dr; ++j) r(i, ip) += m(i * dr + j, ip * dr + j);
  return r;
}

std::vector<std::size_t> translation_permutation(std::size_t n_cells, long shift,
                                                 std::size_t cell_dim) {
  if (n_cells < 1) throw PreconditionError("translation needs at least one cell");
  std::size_t dim = 1;
  for (std::size_t x = 0; x < n_cells; ++x) dim *= cell_dim;
  const long n = static_cast<long>(n_cells);
  const std::size_t s = static_cast<std::size_t>(((shift % n) + n) % n);
  std::vector<std::size_t> weight(n_cells);
  std::size_t w = 1;
  for (std::size_t x = n_cells; x-- > 0;) {
    weight[x] = w;
    w *= cell_dim;
  }
  std::vector<std::size_t> perm(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    std::size_t out = 0, rest = j;
    for (std::size_t x = n_cells; x-- > 0;) {
      const std::size_t digit = rest % cell_dim;
      rest /= cell_dim;
      out += digit * weight[(x + s) % n_cells];
    }
    perm[j] = out;
  }
  return perm;
}

ComplexMatrix translation_operator(std::size_t n_cells, long shift,
                                   std::size_t cell_dim) {
  if (n_cells < 2) throw PreconditionError("translation_operator needs n_cells >= 2");
  const auto perm = translation_permutation(n_cells, shift, cell_dim);
  ComplexMatrix t(perm.size(), perm.size());
  for (std::size_t j = 0; j < perm.size(); ++j) t(perm[j], j) = 1.0;
  return t;
}

ComplexMatrix permute_conjugate(const ComplexMatrix& m,
                                std::span<const std::size_t> perm) {
  if (!m.square() || perm.size() != m.rows())
    throw DimensionError("permute_conjugate: permutation size mismatch");
  ComplexMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(perm[i], perm[j]) = m(i, j);
  return r;
}

std::size_t checked_qubit_dim(std::size_t n_qubits) {
  if (n_qubits > kMaxQubits)
    throw DimensionError("dense storage is capped at " + std::to_string(kMaxQubits) +
                         " qubits, requested " + std::to_string(n_qubits));
  return std::size_t{1} << n_qubits;
}

}  // namespace qcaflow
