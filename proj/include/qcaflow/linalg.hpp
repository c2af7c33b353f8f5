// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Dense complex matrices and the handful of tensor-product tools the rest
// of the library is built on.
//
// Qubit ordering: cell 0 is the most significant digit, so the basis index
// of |k0 k1 ... k_{n-1}> is sum_x k_x d^(n-1-x).
#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qcaflow {

using cplx = std::complex<double>;

inline constexpr std::size_t kMaxQubits = 14;
inline constexpr double kDefaultTol = 1e-9;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const cplx> d);
  // Column vector.
  static ComplexMatrix column(std::span<const cplx> v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  bool square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  cplx* data() { return data_.data(); }
  const cplx* data() const { return data_.data(); }
  cplx* row(std::size_t i) { return data_.data() + i * cols_; }
  const cplx* row(std::size_t i) const { return data_.data() + i * cols_; }
  const std::vector<cplx>& values() const { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  cplx trace() const;
  double frobenius_norm() const;
  // Largest |entry| off the diagonal.
  double max_offdiag() const;
  bool is_diagonal(double tol) const;
  // ||A^dag A - I||_F
  double unitarity_residual() const;
  bool is_unitary(double tol = 1e-10) const { return unitarity_residual() < tol; }

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(ComplexMatrix a, cplx s);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);
// Hilbert-Schmidt inner product tr(a^dag b).
cplx hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron_power(const ComplexMatrix& a, std::size_t times);
std::vector<cplx> kron(std::span<const cplx> a, std::span<const cplx> b);

// Pauli matrices: 0 -> I, 1 -> X, 2 -> Y, 3 -> Z.
ComplexMatrix pauli(int k);
ComplexMatrix swap_gate(std::size_t d = 2);

struct Bipartition {
  std::size_t dim_left;
  std::size_t dim_right;
  std::size_t total() const { return dim_left * dim_right; }
};

enum class Side { left, right };

struct SchmidtTerm {
  double weight;
  ComplexMatrix left;
  ComplexMatrix right;
};

struct OperatorSchmidt {
  std::vector<SchmidtTerm> terms;
  double tolerance;  // relative cutoff that was applied
  double cutoff;     // absolute singular-value cutoff that resulted
  std::size_t rank() const { return terms.size(); }
  ComplexMatrix reconstruct() const;
};

// R[(i,i'),(j,j')] = m[(i,j),(i',j')]: left-factor indices become rows.
ComplexMatrix realign(const ComplexMatrix& m, Bipartition split);

// Terms with singular value <= tol * s_max are dropped. The phase of each
// pair is fixed so the largest-magnitude entry of the left factor is real
// and positive, which makes the output deterministic.
OperatorSchmidt operator_schmidt(const ComplexMatrix& m, Bipartition split,
                                 double tol = kDefaultTol);

struct PhaseMatch {
  bool equal;
  double alpha;
  double distance;  // ||e^{i alpha} a - b||_F
};
PhaseMatch phase_equal(const ComplexMatrix& a, const ComplexMatrix& b,
                       double tol = kDefaultTol);

ComplexMatrix partial_trace(const ComplexMatrix& m, Bipartition split,
                            Side traced);

// Unitary relabelling cell x -> x + shift (mod n) on (C^d)^{n}.
ComplexMatrix translation_operator(std::size_t n_cells, long shift,
                                   std::size_t cell_dim = 2);
// Basis-index image of the same relabelling.
std::vector<std::size_t> translation_permutation(std::size_t n_cells,
                                                 long shift,
                                                 std::size_t cell_dim = 2);
// P m P^dag for the permutation matrix P|j> = |perm[j]>.
ComplexMatrix permute_conjugate(const ComplexMatrix& m,
                                std::span<const std::size_t> perm);

// Guards the dense cap: dimension of n qubits, or DimensionError.
std::size_t checked_qubit_dim(std::size_t n_qubits);

}  // namespace qcaflow
