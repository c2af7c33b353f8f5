// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
#include "qcaflow/kernels.hpp"

#include <algorithm>

namespace qcaflow::kernels {
namespace {

void axpy_ref(cplx* y, const cplx* x, std::size_t len, cplx s) {
  for (std::size_t i = 0; i < len; ++i) y[i] += s * x[i];
}

void gemm_ref(const cplx* a, const cplx* b, cplx* c, std::size_t m,
              std::size_t k, std::size_t n) {
  std::fill(c, c + m * n, cplx{});
  for (std::size_t i = 0; i < m; ++i) {
    cplx* ci = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const cplx s = a[i * k + p];
      // Step operators are mostly permutations and diagonals; skipping
      // exact zeros is the cheapest sparsity we can get for free.
      if (s == cplx{}) continue;
      axpy_ref(ci, b + p * n, n, s);
    }
  }
}

void rotate_pair_ref(cplx* x, cplx* y, std::size_t len, const cplx* u) {
  for (std::size_t i = 0; i < len; ++i) {
    const cplx a = x[i], b = y[i];
    x[i] = u[0] * a + u[1] * b;
    y[i] = u[2] * a + u[3] * b;
  }
}

void mix_quad_ref(cplx* p0, cplx* p1, cplx* p2, cplx* p3, std::size_t len,
                  const cplx* g) {
  for (std::size_t i = 0; i < len; ++i) {
    const cplx v[4] = {p0[i], p1[i], p2[i], p3[i]};
    cplx* out[4] = {p0 + i, p1 + i, p2 + i, p3 + i};
    for (int r = 0; r < 4; ++r)
      *out[r] = g[4 * r] * v[0] + g[4 * r + 1] * v[1] + g[4 * r + 2] * v[2] +
                g[4 * r + 3] * v[3];
  }
}

void scale_ref(cplx* x, std::size_t len, cplx s) {
  for (std::size_t i = 0; i < len; ++i) x[i] *= s;
}

void hadamard_ref(cplx* x, const cplx* d, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) x[i] *= d[i];
}

cplx dot_ref(const cplx* a, const cplx* b, std::size_t len) {
  cplx acc{};
  for (std::size_t i = 0; i < len; ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double dist2_ref(const cplx* a, const cplx* b, std::size_t len) {
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) acc += std::norm(a[i] - b[i]);
  return acc;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{"scalar",     gemm_ref,     rotate_pair_ref,
                             mix_quad_ref, scale_ref,    hadamard_ref,
                             axpy_ref,     dot_ref,      dist2_ref};
  return t;
}

}  // namespace qcaflow::kernels
