// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Hot loops behind ComplexMatrix and the matrix-free circuit code.
// Every entry has a scalar reference and, on x86-64 with AVX2+FMA, a
// vectorized twin. The table is chosen once at first use; set
// QCAFLOW_ISA=scalar to pin the reference path.
#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace qcaflow::kernels {

using cplx = std::complex<double>;

struct KernelTable {
  const char* name;
  // c[m x n] = a[m x k] * b[k x n], all row-major and densely packed.
  void (*gemm)(const cplx* a, const cplx* b, cplx* c, std::size_t m,
               std::size_t k, std::size_t n);
  // (x, y) <- (u00 x + u01 y, u10 x + u11 y), elementwise.
  void (*rotate_pair)(cplx* x, cplx* y, std::size_t len, const cplx* u);
  // Four-row mixing: p[r] <- sum_s g[4r+s] p[s].
  void (*mix_quad)(cplx* p0, cplx* p1, cplx* p2, cplx* p3, std::size_t len,
                   const cplx* g);
  void (*scale)(cplx* x, std::size_t len, cplx s);
  // x[i] *= d[i]
  void (*hadamard)(cplx* x, const cplx* d, std::size_t len);
  // y += s * x
  void (*axpy)(cplx* y, const cplx* x, std::size_t len, cplx s);
  // sum conj(a[i]) b[i]
  cplx (*dot)(const cplx* a, const cplx* b, std::size_t len);
  // sum |a[i] - b[i]|^2
  double (*dist2)(const cplx* a, const cplx* b, std::size_t len);
};

enum class Isa { scalar, avx2 };

const KernelTable& scalar_table();
// nullptr when the build or the host lacks AVX2+FMA.
const KernelTable* avx2_table();

const KernelTable& active();
Isa active_isa();
// Test hook. Throws std::runtime_error if the ISA is unavailable.
void force_isa(Isa isa);
std::string_view isa_name(Isa isa);

}  // namespace qcaflow::kernels
