// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// AVX2+FMA kernels. One __m256d holds two complex<double> as
// [re0, im0, re1, im1]; odd lengths finish with the scalar tail.
#include <immintrin.h>

#include <algorithm>

#include "qcaflow/kernels.hpp"

namespace qcaflow::kernels {
namespace {

inline double* dp(cplx* p) { return reinterpret_cast<double*>(p); }
inline const double* dp(const cplx* p) {
  return reinterpret_cast<const double*>(p);
}

// x * (sr + i si) for both packed complexes.
inline __m256d cmul_bcast(__m256d x, __m256d sr, __m256d si) {
  const __m256d xs = _mm256_permute_pd(x, 0x5);
  return _mm256_fmaddsub_pd(x, sr, _mm256_mul_pd(xs, si));
}

// Lane-wise x * d.
inline __m256d cmul(__m256d x, __m256d d) {
  const __m256d dr = _mm256_movedup_pd(d);
  const __m256d di = _mm256_permute_pd(d, 0xF);
  const __m256d xs = _mm256_permute_pd(x, 0x5);
  return _mm256_fmaddsub_pd(x, dr, _mm256_mul_pd(xs, di));
}

inline void axpy_body(cplx* y, const cplx* x, std::size_t len, __m256d sr,
                      __m256d si, cplx s) {
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    __m256d x0 = _mm256_loadu_pd(dp(x + i));
    __m256d x1 = _mm256_loadu_pd(dp(x + i + 2));
    __m256d y0 = _mm256_loadu_pd(dp(y + i));
    __m256d y1 = _mm256_loadu_pd(dp(y + i + 2));
    _mm256_storeu_pd(dp(y + i), _mm256_add_pd(y0, cmul_bcast(x0, sr, si)));
    _mm256_storeu_pd(dp(y + i + 2), _mm256_add_pd(y1, cmul_bcast(x1, sr, si)));
  }
  for (; i + 2 <= len; i += 2) {
    __m256d x0 = _mm256_loadu_pd(dp(x + i));
    __m256d y0 = _mm256_loadu_pd(dp(y + i));
    _mm256_storeu_pd(dp(y + i), _mm256_add_pd(y0, cmul_bcast(x0, sr, si)));
  }
  for (; i < len; ++i) y[i] += s * x[i];
}

void axpy_avx2(cplx* y, const cplx* x, std::size_t len, cplx s) {
  axpy_body(y, x, len, _mm256_set1_pd(s.real()), _mm256_set1_pd(s.imag()), s);
}

void gemm_avx2(const cplx* a, const cplx* b, cplx* c, std::size_t m,
               std::size_t k, std::size_t n) {
  std::fill(c, c + m * n, cplx{});
  for (std::size_t i = 0; i < m; ++i) {
    cplx* ci = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const cplx s = a[i * k + p];
      if (s == cplx{}) continue;
      axpy_body(ci, b + p * n, n, _mm256_set1_pd(s.real()),
                _mm256_set1_pd(s.imag()), s);
    }
  }
}

void rotate_pair_avx2(cplx* x, cplx* y, std::size_t len, const cplx* u) {
  const __m256d r0 = _mm256_set1_pd(u[0].real()), i0 = _mm256_set1_pd(u[0].imag());
  const __m256d r1 = _mm256_set1_pd(u[1].real()), i1 = _mm256_set1_pd(u[1].imag());
  const __m256d r2 = _mm256_set1_pd(u[2].real()), i2 = _mm256_set1_pd(u[2].imag());
  const __m256d r3 = _mm256_set1_pd(u[3].real()), i3 = _mm256_set1_pd(u[3].imag());
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    const __m256d a = _mm256_loadu_pd(dp(x + i));
    const __m256d b = _mm256_loadu_pd(dp(y + i));
    _mm256_storeu_pd(dp(x + i), _mm256_add_pd(cmul_bcast(a, r0, i0),
                                              cmul_bcast(b, r1, i1)));
    _mm256_storeu_pd(dp(y + i), _mm256_add_pd(cmul_bcast(a, r2, i2),
                                              cmul_bcast(b, r3, i3)));
  }
  for (; i < len; ++i) {
    const cplx a = x[i], b = y[i];
    x[i] = u[0] * a + u[1] * b;
    y[i] = u[2] * a + u[3] * b;
  }
}

void mix_quad_avx2(cplx* p0, cplx* p1, cplx* p2, cplx* p3, std::size_t len,
                   const cplx* g) {
  cplx* rows[4] = {p0, p1, p2, p3};
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    __m256d v[4];
    for (int s = 0; s < 4; ++s) v[s] = _mm256_loadu_pd(dp(rows[s] + i));
    for (int r = 0; r < 4; ++r) {
      __m256d acc = _mm256_setzero_pd();
      for (int s = 0; s < 4; ++s) {
        const cplx c = g[4 * r + s];
        acc = _mm256_add_pd(acc, cmul_bcast(v[s], _mm256_set1_pd(c.real()),
                                            _mm256_set1_pd(c.imag())));
      }
      _mm256_storeu_pd(dp(rows[r] + i), acc);
    }
  }
  for (; i < len; ++i) {
    const cplx v[4] = {p0[i], p1[i], p2[i], p3[i]};
    for (int r = 0; r < 4; ++r)
      rows[r][i] = g[4 * r] * v[0] + g[4 * r + 1] * v[1] +
                   g[4 * r + 2] * v[2] + g[4 * r + 3] * v[3];
  }
}

void scale_avx2(cplx* x, std::size_t len, cplx s) {
  const __m256d sr = _mm256_set1_pd(s.real()), si = _mm256_set1_pd(s.imag());
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2)
    _mm256_storeu_pd(dp(x + i), cmul_bcast(_mm256_loadu_pd(dp(x + i)), sr, si));
  for (; i < len; ++i) x[i] *= s;
}

void hadamard_avx2(cplx* x, const cplx* d, std::size_t len) {
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2)
    _mm256_storeu_pd(dp(x + i), cmul(_mm256_loadu_pd(dp(x + i)),
                                     _mm256_loadu_pd(dp(d + i))));
  for (; i < len; ++i) x[i] *= d[i];
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

cplx dot_avx2(const cplx* a, const cplx* b, std::size_t len) {
  __m256d re = _mm256_setzero_pd();  // [ar br, ai bi, ...]
  __m256d im = _mm256_setzero_pd();  // [ar bi, ai br, ...]
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    const __m256d va = _mm256_loadu_pd(dp(a + i));
    const __m256d vb = _mm256_loadu_pd(dp(b + i));
    re = _mm256_fmadd_pd(va, vb, re);
    im = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0x5), im);
  }
  const __m256d sign = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
  cplx acc(hsum(re), hsum(_mm256_mul_pd(im, sign)));
  for (; i < len; ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double dist2_avx2(const cplx* a, const cplx* b, std::size_t len) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(dp(a + i)),
                                    _mm256_loadu_pd(dp(b + i)));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < len; ++i) s += std::norm(a[i] - b[i]);
  return s;
}

}  // namespace

const KernelTable& avx2_table_impl() {
  static const KernelTable t{"avx2",        gemm_avx2,     rotate_pair_avx2,
                             mix_quad_avx2, scale_avx2,    hadamard_avx2,
                             axpy_avx2,     dot_avx2,      dist2_avx2};
  return t;
}

}  // namespace qcaflow::kernels
