// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <cstring>
#include <random>
#include <vector>

#include "qcaflow/kernels.hpp"
#include "qcaflow/linalg.hpp"

using qcaflow::cplx;
namespace k = qcaflow::kernels;

namespace {

std::vector<cplx> rnd(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

double maxdiff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

const std::size_t kLens[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 33, 64, 255};

// Runs `fn` with the scalar table and with the AVX2 table on the same inputs.
template <class Fn>
void both(Fn fn) {
  fn(k::scalar_table());
  if (const k::KernelTable* v = k::avx2_table()) fn(*v);
}

}  // namespace

TEST_CASE("scalar gemm matches the triple loop") {
  std::mt19937_64 rng(1);
  for (auto [m, kk, n] : {std::array<std::size_t, 3>{1, 1, 1}, {3, 5, 7}, {8, 8, 8}, {5, 1, 9},
                          {16, 3, 1}}) {
    const auto a = rnd(m * kk, rng), b = rnd(kk * n, rng);
    std::vector<cplx> c(m * n), ref(m * n);
    k::scalar_table().gemm(a.data(), b.data(), c.data(), m, kk, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t t = 0; t < kk; ++t) ref[i * n + j] += a[i * kk + t] * b[t * n + j];
    CHECK(maxdiff(c, ref) < 1e-12);
  }
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  const k::KernelTable* v = k::avx2_table();
  if (!v) {
    MESSAGE("AVX2 table unavailable on this host; equivalence test skipped");
    return;
  }
  const k::KernelTable& s = k::scalar_table();
  std::mt19937_64 rng(7);
  for (std::size_t len : kLens) {
    CAPTURE(len);
    const auto x0 = rnd(len, rng), y0 = rnd(len, rng), d = rnd(len, rng);
    const auto u = rnd(4, rng), g = rnd(16, rng);
    const cplx sc(0.3, -1.7);
    {
      auto xs = x0, ys = y0, xv = x0, yv = y0;
      s.rotate_pair(xs.data(), ys.data(), len, u.data());
      v->rotate_pair(xv.data(), yv.data(), len, u.data());
      CHECK(maxdiff(xs, xv) < 1e-12);
      CHECK(maxdiff(ys, yv) < 1e-12);
    }
    {
      std::vector<std::vector<cplx>> ps(4), pv(4);
      for (int r = 0; r < 4; ++r) ps[r] = pv[r] = rnd(len, rng);
      s.mix_quad(ps[0].data(), ps[1].data(), ps[2].data(), ps[3].data(), len, g.data());
      v->mix_quad(pv[0].data(), pv[1].data(), pv[2].data(), pv[3].data(), len, g.data());
      for (int r = 0; r < 4; ++r) CHECK(maxdiff(ps[r], pv[r]) < 1e-12);
    }
    {
      auto xs = x0, xv = x0;
      s.scale(xs.data(), len, sc);
      v->scale(xv.data(), len, sc);
      CHECK(maxdiff(xs, xv) < 1e-12);
    }
    {
      auto xs = x0, xv = x0;
      s.hadamard(xs.data(), d.data(), len);
      v->hadamard(xv.data(), d.data(), len);
      CHECK(maxdiff(xs, xv) < 1e-12);
    }
    {
      auto ys = y0, yv = y0;
      s.axpy(ys.data(), x0.data(), len, sc);
      v->axpy(yv.data(), x0.data(), len, sc);
      CHECK(maxdiff(ys, yv) < 1e-12);
    }
    CHECK(std::abs(s.dot(x0.data(), y0.data(), len) - v->dot(x0.data(), y0.data(), len)) <
          1e-12 * (1 + double(len)));
    CHECK(std::abs(s.dist2(x0.data(), y0.data(), len) - v->dist2(x0.data(), y0.data(), len)) <
          1e-12 * (1 + double(len)));
  }
  for (auto [m, kk, n] : {std::array<std::size_t, 3>{1, 1, 1}, {2, 3, 1}, {3, 5, 7}, {4, 4, 5},
                          {16, 16, 16}, {7, 9, 33}, {1, 64, 3}}) {
    CAPTURE(m);
    CAPTURE(n);
    auto a = rnd(m * kk, rng);
    a[0] = 0;  // exercises the zero-skip path
    const auto b = rnd(kk * n, rng);
    std::vector<cplx> cs(m * n), cv(m * n);
    s.gemm(a.data(), b.data(), cs.data(), m, kk, n);
    v->gemm(a.data(), b.data(), cv.data(), m, kk, n);
    CHECK(maxdiff(cs, cv) < 1e-12 * double(kk));
  }
}

TEST_CASE("kernels leave memory past the end untouched") {
  std::mt19937_64 rng(3);
  both([&](const k::KernelTable& t) {
    for (std::size_t len : {1, 3, 5, 6, 7}) {
      auto x = rnd(len + 2, rng);
      const auto d = rnd(len + 2, rng);
      const cplx g0 = x[len], g1 = x[len + 1];
      t.hadamard(x.data(), d.data(), len);
      t.scale(x.data(), len, cplx(2, 1));
      CHECK(x[len] == g0);
      CHECK(x[len + 1] == g1);
    }
  });
}

TEST_CASE("dot conjugates its first argument") {
  both([](const k::KernelTable& t) {
    const cplx a[] = {{0, 1}, {1, 0}, {2, 0}};
    const cplx b[] = {{0, 1}, {0, 1}, {1, 1}};
    const cplx r = t.dot(a, b, 3);
    CHECK(std::abs(r - cplx(1, 1) - cplx(2, 2)) < 1e-15);
  });
}

TEST_CASE("ISA selection honours the environment override") {
  const char* env = std::getenv("QCAFLOW_ISA");
  if (env && std::strcmp(env, "scalar") == 0) {
    CHECK(k::active_isa() == k::Isa::scalar);
    CHECK(std::string(k::active().name) == "scalar");
  } else if (k::avx2_table()) {
    CHECK(k::active_isa() == k::Isa::avx2);
  }
  k::force_isa(k::Isa::scalar);
  CHECK(k::active_isa() == k::Isa::scalar);
  // Matrix products through the public type follow the active table.
  qcaflow::ComplexMatrix a{{1, 2}, {3, 4}}, b{{0, 1}, {1, 0}};
  const auto c = a * b;
  CHECK(c(0, 0) == cplx(2));
  CHECK(c(1, 1) == cplx(3));
  if (k::avx2_table()) {
    k::force_isa(k::Isa::avx2);
    CHECK(k::active_isa() == k::Isa::avx2);
    const auto c2 = a * b;
    CHECK(std::abs(c2(0, 1) - cplx(1)) < 1e-15);
  }
}
