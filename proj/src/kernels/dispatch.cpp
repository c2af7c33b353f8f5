// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "qcaflow/kernels.hpp"

namespace qcaflow::kernels {

#ifdef QCAFLOW_BUILD_AVX2
const KernelTable& avx2_table_impl();
#endif

const KernelTable* avx2_table() {
#ifdef QCAFLOW_BUILD_AVX2
  static const bool ok = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return ok ? &avx2_table_impl() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable* pick_default() {
  const char* env = std::getenv("QCAFLOW_ISA");
  if (env && std::string(env) == "scalar") return &scalar_table();
  if (const KernelTable* t = avx2_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> s{pick_default()};
  return s;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

Isa active_isa() {
  return &active() == &scalar_table() ? Isa::scalar : Isa::avx2;
}

void force_isa(Isa isa) {
  if (isa == Isa::scalar) {
    slot().store(&scalar_table(), std::memory_order_release);
    return;
  }
  const KernelTable* t = avx2_table();
  if (!t) throw std::runtime_error("AVX2 kernels unavailable on this host");
  slot().store(t, std::memory_order_release);
}

std::string_view isa_name(Isa isa) {
  return isa == Isa::scalar ? "scalar" : "avx2";
}

}  // namespace qcaflow::kernels
