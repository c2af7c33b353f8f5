// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
#include "qcaflow/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "qcaflow/angle.hpp"
#include "qcaflow/errors.hpp"

namespace qcaflow {

PointReport evaluate_point(const QubitQCAParams& p, std::size_t cells, double tol, Route route,
                           bool verdict_only) {
  if (cells % 2 != 0 || cells < 6)
    throw PreconditionError("renormalizability checks need an even ring of >= 6 cells");
  if (route == Route::automatic) route = cells <= 10 ? Route::dense : Route::matrix_free;
  PointReport r;
  r.params = p;
  r.cells = cells;
  r.predicate = closed_form_renormalizable(p, tol);
  const std::size_t f = cells / 2;
  const auto tiles = enumerate_tile_projections(p);
  if (route == Route::dense) {
    const StepUnitary w2{WrappedLattice{cells, 2}, QubitCircuit(p, cells, 2).dense(), p,
                         "qubit-step^2"};
    for (const auto& t : tiles) {
      const CommutationResult c = commutation_check(w2, t, tol);
      r.tiles.push_back({t.label, c.residual, c.passes, false});
    }
  } else {
    const QubitCircuit w2(p, cells, 2);
    for (const auto& t : tiles) {
      // Once a witness is found the verdict is settled; remaining tiles
      // still get a (possibly partial) residual.
      const CommutationResult c = commutation_check(w2, t, f, tol, verdict_only);
      r.tiles.push_back({t.label, c.residual, c.passes, c.partial});
    }
  }
  for (const auto& t : r.tiles) {
    if (t.passes) r.witnesses.push_back(t.label);
    r.max_residual = std::max(r.max_residual, t.residual);
  }
  r.numeric = !r.witnesses.empty();
  return r;
}

std::vector<QubitQCAParams> grid_points(const ScanGrid& g) {
  if (g.phi_steps < 1 || g.theta_steps < 1 || g.axes.empty())
    throw ConfigError("scan grid needs phi_steps, theta_steps >= 1 and at least one axis");
  std::vector<QubitQCAParams> out;
  out.reserve(g.axes.size() * g.phi_steps * g.theta_steps);
  for (const auto& axis : g.axes)
    for (std::size_t i = 0; i < g.phi_steps; ++i)
      for (std::size_t j = 0; j < g.theta_steps; ++j)
        out.push_back(QubitQCAParams::from_axis(2 * kPi * double(i) / double(g.phi_steps),
                                                2 * kPi * double(j) / double(g.theta_steps),
                                                axis));
  return out;
}

std::size_t ScanReport::disagreements() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const PointReport& r) { return !r.agrees(); }));
}

std::size_t default_workers() {
  if (const char* env = std::getenv("QCAFLOW_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!err) err = std::current_exception();
          next.store(n);
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

ScanReport run_scan(const ScanGrid& g, std::size_t cells, double tol, std::size_t workers) {
  ScanReport rep;
  rep.grid = g;
  rep.cells = cells;
  rep.tolerance = tol;
  const auto pts = grid_points(g);
  rep.rows.resize(pts.size());
  parallel_for(pts.size(), workers,
               [&](std::size_t i) { rep.rows[i] = evaluate_point(pts[i], cells, tol); });
  return rep;
}

}  // namespace qcaflow
