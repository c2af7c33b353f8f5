// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Per-point renormalizability verdicts and the grid driver behind
// `qcaflow scan` and the acceptance suite.
#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "qcaflow/model.hpp"
#include "qcaflow/renorm.hpp"

namespace qcaflow {

struct TileVerdict {
  std::string label;
  double residual = 0.0;
  bool passes = false;
  bool partial = false;  // early-exit lower bound (matrix-free verdict mode)
};

struct PointReport {
  QubitQCAParams params;
  std::size_t cells = 8;
  bool predicate = false;
  bool numeric = false;
  std::vector<TileVerdict> tiles;
  std::vector<std::string> witnesses;
  double max_residual = 0.0;
  bool agrees() const { return predicate == numeric; }
};

enum class Route { automatic, dense, matrix_free };

// Dense W^2 up to 10 cells, gate-by-gate matrix-free beyond.
PointReport evaluate_point(const QubitQCAParams& p, std::size_t cells, double tol = kDefaultTol,
                           Route route = Route::automatic, bool verdict_only = false);

struct ScanGrid {
  std::size_t phi_steps = 24;
  std::size_t theta_steps = 24;
  std::vector<std::array<double, 3>> axes;
};

// phi_i = 2 pi i / phi_steps and theta_j = 2 pi j / theta_steps, axis-major.
std::vector<QubitQCAParams> grid_points(const ScanGrid& g);

struct ScanReport {
  ScanGrid grid;
  std::size_t cells = 8;
  double tolerance = kDefaultTol;
  std::vector<PointReport> rows;
  std::size_t disagreements() const;
};

// QCAFLOW_WORKERS if set, else the hardware concurrency.
std::size_t default_workers();

// Runs `fn(i)` for i in [0, n) on `workers` threads. Results must be written
// to per-index slots so the merge order is the index order.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

ScanReport run_scan(const ScanGrid& g, std::size_t cells, double tol, std::size_t workers);

}  // namespace qcaflow
