// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Size-N coarse-graining: tile projections, the chain projector and the
// isometry J, the commutation criterion, extraction and classification of
// the renormalized unitary V = J U J^dag, and the qubit-specific checks.
#pragma once

#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "qcaflow/linalg.hpp"
#include "qcaflow/model.hpp"

namespace qcaflow {

struct Tolerances {
  double construction = 1e-12;
  double rank = 1e-9;
  double commutator = 1e-9;
  double acceptance = 1e-8;
};

enum class TileFamily { Q1, Q2, I_otimes_c, c_otimes_I, eigenbasis, custom };
std::string_view family_name(TileFamily f);

struct TileProjection {
  ComplexMatrix matrix;
  std::size_t rank = 0;
  TileFamily family = TileFamily::custom;
  // "Q1_a", "Q1_b", "Q2", "IxC0+", "C1xI-", "eig:Q2", "custom", ...
  std::string label;
  // Ordered kept basis |psi_k>; the order fixes J and hence the branch.
  std::vector<std::vector<cplx>> basis;

  std::size_t tile_dim() const { return matrix.rows(); }
  bool computational() const { return matrix.is_diagonal(1e-14); }
  // Suffix after the family part of the label: "a", "b", "+", "-" or "".
  std::string branch() const;

  // Validates orthonormality and the rank.
  static TileProjection from_basis(std::vector<std::vector<cplx>> basis, TileFamily family,
                                   std::string label, std::size_t required_rank = 2);
  // Validates P^2 = P = P^dag and the rank; the basis comes from the
  // eigenvectors with eigenvalue 1.
  static TileProjection from_matrix(const ComplexMatrix& m, std::string label,
                                    std::size_t required_rank = 2);
};

// Two-qubit tile from an ordered pair of one-cell bases, e.g. computational
// or the eigenbasis of U. `label` is one of Q1_a, Q1_b, Q2, IxC{c}{+-},
// C{c}xI{+-}; bare Q1 / IxC0 / C1xI pick branch a / +.
TileProjection tile_by_label(std::string_view label);
TileProjection tile_by_label(std::string_view label, const std::vector<cplx>& e0,
                             const std::vector<cplx>& e1, TileFamily family,
                             std::string prefix);
// The six computational-basis tiles (canonical branch), plus the same six
// on the eigenbasis of U when phi = 0 mod 2pi.
std::vector<TileProjection> enumerate_tile_projections(const QubitQCAParams& p);
// Eigenvectors of U ordered by eigenvalue e^{-i theta}, e^{+i theta}.
std::pair<std::vector<cplx>, std::vector<cplx>> local_eigenbasis(const QubitQCAParams& p);
// Haar-random rank-2 projector on two qubits, for falsification probes.
TileProjection random_tile_projection(std::mt19937_64& rng);

ComplexMatrix chain_projector(const TileProjection& tile, std::size_t n_tiles);

struct IsometryJ {
  ComplexMatrix matrix;    // rank^f x tile_dim^f
  ComplexMatrix tile_map;  // rank x tile_dim, rows <psi_k|
  TileProjection tile;
  std::size_t n_tiles = 0;
};
IsometryJ build_J(const TileProjection& tile, std::size_t n_tiles);

// Apply (tile_map)^{(x) f} or its adjoint to a vector without forming J.
std::vector<cplx> apply_J(const ComplexMatrix& tile_map, std::size_t n_tiles,
                          const std::vector<cplx>& v);
std::vector<cplx> apply_J_adjoint(const ComplexMatrix& tile_map, std::size_t n_tiles,
                                  const std::vector<cplx>& v);

struct CommutationResult {
  bool passes = false;
  double residual = 0.0;
  double tolerance = kDefaultTol;
  // Matrix-free verdict mode stops early; the residual is then a lower bound.
  bool partial = false;
};

// Dense route: ||U Pi - Pi U||_F.
CommutationResult commutation_check(const StepUnitary& step_N, const TileProjection& tile,
                                    double tol = kDefaultTol);
// Matrix-free route, exact: ||[A,Pi]||^2 = sum_k ||(1-Pi) A Psi_k||^2 +
// ||(1-Pi) A^dag Psi_k||^2 over the product basis of Pi.
CommutationResult commutation_check(const LinearAction& step_N, const TileProjection& tile,
                                    std::size_t n_tiles, double tol = kDefaultTol,
                                    bool verdict_only = false);

struct Renormalized {
  ComplexMatrix v_s;
  double unitarity_residual = 0.0;
};
Renormalized renormalized_unitary(const StepUnitary& step_N, const IsometryJ& j);
Renormalized renormalized_unitary(const LinearAction& step_N, const IsometryJ& j);

struct DiagonalFit {
  double phi_prime = 0.0;
  double theta_prime = 0.0;  // in (-pi/2, pi/2]; physical only mod pi
  double global_phase = 0.0;
  double residual = 0.0;
};
// v_s ~ e^{i global} (U' x ... x U') D_{phi'} with U' = e^{-i theta' sz}.
DiagonalFit fit_diagonal_rule(const ComplexMatrix& v_s, std::size_t f);
StepUnitary build_coarse_step(double phi_prime, double theta_prime, std::size_t f);

bool closed_form_renormalizable(const QubitQCAParams& p, double tol = kDefaultTol);

struct SchmidtCheck {
  bool passes = false;
  double factor_residual = 0.0;   // worst ||R(X_mn) - alpha_m beta_n^T||
  double image_residual = 0.0;    // ||sum lambda~ (x) rho~ - G P G^dag||
  double g2_commutator = 0.0;     // ||[G^2, P]||
  std::size_t max_rank = 0;       // worst Schmidt rank among the X_mn
};
// g acts on (right cell of tile x) (x) (left cell of tile x+1).
SchmidtCheck schmidt_condition_check(const ComplexMatrix& g, const TileProjection& tile,
                                     double tol = kDefaultTol);

// ||U~ P U~^dag - P||_F with U~ = G^e G^o (in-tile layer after the
// cross-tile layer) and P = (x)_x C_phi Pi_x C_phi^dag on 2f qubits.
double verify_reindex_equation(const QubitQCAParams& p, const TileProjection& tile,
                               std::size_t f);

enum class Classification { local_unitary, diagonal_rule, shift, non_diagonal_unclassified };
std::string_view classification_name(Classification c);

struct RenormDiagnostics {
  double delta = 0.0;  // (theta00 - theta11)/2 from the diagonal of G
  double chi = 0.0;    // 2 alpha - phi
};

struct RenormResult {
  bool renormalizable = false;
  TileProjection projection;
  std::optional<ComplexMatrix> v_s;
  double unitarity_residual = 0.0;
  double commutator_residual = 0.0;
  std::optional<DiagonalFit> fitted;
  Classification classification = Classification::non_diagonal_unclassified;
  std::string branch;
  int shift_direction = 0;  // +1 / -1 when classification == shift
  std::optional<RenormDiagnostics> diagnostics;
  Tolerances tolerances;
  std::size_t n_tiles = 0;
};

// Full pipeline for an arbitrary step: U^N, commutation, V, classification.
RenormResult renormalize(const StepUnitary& step, const TileProjection& tile,
                         std::size_t N = 2, const Tolerances& tol = {});
// Qubit pipeline with N = 2 on 2f cells, W^2 built gate by gate.
RenormResult renormalize_qubit(const QubitQCAParams& p, const TileProjection& tile,
                               std::size_t f, const Tolerances& tol = {});

}  // namespace qcaflow
