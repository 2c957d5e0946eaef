#pragma once

// Mass matrices (exact and vertex-lumped), the mixed coupling and stiffness
// matrices, piecewise constant SPD coefficients, and numerical checks of the
// norm equivalence (A) and the consistency condition (B).
//
// All assembly loops run over cells in order and merge contributions with
// setFromTriplets, so matrices are bit-reproducible.

#include <lochodge/fe_space.hpp>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace lochodge {

/// Piecewise constant SPD map on Alt^k coefficients, one C(n,k) x C(n,k) matrix per cell.
class CoefficientField {
 public:
  CoefficientField(int n, int k, std::vector<std::vector<double>> cells);

  /// The same matrix on every cell.
  static CoefficientField constant(const MeshComplex& mesh, int k, const std::vector<double>& matrix);
  static CoefficientField identity(const MeshComplex& mesh, int k);

  int n() const { return n_; }
  int k() const { return k_; }
  std::size_t num_cells() const { return cells_.size(); }
  std::size_t comps() const { return comps_; }
  const std::vector<double>& matrix(int c) const { return cells_[static_cast<std::size_t>(c)]; }
  const std::vector<double>& inverse(int c) const { return inverses_[static_cast<std::size_t>(c)]; }
  /// Extreme eigenvalues over all cells.
  double min_eigenvalue() const { return min_eig_; }
  double max_eigenvalue() const { return max_eig_; }

 private:
  int n_;
  int k_;
  std::size_t comps_;
  std::vector<std::vector<double>> cells_;
  std::vector<std::vector<double>> inverses_;
  double min_eig_ = 0.0;
  double max_eig_ = 0.0;
};

/// {"k": int, "cells": [[matrix rows], ...]}; the cell count must match the mesh.
CoefficientField coefficient_from_json(std::string_view text, const MeshComplex& mesh);
std::string coefficient_to_json(const CoefficientField& K);

/// Rule used by mass_exact: exact for products of the local basis functions.
QuadratureRule exact_mass_rule(ReferenceCell cell, int n);

/// Gram matrix <K^-1 psi_i, phi_j> of two spaces of the same degree on one mesh, integrated
/// with the given reference rule (rows: row_space, cols: col_space).
SparseMatrix cross_mass(const FeSpace& row_space, const FeSpace& col_space, const QuadratureRule& rule,
                        const CoefficientField* K = nullptr);

/// Exact L2 mass matrix (optionally weighted by K^-1).
SparseMatrix mass_exact(const FeSpace& space, const CoefficientField* K = nullptr);

/// Lumped product <.,.>_h as a sparse matrix assembled with the vertex rule.
SparseMatrix mass_lumped_matrix(const FeSpace& space, const CoefficientField* K = nullptr);

/// Vertex-indexed dense SPD blocks over the dofs anchored at each vertex.
class BlockDiagonalOperator {
 public:
  std::size_t size() const { return size_; }
  std::size_t num_blocks() const { return blocks_.size(); }
  const std::vector<int>& block_indices(std::size_t b) const { return indices_[b]; }
  const Eigen::MatrixXd& block(std::size_t b) const { return blocks_[b]; }

  Vector apply(const Vector& x) const;
  /// Solves block by block with the Cholesky factors.
  Vector solve(const Vector& b) const;
  /// Solves only the block of vertex v for a right-hand side restricted to its dofs.
  Eigen::VectorXd solve_block(std::size_t v, const Eigen::VectorXd& rhs) const;
  SparseMatrix to_sparse() const;
  SparseMatrix inverse_sparse() const;

 private:
  friend BlockDiagonalOperator mass_lumped(const FeSpace& space, const CoefficientField* K);

  std::size_t size_ = 0;
  std::vector<std::vector<int>> indices_;
  std::vector<Eigen::MatrixXd> blocks_;
  std::vector<Eigen::LLT<Eigen::MatrixXd>> factors_;
};

/// Lumped mass of P1 (simplicial) or S1plus (cubical), assembled directly into vertex blocks:
///   <u, v>_h = sum_T w_T sum_{x in T} <K_T^-1 u_x, v_x>,  w_T = |T|/(n+1) or 2^-n |T|.
BlockDiagonalOperator mass_lumped(const FeSpace& space, const CoefficientField* K = nullptr);

struct MixedMatrices {
  SparseMatrix B;  // rows V^k, cols V^{k-1}: <d tau_j, v_i>
  SparseMatrix S;  // V^k x V^k: <d u_i, d v_j>
};

/// <d u_i, d v_j> on one space with exact quadrature (zero matrix when k == n).
SparseMatrix stiffness_matrix(const FeSpace& space);

/// Coupling and stiffness of a legal derivative pair, assembled cellwise with exact quadrature.
MixedMatrices mixed_matrices(const FeSpace& space_km1, const FeSpace& space_k);

/// Generalized eigenvalue range of (M_h, M) on one space.
struct SpectralRange {
  double min = 0.0;
  double max = 0.0;
};

/// Dense; throws if the space is larger than max_dim.
SpectralRange condition_A_range(const FeSpace& space, const CoefficientField* K = nullptr,
                                std::size_t max_dim = 5000);

/// Extreme values by Lanczos on M_h^-1 M (self-adjoint in the M_h product) with full
/// reorthogonalization, stopped when the residual bound of both extreme Ritz pairs is below rel_tol.
SpectralRange condition_A_range_lanczos(const FeSpace& space, const CoefficientField* K = nullptr,
                                        int max_steps = 1500, double rel_tol = 1e-7, unsigned seed = 1);

struct ConditionALevel {
  int level = 0;
  double h = 0.0;
  std::size_t dofs = 0;
  SpectralRange range;
};

struct ConditionAReport {
  std::vector<ConditionALevel> levels;
  /// max over consecutive levels of |change| / value, for min and max separately.
  double drift_min = 0.0;
  double drift_max = 0.0;
};

using CoefficientFactory = std::function<CoefficientField(const MeshComplex&)>;

/// Lumped-capable space (P1 or S1plus) of degree k on build_grid(domain, kind, level) for each level.
/// Spaces up to dense_cap dofs use the dense solver, larger ones Lanczos.
ConditionAReport verify_condition_A(Domain domain, MeshKind kind, int k, const std::vector<int>& levels,
                                    const CoefficientFactory& K = {}, std::size_t dense_cap = 5000);

struct ConditionBReport {
  double exact_vs_lumped = 0.0;  // max |<u~, w>_h - <u~, w>| / ||u~||
  double pi_h_lumped = 0.0;      // cubical: max |<Pi_h u, w>_h - <u, w>_h| / ||u||
  double d_pi_h = 0.0;           // cubical: max |d Pi_h u - d u| / ||u||
  double raw_s1plus_gap = 0.0;   // cubical: max |<u, w>_h - <u, w>| / ||u|| (expected nonzero)
};

/// Random trials over u; w ranges over the whole W^k basis. Simplicial: u in P1^k; cubical: u in S1plus^k.
ConditionBReport verify_condition_B(const MeshComplex& mesh, int k, int trials, unsigned seed = 1,
                                    const CoefficientField* K = nullptr);

}  // namespace lochodge
