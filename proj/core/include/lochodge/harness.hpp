#pragma once

// Batch studies on structured meshes: manufactured-solution convergence, locality
// of the lumped coderivative, exact S1plus checks, inf-sup tracking and local
// conservation. Reports are deterministic (no timings, fixed formatting).

#include <lochodge/hodge_solver.hpp>
#include <lochodge/manufactured.hpp>
#include <lochodge/verification.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lochodge {

struct StudyConfig {
  Domain domain = Domain::unit_square;
  MeshKind kind = MeshKind::simplicial;
  int k = 2;
  Variant variant = Variant::lumped;
  std::vector<int> levels{1, 2, 3};
  std::string solution = "top";  // manufactured id: "top" (k = n) or "gradient" (k = 1)
  /// Optional JSON file: {"k": k-1, "matrix": [...]} (constant, any level) or
  /// {"k": k-1, "cells": [[...], ...]} (one mesh only; not usable for convergence).
  std::string coefficient_path;
  /// Inline constant coefficient on Alt^{k-1}, row-major; takes precedence over the path.
  std::vector<double> coefficient_matrix;
  std::string out;  // output prefix; <out>.csv and <out>.json
  SolverChoice solver = SolverChoice::automatic;
  unsigned seed = 1;
  int samples = 4;  // locality: exact-mass control perturbations per vertex

  int dim() const { return domain_dimension(domain); }
};

/// Parses the JSON mirror of StudyConfig (unknown keys are rejected) and validates it.
StudyConfig config_from_json(std::string_view text);
std::string config_to_json(const StudyConfig& c);
/// Throws std::invalid_argument with a message for an inconsistent configuration.
void validate_config(const StudyConfig& c);

/// Constant coefficient of the configuration (empty when none is given).
std::vector<double> constant_coefficient(const StudyConfig& c);

/// L2 norm of (u_h - exact) or, with derivative set, of (d u_h - exact), by Gauss rules with
/// `points` per direction.
double l2_error(const FeSpace& space, const Vector& coeffs, const FormField& exact, bool derivative = false,
                int points = 4);

struct ConvergenceLevel {
  int level = 0;
  double h = 0.0;
  std::size_t dofs = 0;
  double err_sigma_l2 = 0.0;
  double err_sigma_energy = 0.0;  // ||sigma - sigma_h|| + ||d(sigma - sigma_h)||
  double err_u_l2 = 0.0;
  double err_du_l2 = 0.0;
  double residual = 0.0;
  std::size_t harmonic_dim = 0;
  int iterations = 0;
  std::string method;
  double total() const { return err_sigma_l2 + err_u_l2 + err_du_l2; }
};

/// Errors at or below this are round-off of an exactly reproduced field.
inline constexpr double kRoundoffError = 1e-11;

/// log(e_a / e_b) / log(h_a / h_b) per column; NaN when both errors are round-off.
struct ConvergenceRate {
  int from_level = 0;
  int to_level = 0;
  double sigma_l2 = 0.0;
  double sigma_energy = 0.0;
  double u_l2 = 0.0;
  double du_l2 = 0.0;
  double total = 0.0;
};

struct ConvergenceReport {
  StudyConfig config;
  std::string boundary_note;
  std::vector<ConvergenceLevel> levels;
  std::vector<ConvergenceRate> rates;
  /// Rate of total() on the finest level pair.
  double final_total_rate() const { return rates.empty() ? 0.0 : rates.back().total; }
};

/// Minimum observed rate accepted by the reports. The theory gives O(h) without constants,
/// so the 0.9 margin is an engineering choice.
inline constexpr double kRateThreshold = 0.9;

ConvergenceReport run_convergence(const StudyConfig& config);
std::string convergence_csv(const ConvergenceReport& r);
std::string convergence_json(const ConvergenceReport& r);

struct LocalityStudy {
  StudyConfig config;
  int level = 0;
  int vertices = 0;
  long far_tested = 0;
  long far_changed = 0;  // far perturbations with any change (expected 0)
  long near_tested = 0;
  long near_changed = 0;
  long control_tested = 0;  // exact-mass far perturbations
  long control_changed = 0;
  double max_far_change = 0.0;
  double max_control_change = 0.0;
};

/// Mesh at the last configured level; every vertex against every V^k dof.
LocalityStudy run_locality(const StudyConfig& config);
std::string locality_json(const LocalityStudy& s);

struct UnisolvencyStudy {
  int n_max = 4;
  std::vector<CheckRow> rows;
  bool pass() const { return all_pass(rows); }
};

UnisolvencyStudy run_unisolvency(int n_max = 4);
std::string unisolvency_csv(const UnisolvencyStudy& s);
std::string unisolvency_json(const UnisolvencyStudy& s);

struct InfSupRow {
  int level = 0;
  double h = 0.0;
  std::size_t dim = 0;
  double infsup_lumped = 0.0;
  double infsup_exact = 0.0;
  double c_p_lumped = 0.0;
  double c_p_exact = 0.0;
};

struct InfSupStudy {
  StudyConfig config;
  std::vector<InfSupRow> levels;
  double drift = 0.0;  // (max - min) / max of the configured variant across levels
};

InfSupStudy run_infsup(const StudyConfig& config);
std::string infsup_json(const InfSupStudy& s);

/// |int_U f - sum over the boundary facets of U of the oriented flux of sigma_h| for a k = n
/// solution; U is a set of cells.
double conservation_check(const HodgePair& pair, const HodgeSolution& solution, const FormField& f,
                          const std::vector<int>& cells);

struct ConservationStudy {
  StudyConfig config;
  int level = 0;
  double max_cell_residual = 0.0;
  double domain_residual = 0.0;
  double max_union_residual = 0.0;
  int unions = 0;
  double solve_residual = 0.0;
};

/// k = n, configured variant, last level: every cell, the whole domain and random connected unions.
ConservationStudy run_conservation(const StudyConfig& config, int unions = 20);
std::string conservation_json(const ConservationStudy& s);

/// Result of one solve at the last configured level, with errors when the solution is manufactured.
std::string solve_json(const StudyConfig& config);

/// Library version and the git commit recorded at configure time.
std::string library_version();
std::string git_commit();

}  // namespace lochodge
