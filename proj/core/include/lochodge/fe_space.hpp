#pragma once

// Global finite element spaces on a MeshComplex.
//
// Global degrees of freedom are ordered by face id (lexicographic sorted vertex
// tuples), then by anchor vertex id within the face. Anchored functionals use
// the other face vertices in ascending global order (simplices) or the axis
// neighbours by axis (boxes); integral functionals use the face orientation of
// the mesh. On a cell with affine map F the global basis is
//   psi_j = s_j (F^-1)^* psi_hat_j,  s_j = +-1,
// where psi_hat_j is the reference dual basis and s_j matches the local and
// global orientation of the functional.
//
// P0 is the space W of piecewise constant forms: C(n,k) coefficients per cell,
// basis dx_sigma on each cell.

#include <lochodge/mesh.hpp>
#include <lochodge/quadrature.hpp>
#include <lochodge/reference_spaces.hpp>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <span>
#include <vector>

namespace lochodge {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// A form-valued field on physical points.
using FormField = std::function<AltForm<double>(std::span<const double>)>;
/// A field given cell by cell, evaluated only on the closure of the named cell.
using CellFormField = std::function<AltForm<double>(int, std::span<const double>)>;

/// Affine data of one cell: x = origin + J x_hat, plus the coefficient maps
/// (F^-1)^* on Alt^k for every k.
struct CellGeometry {
  int n = 0;
  std::vector<double> origin;
  std::vector<double> jacobian;  // row-major
  std::vector<double> inverse;   // row-major
  double det = 0.0;              // |det J|
  std::vector<std::vector<double>> pull;  // [k] row-major C(n,k) x C(n,k): physical = pull * reference

  std::vector<double> physical_point(std::span<const double> xhat) const;
  std::vector<double> reference_point(std::span<const double> x) const;
};

CellGeometry cell_geometry(const MeshComplex& mesh, int c);

struct GlobalDof {
  int face = 0;     // k-face id; the cell id for P0
  int anchor = -1;  // vertex id for anchored families; the component rank for P0
};

class FeSpace {
 public:
  /// The mesh must outlive the space.
  FeSpace(const MeshComplex& mesh, SpaceFamily family, int k);

  const MeshComplex& mesh() const { return *mesh_; }
  SpaceFamily family() const { return family_; }
  int k() const { return k_; }
  int n() const { return mesh_->dim(); }
  ReferenceCell cell_type() const { return mesh_->cell_type(); }

  std::size_t size() const { return dofs_.size(); }
  int local_size() const { return local_size_; }
  bool anchored() const { return family_ == SpaceFamily::P1 || family_ == SpaceFamily::S1plus; }
  bool mapped() const { return family_ != SpaceFamily::P0; }

  const GlobalDof& dof(int i) const { return dofs_[static_cast<std::size_t>(i)]; }
  std::span<const int> cell_dofs(int c) const {
    return {cell_dofs_.data() + static_cast<std::size_t>(c) * static_cast<std::size_t>(local_size_),
            static_cast<std::size_t>(local_size_)};
  }
  std::span<const double> cell_signs(int c) const {
    return {cell_signs_.data() + static_cast<std::size_t>(c) * static_cast<std::size_t>(local_size_),
            static_cast<std::size_t>(local_size_)};
  }
  /// Local vertex carrying each local dof (anchored families), else -1.
  const std::vector<int>& local_anchors() const { return local_anchors_; }

  /// Global dofs anchored at vertex v, ascending (anchored families only).
  const std::vector<int>& vertex_dofs(int v) const;

  /// Cells where the basis function can be nonzero: Omega_x for anchored dofs, Omega_f otherwise.
  std::vector<int> support(int i) const;

  /// Reference basis in local order and its exterior derivatives (empty when k == n).
  const std::vector<PolyForm<double>>& reference_basis() const { return basis_; }
  const std::vector<PolyForm<double>>& reference_derivatives() const { return d_basis_; }
  /// Reference element (null for P0).
  const ReferenceElement* reference() const { return ref_; }

 private:
  const MeshComplex* mesh_;
  SpaceFamily family_;
  int k_;
  int local_size_ = 0;
  const ReferenceElement* ref_ = nullptr;
  std::vector<GlobalDof> dofs_;
  std::vector<int> cell_dofs_;
  std::vector<double> cell_signs_;
  std::vector<int> local_anchors_;
  std::vector<std::vector<int>> vertex_dofs_;
  std::vector<PolyForm<double>> basis_;
  std::vector<PolyForm<double>> d_basis_;
};

FeSpace build_space(const MeshComplex& mesh, SpaceFamily family, int k);

/// Reference values of the local basis and its derivative at the points of a rule.
struct Tabulation {
  std::size_t points = 0;
  std::size_t local = 0;
  std::size_t comps = 0;   // C(n,k)
  std::size_t dcomps = 0;  // C(n,k+1), 0 when k == n
  std::vector<double> values;   // [q][j][comp]
  std::vector<double> dvalues;  // [q][j][comp]
};

Tabulation tabulate(const FeSpace& space, const QuadratureRule& rule);

/// Physical values of the local basis on cell c (signs applied), laid out like Tabulation.
void map_tabulation(const FeSpace& space, int c, const CellGeometry& g, const Tabulation& tab,
                    std::vector<double>& values, std::vector<double>& dvalues);

/// Local basis psi_j of cell c at physical point x (throws if x is outside the cell).
std::vector<AltForm<double>> eval_basis(const FeSpace& space, int c, std::span<const double> x);

/// Value of sum_i coeffs_i psi_i at x in cell c, and of its exterior derivative.
AltForm<double> evaluate(const FeSpace& space, const Vector& coeffs, int c, std::span<const double> x);
AltForm<double> evaluate_derivative(const FeSpace& space, const Vector& coeffs, int c, std::span<const double> x);

/// Sparse map D with D * coeffs(u) = coeffs(du). Legal pairs: P1 -> P1minus, P1minus -> P1minus,
/// Q1minus -> Q1minus, S1plus -> Q1minus (degrees k-1 -> k, same mesh).
SparseMatrix exterior_derivative_matrix(const FeSpace& src, const FeSpace& dst);

/// Canonical interpolant: the functionals of the space applied to the field.
/// Face integrals use Gauss rules with `points` per direction; P0 takes cell means.
Vector interpolate(const FeSpace& space, const FormField& field, int points = 3);
/// Same for piecewise fields whose traces agree across cells: each functional is applied
/// on the first cell containing its face.
Vector interpolate_cellwise(const FeSpace& space, const CellFormField& field, int points = 3);

/// Face integrals of a mapped space of degree k as coefficients in P1minus^k or Q1minus^k.
SparseMatrix canonical_projection_matrix(const FeSpace& src, const FeSpace& dst);

/// Matrix of Pi_h : S1plus^k -> Q1minus^k, matching all face integrals.
SparseMatrix pi_h_matrix(const FeSpace& s1plus, const FeSpace& q1minus);
Vector pi_h(const FeSpace& s1plus, const FeSpace& q1minus, const Vector& u);

/// Cellwise mean of every Alt^k component (the L2 projection onto W), as a P0 vector.
Vector project_piecewise_constant(const FeSpace& space, const Vector& u);
Vector project_piecewise_constant(const MeshComplex& mesh, int k, const FormField& field, int points = 4);

}  // namespace lochodge
