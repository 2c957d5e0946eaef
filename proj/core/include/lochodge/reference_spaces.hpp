#pragma once

// Polynomial shape spaces on the reference simplex and reference cube, their
// degrees of freedom, and the exact dual bases the global spaces are built on.
//
// Reference simplex: vertices v_0 = 0, v_i = e_i. Reference cube [0,1]^n:
// vertex id = bit pattern of its coordinates (bit a set <=> x_{a+1} = 1).

#include <lochodge/exact_linalg.hpp>
#include <lochodge/polyform.hpp>

#include <optional>
#include <string_view>
#include <vector>

namespace lochodge {

enum class SpaceFamily { P1, P1minus, P0, Q1, Q1minus, BLambda, S1plus };

std::string_view family_name(SpaceFamily f);
std::optional<SpaceFamily> parse_family(std::string_view name);
ReferenceCell family_cell(SpaceFamily f);

/// Dimension formula of the local space (throws for unsupported combinations).
std::size_t family_dimension(SpaceFamily f, int n, int k);

struct SpaceBasis {
  SpaceFamily family = SpaceFamily::P0;
  int n = 0;
  int k = 0;
  ReferenceCell cell = ReferenceCell::simplex;
  std::vector<PolyForm<Rational>> shapes;

  std::size_t size() const { return shapes.size(); }
};

/// Basis of the local shape space.
///   P1       dual basis lambda_i dlambda_{f \ i} of the anchored functionals
///   P1minus  Whitney forms, normalised to unit integral over their face
///   P0       constant dx_sigma
///   Q1       x^alpha dx_sigma, alpha in {0,1}^n
///   Q1minus  coefficient of dx_sigma multilinear in the variables outside sigma
///   BLambda  x^beta x^alpha dx_sigma, beta over sigma*, alpha over sigma, |alpha| >= 1
///   S1plus   Q1minus followed by d kappa of the BLambda basis, reduced greedily
SpaceBasis shape_space(SpaceFamily f, int n, int k);

/// A j-face of a reference cell.
struct RefFace {
  std::vector<int> vertices;  // local vertex ids, ascending
  std::uint32_t free_mask = 0;  // cube only: axes spanned by the face
  AffineFace chart;  // intrinsic coordinates; orientation used by integral functionals
};

/// j-faces in lexicographic order of their sorted vertex tuples.
const std::vector<RefFace>& reference_faces(ReferenceCell cell, int n, int j);

std::vector<Rational> reference_vertex(ReferenceCell cell, int n, int id);

/// Vertices x_1..x_j of a face adjacent to the anchor x_0 along its edges:
/// the other vertices in ascending order (simplex) or the axis neighbours by axis (cube).
std::vector<int> anchor_neighbours(ReferenceCell cell, const RefFace& f, int anchor);

enum class DofKind {
  vertex,             // u_{x0}(x_1 - x_0, ..., x_k - x_0)
  face_integral,      // int_f tr_f u
  weighted_integral,  // int_f tr_f u * v, v a Q1 monomial of the face
};

struct DofDescriptor {
  DofKind kind = DofKind::vertex;
  int face = 0;     // index into reference_faces(cell, n, k)
  int anchor = -1;  // vertex kind only
  Exponent weight{};  // weighted_integral only (intrinsic exponent in {0,1}^k)
};

/// Local degrees of freedom in the canonical order: faces in order, then anchors ascending.
std::vector<DofDescriptor> dof_descriptors(ReferenceCell cell, int n, int k, DofKind kind);

/// The functional kind that defines each family's global space.
DofKind natural_dof_kind(SpaceFamily f);

Rational apply_dof(ReferenceCell cell, int n, int k, const DofDescriptor& dof, const PolyForm<Rational>& u);

/// Rows: functionals, columns: forms.
RationalMatrix dof_matrix(ReferenceCell cell, int n, int k, std::span<const DofDescriptor> dofs,
                          std::span<const PolyForm<Rational>> forms);

struct Unisolvency {
  RationalMatrix matrix;
  Rational det;
};

/// All functionals of the family applied to all shape functions, with its exact determinant.
/// S1plus uses the weighted face moments; Q1minus and P1minus the face integrals; P1 and Q1 vertex values.
Unisolvency unisolvency_matrix(const SpaceBasis& basis);

/// Coefficient matrix of a list of forms (rows) over the union of their (sigma, monomial) keys.
RationalMatrix coefficient_matrix(std::span<const PolyForm<Rational>> forms);
std::size_t span_rank(std::span<const PolyForm<Rational>> forms);
/// span(forms) contained in span(basis).
bool span_contains(std::span<const PolyForm<Rational>> basis, std::span<const PolyForm<Rational>> forms);

/// Reference element used by the global spaces: dual basis of the anchored or
/// integral functionals, with exterior derivatives. Cached; lifetime of the program.
struct ReferenceElement {
  SpaceFamily family = SpaceFamily::P1;
  ReferenceCell cell = ReferenceCell::simplex;
  int n = 0;
  int k = 0;
  std::vector<DofDescriptor> dofs;
  std::vector<PolyForm<Rational>> dual;    // phi_i(dual_j) = delta_ij
  std::vector<PolyForm<Rational>> d_dual;  // empty when k == n
};

/// Families with global spaces: P1, P1minus (simplex), Q1minus, S1plus (cube). S1plus uses vertex functionals.
const ReferenceElement& reference_element(SpaceFamily f, int n, int k);

}  // namespace lochodge
