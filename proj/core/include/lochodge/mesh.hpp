#pragma once

// Oriented simplicial and cubical cell complexes with the full face lattice.
//
// Cells keep a local vertex order: simplices are stored positively oriented,
// boxes in binary order (local vertex b sits at the corner selected by the bits
// of b, bit a = upper end of axis a). Every j-face is keyed by its sorted global
// vertex tuple; face ids follow the lexicographic order of those tuples.
// Faces are oriented by sorted vertex order (simplicial) or by ascending free
// axes (cubical); cells by the standard orientation of R^n.

#include <lochodge/alt_algebra.hpp>
#include <lochodge/polyform.hpp>

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lochodge {

enum class MeshKind { simplicial, cubical };
enum class Domain { unit_interval, unit_square, unit_cube, square_with_hole };

std::string_view kind_name(MeshKind k);
std::optional<MeshKind> parse_kind(std::string_view s);
std::string_view domain_name(Domain d);
std::optional<Domain> parse_domain(std::string_view s);
int domain_dimension(Domain d);

inline ReferenceCell reference_cell(MeshKind k) {
  return k == MeshKind::simplicial ? ReferenceCell::simplex : ReferenceCell::cube;
}

/// Entry (row, col, value) of an integer incidence matrix.
struct IncidenceEntry {
  int row;
  int col;
  int value;
};

class MeshComplex {
 public:
  /// Builds the face lattice. Simplices with negative volume are reordered,
  /// degenerate cells are rejected; boxes must be axis aligned.
  MeshComplex(MeshKind kind, int n, std::vector<double> coords, std::vector<std::vector<int>> cells);

  MeshKind kind() const { return kind_; }
  ReferenceCell cell_type() const { return reference_cell(kind_); }
  int dim() const { return n_; }

  int num_vertices() const { return static_cast<int>(coords_.size() / static_cast<std::size_t>(std::max(n_, 1))); }
  std::span<const double> vertex(int v) const {
    return {coords_.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
  }
  const std::vector<double>& coordinates() const { return coords_; }

  int num_cells() const { return static_cast<int>(cells_.size()); }
  const std::vector<int>& cell_vertices(int c) const { return cells_[static_cast<std::size_t>(c)]; }

  int num_faces(int j) const { return static_cast<int>(faces_[static_cast<std::size_t>(j)].size()); }
  const std::vector<int>& face_vertices(int j, int id) const {
    return faces_[static_cast<std::size_t>(j)][static_cast<std::size_t>(id)];
  }
  std::optional<int> find_face(int j, std::vector<int> vertices) const;

  /// Global ids of the j-faces of cell c, in the order of reference_faces(cell_type(), n, j).
  std::span<const int> cell_faces(int c, int j) const;

  /// Cells containing the vertex, ascending.
  const std::vector<int>& vertex_cells(int v) const { return vertex_cells_[static_cast<std::size_t>(v)]; }

  /// Omega_f: all cells having f as a face, ascending.
  std::vector<int> macroelement(int j, int face) const;

  double cell_volume(int c) const { return volumes_[static_cast<std::size_t>(c)]; }
  double cell_diameter(int c) const;
  double h() const { return h_; }

  /// Affine map x = origin + J s from the reference cell (row-major J, n x n).
  void cell_map(int c, std::vector<double>& origin, std::vector<double>& jacobian) const;

  /// Boundary operator from j-faces to (j-1)-faces as sparse integer entries, 1 <= j <= n.
  std::vector<IncidenceEntry> boundary(int j) const;

  /// Facets on the boundary of the domain (shared by one cell).
  std::vector<int> boundary_facets() const;

  long euler_characteristic() const;

  /// Betti numbers b_0..b_n for 1 <= n <= 3, from cell connectivity, boundary components
  /// and the Euler characteristic. Assumes a domain of R^n whose boundary components are disjoint.
  std::vector<long> betti_numbers() const;

  /// Vertex order used by simplicial red refinement; defaults to the cell order.
  const std::vector<int>& refinement_order(int c) const;

 private:
  friend MeshComplex refine(const MeshComplex& mesh);

  void build();

  MeshKind kind_;
  int n_;
  std::vector<double> coords_;
  std::vector<std::vector<int>> cells_;
  std::vector<std::vector<int>> refine_order_;
  std::vector<std::vector<std::vector<int>>> faces_;        // [j][id] -> sorted vertices
  std::vector<std::map<std::vector<int>, int>> face_index_;  // [j]
  std::vector<std::vector<int>> cell_faces_;                 // [j] flat, cells x local faces
  std::vector<int> local_faces_;                             // [j] count per cell
  std::vector<std::vector<int>> vertex_cells_;
  std::vector<double> volumes_;
  double h_ = 0.0;
};

/// Structured mesh: level 0 generator refined `level` times.
///   unit_interval  one cell [0,1]
///   unit_square    one box, or two triangles split along (0,0)-(1,1)
///   unit_cube      one box, or six Kuhn tetrahedra
///   square_with_hole  [0,3]^2 minus (1,2)^2 on the 3x3 grid (8 boxes or 16 triangles)
MeshComplex build_grid(Domain domain, MeshKind kind, int level);

/// Uniform refinement: boxes into 2^n, triangles into 4, tetrahedra by red refinement.
MeshComplex refine(const MeshComplex& mesh);

/// {"n", "kind", "vertices": [[...]], "cells": [[...]]}, ids 0-based.
MeshComplex mesh_from_json(std::string_view text);
std::string mesh_to_json(const MeshComplex& mesh);

struct Barycentric {
  std::vector<double> lambda;
  std::vector<AltForm<double>> dlambda;
};

/// Barycentric coordinates of x in simplicial cell c with respect to its local vertex order.
Barycentric barycentric(const MeshComplex& mesh, int c, std::span<const double> x);

/// Sign of the permutation sorting seq ascending (+1 or -1).
int permutation_parity(std::span<const int> seq);

}  // namespace lochodge
