#pragma once

// Mixed Hodge Laplacian on a pair V^{k-1} -> V^k:
//
//   <K^-1 sigma, tau>_* - <u, d tau>           = 0
//   <d sigma, v> + <du, dv> + <p, v>          = <f, v>
//   <u, q>                                     = 0
//
// where <.,.>_* is the exact L2 product (variant exact) or the vertex-lumped
// product (variant lumped), and p, q range over the discrete harmonic forms.
// In matrix form, with H the harmonic basis:
//
//   [ -M   B^T   0   ] [sigma]   [0]
//   [  B   S   M_k H ] [  u  ] = [F]
//   [  0 (M_k H)^T 0 ] [  p  ]   [0]

#include <lochodge/assembly.hpp>

#include <optional>
#include <string_view>

namespace lochodge {

enum class Variant { exact, lumped };
std::string_view variant_name(Variant v);
std::optional<Variant> parse_variant(std::string_view s);

/// Lumped-capable pair on a mesh: (P1^{k-1}, P1minus^k) or (S1plus^{k-1}, Q1minus^k).
/// For k = 0 only V^0 exists. Spaces reference the mesh, which must outlive the pair.
class HodgePair {
 public:
  HodgePair(const MeshComplex& mesh, int k);

  const MeshComplex& mesh() const { return *mesh_; }
  int k() const { return k_; }
  bool has_sigma() const { return vkm1_.has_value(); }
  const FeSpace& vkm1() const { return *vkm1_; }
  const FeSpace& vk() const { return vk_; }
  /// V^{k+1} of the Whitney-type family (absent when k == n).
  const FeSpace* vkp1() const { return vkp1_ ? &*vkp1_ : nullptr; }

 private:
  const MeshComplex* mesh_;
  int k_;
  std::optional<FeSpace> vkm1_;
  FeSpace vk_;
  std::optional<FeSpace> vkp1_;
};

/// Columns: M_k-orthonormal basis of {v in V^k : dv = 0, <v, d tau> = 0 for all tau}.
struct HarmonicBasis {
  Eigen::MatrixXd vectors;
  std::size_t dim() const { return static_cast<std::size_t>(vectors.cols()); }
  /// max over basis vectors of ||D_k q|| and ||B^T q||.
  double max_dq = 0.0;
  double max_btq = 0.0;
  /// True when the empty basis was taken from b_k = 0 without the dense extraction.
  bool from_topology = false;
};

/// Dense nullspace extraction; throws if dim V^k exceeds max_dim. Unless force_dense is set,
/// a mesh with Betti number b_k = 0 returns the empty basis directly.
HarmonicBasis harmonic_basis(const HodgePair& pair, std::size_t max_dim = 5000, bool force_dense = false);

/// Assembled operators of a pair (K acts on the V^{k-1} products).
struct HodgeMatrices {
  SparseMatrix M;                        // exact <K^-1 sigma, tau>
  std::optional<BlockDiagonalOperator> Mh;  // lumped <K^-1 sigma, tau>_h
  SparseMatrix B;                        // <d tau_j, v_i>
  SparseMatrix S;                        // <du, dv>
  SparseMatrix Mk;                       // exact mass of V^k
  SparseMatrix Dkm1;                     // V^{k-1} -> V^k
};

HodgeMatrices assemble_hodge(const HodgePair& pair, const CoefficientField* K = nullptr);

enum class SolverChoice {
  automatic,    // Schur complement when there are no harmonic forms, bordered LU otherwise
  bordered_lu,  // sparse LU of the full saddle matrix
  minres,       // MINRES on the full saddle matrix
};

struct SolveOptions {
  Variant variant = Variant::lumped;
  SolverChoice solver = SolverChoice::automatic;
  double tolerance = 1e-12;  // iterative solves (relative)
};

struct HodgeSolution {
  Vector sigma;
  Vector u;
  Vector p;  // coefficients in the harmonic basis
  Variant variant = Variant::lumped;
  double residual = 0.0;  // relative residual of the full saddle system
  std::size_t harmonic_dim = 0;
  int iterations = 0;  // Krylov iterations (0 for direct solves)
  std::string method;
};

/// Full saddle matrix for a variant (symmetric ordering sigma, u, p).
SparseMatrix saddle_matrix(const HodgeMatrices& m, Variant variant, const HarmonicBasis& H);

/// Load vector <f, psi_i> on V^k with Gauss rules of `points` per direction.
Vector load_vector(const FeSpace& space, const FormField& f, int points = 4);

HodgeSolution solve_hodge(const HodgePair& pair, const HodgeMatrices& m, const HarmonicBasis& H, const Vector& F,
                          const SolveOptions& opts = {});

/// d*_h u = M_h^-1 B^T u by independent per-vertex block solves.
Vector coderivative_local(const HodgeMatrices& m, const FeSpace& vkm1, const Vector& u);
/// The same operator by one global sparse factorization of M_h (or of the exact M).
Vector coderivative_global(const HodgeMatrices& m, const Vector& u, Variant variant);

struct LocalityReport {
  int vertex = -1;
  int perturbed_dof = -1;
  bool far = false;       // the dof's support misses Omega_x
  double max_change = 0;  // over the dofs anchored at x
};

/// Perturbs u at one dof by 1 and measures the change of d*_h u at the dofs anchored at x.
/// The lumped path uses the block solves, the exact path the global exact mass.
LocalityReport locality_certificate(const HodgePair& pair, const HodgeMatrices& m, const Vector& u, int vertex, int dof,
                                    Variant variant = Variant::lumped);

/// True if the support of V^k dof i has no cell in common with Omega_x.
bool dof_is_far(const HodgePair& pair, int vertex, int dof);

struct InfSupLevel {
  int level = 0;
  double h = 0.0;
  std::size_t dim = 0;
  double infsup = 0.0;  // smallest |generalized eigenvalue| of the saddle matrix in the triple norm
  double c_p = 0.0;     // max ||rho||_* / ||d rho|| over rho orthogonal to the kernel of d
};

/// Dense; throws if the saddle dimension exceeds max_dim.
InfSupLevel infsup_estimate(const HodgePair& pair, const HodgeMatrices& m, const HarmonicBasis& H, Variant variant,
                            std::size_t max_dim = 5000);

}  // namespace lochodge
