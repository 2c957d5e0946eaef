#include <lochodge/hodge_solver.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lochodge {

namespace {

constexpr double kNullTol = 1e-9;

SpaceFamily lower_family(MeshKind kind) { return kind == MeshKind::simplicial ? SpaceFamily::P1 : SpaceFamily::S1plus; }
SpaceFamily upper_family(MeshKind kind) { return kind == MeshKind::simplicial ? SpaceFamily::P1minus : SpaceFamily::Q1minus; }

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void append_block(std::vector<Eigen::Triplet<double>>& trips, const SparseMatrix& m, Eigen::Index r0, Eigen::Index c0,
                  double scale) {
  for (Eigen::Index j = 0; j < m.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(m, j); it; ++it) trips.emplace_back(r0 + it.row(), c0 + it.col(), scale * it.value());
}

const SparseMatrix& sigma_mass(const HodgeMatrices& m, Variant v, SparseMatrix& storage) {
  if (v == Variant::exact) return m.M;
  storage = m.Mh->to_sparse();
  return storage;
}

double relative_residual(const SparseMatrix& A, const Vector& x, const Vector& b) {
  const double nb = b.norm();
  const double nr = (A * x - b).norm();
  return nb > 0.0 ? nr / nb : nr;
}

// Preconditioned conjugate gradients for an SPD operator.
template <class Op, class Prec>
int pcg(const Op& apply, const Prec& precondition, const Vector& b, Vector& x, double tol, int max_iter) {
  const double nb = b.norm();
  x = Vector::Zero(b.size());
  if (nb == 0.0) return 0;
  Vector r = b;
  Vector z = precondition(r);
  Vector p = z;
  double rz = r.dot(z);
  for (int it = 1; it <= max_iter; ++it) {
    const Vector Ap = apply(p);
    const double alpha = rz / p.dot(Ap);
    x += alpha * p;
    r -= alpha * Ap;
    if (r.norm() <= tol * nb) return it;
    z = precondition(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  throw std::runtime_error("solve_hodge: conjugate gradients did not reach the tolerance");
}

// SPD solves: sparse LDLT on 2D meshes and small systems, where fill-in stays cheap,
// otherwise conjugate gradients preconditioned by incomplete Cholesky.
class SpdSolver {
 public:
  SpdSolver(const SparseMatrix& A, bool direct, double tol) : A_(&A), direct_(direct), tol_(tol) {
    if (direct_) {
      ldlt_.compute(A);
      if (ldlt_.info() != Eigen::Success) throw std::runtime_error("solve_hodge: SPD factorization failed");
    } else {
      ic_.compute(A);
      if (ic_.info() != Eigen::Success) throw std::runtime_error("solve_hodge: incomplete Cholesky failed");
    }
  }

  bool direct() const { return direct_; }
  int iterations() const { return iterations_; }

  /// Fixed linear preconditioner: the factorization itself (no inner iteration).
  Vector precondition(const Vector& r) const { return direct_ ? Vector(ldlt_.solve(r)) : Vector(ic_.solve(r)); }

  Vector solve(const Vector& b) const {
    if (direct_) return ldlt_.solve(b);
    Vector x;
    iterations_ += pcg([this](const Vector& v) -> Vector { return *A_ * v; },
                       [this](const Vector& r) { return precondition(r); }, b, x, tol_,
                       10 * static_cast<int>(b.size()) + 100);
    return x;
  }

 private:
  const SparseMatrix* A_;
  bool direct_;
  double tol_;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
  Eigen::IncompleteCholesky<double, Eigen::Lower, Eigen::AMDOrdering<int>> ic_;
  mutable int iterations_ = 0;
};

// Sparse direct factorizations are used up to this size on 3D meshes.
constexpr Eigen::Index kDirectLimit3d = 5000;

}  // namespace

std::string_view variant_name(Variant v) { return v == Variant::exact ? "exact" : "lumped"; }

std::optional<Variant> parse_variant(std::string_view s) {
  if (s == "exact") return Variant::exact;
  if (s == "lumped") return Variant::lumped;
  return std::nullopt;
}

HodgePair::HodgePair(const MeshComplex& mesh, int k)
    : mesh_(&mesh), k_(k), vk_(mesh, upper_family(mesh.kind()), (k < 0 || k > mesh.dim()) ? 0 : k) {
  if (k < 0 || k > mesh.dim()) throw std::invalid_argument("HodgePair: k out of range");
  if (k > 0) vkm1_.emplace(mesh, lower_family(mesh.kind()), k - 1);
  if (k < mesh.dim()) vkp1_.emplace(mesh, upper_family(mesh.kind()), k + 1);
}

HodgeMatrices assemble_hodge(const HodgePair& pair, const CoefficientField* K) {
  HodgeMatrices m;
  const auto& vk = pair.vk();
  m.Mk = mass_exact(vk);
  if (!pair.has_sigma()) {
    if (K != nullptr) throw std::invalid_argument("assemble_hodge: no V^{k-1} for a coefficient field at k = 0");
    m.S = stiffness_matrix(vk);
    return m;
  }
  const auto& vkm1 = pair.vkm1();
  m.M = mass_exact(vkm1, K);
  m.Mh = mass_lumped(vkm1, K);
  auto mixed = mixed_matrices(vkm1, vk);
  m.B = std::move(mixed.B);
  m.S = std::move(mixed.S);
  m.Dkm1 = exterior_derivative_matrix(vkm1, vk);
  return m;
}

HarmonicBasis harmonic_basis(const HodgePair& pair, std::size_t max_dim, bool force_dense) {
  const auto& vk = pair.vk();
  const std::size_t N = vk.size();
  if (!force_dense && pair.mesh().dim() <= 3 && pair.mesh().betti_numbers()[static_cast<std::size_t>(pair.k())] == 0) {
    HarmonicBasis empty;
    empty.vectors = Eigen::MatrixXd(idx(N), 0);
    empty.from_topology = true;
    return empty;
  }
  if (N > max_dim)
    throw std::invalid_argument("harmonic_basis: dimension " + std::to_string(N) + " exceeds the dense cap " +
                                std::to_string(max_dim));
  // Kernel of the stacked operator [D_k; B^T] via the eigenvectors of its Gram matrix,
  // with B^T rescaled to unit entries so that both parts weigh alike.
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(idx(N), idx(N));
  std::optional<SparseMatrix> Dk;
  if (const auto* vkp1 = pair.vkp1()) {
    Dk = exterior_derivative_matrix(vk, *vkp1);
    const Eigen::MatrixXd D(*Dk);
    G += D.transpose() * D;
  }
  SparseMatrix B;
  if (pair.has_sigma()) {
    B = mixed_matrices(pair.vkm1(), vk).B;
    double scale = 0.0;
    for (Eigen::Index j = 0; j < B.outerSize(); ++j)
      for (SparseMatrix::InnerIterator it(B, j); it; ++it) scale = std::max(scale, std::abs(it.value()));
    if (scale > 0.0) {
      const Eigen::MatrixXd Bd = Eigen::MatrixXd(B) / scale;
      G += Bd * Bd.transpose();
    }
  }
  HarmonicBasis out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
  if (eig.info() != Eigen::Success) throw std::runtime_error("harmonic_basis: eigensolver failed");
  const double top = std::max(eig.eigenvalues().cwiseAbs().maxCoeff(), 1.0);
  std::vector<Eigen::Index> kernel;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
    if (eig.eigenvalues()(i) <= kNullTol * top) kernel.push_back(i);
  Eigen::MatrixXd Z(idx(N), idx(kernel.size()));
  for (std::size_t j = 0; j < kernel.size(); ++j) Z.col(idx(j)) = eig.eigenvectors().col(kernel[j]);
  if (Z.cols() > 0) {
    const Eigen::MatrixXd Mk(mass_exact(vk));
    const Eigen::MatrixXd gram = Z.transpose() * Mk * Z;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    // Q = Z L^-T gives Q^T M_k Q = I.
    out.vectors = llt.matrixU().solve(Z.transpose()).transpose();
  } else {
    out.vectors = Eigen::MatrixXd(idx(N), 0);
  }
  for (Eigen::Index j = 0; j < out.vectors.cols(); ++j) {
    const Vector q = out.vectors.col(j);
    if (Dk) out.max_dq = std::max(out.max_dq, (*Dk * q).norm());
    if (pair.has_sigma()) out.max_btq = std::max(out.max_btq, (B.transpose() * q).norm());
  }
  return out;
}

SparseMatrix saddle_matrix(const HodgeMatrices& m, Variant variant, const HarmonicBasis& H) {
  const auto ns = static_cast<Eigen::Index>(m.B.cols());
  const auto nu = m.S.rows();
  const auto np = H.vectors.cols();
  std::vector<Eigen::Triplet<double>> trips;
  if (ns > 0) {
    SparseMatrix storage;
    const auto& Ms = sigma_mass(m, variant, storage);
    append_block(trips, Ms, 0, 0, -1.0);
    append_block(trips, SparseMatrix(m.B.transpose()), 0, ns, 1.0);
    append_block(trips, m.B, ns, 0, 1.0);
  }
  append_block(trips, m.S, ns, ns, 1.0);
  if (np > 0) {
    const Eigen::MatrixXd MH = m.Mk * H.vectors;
    for (Eigen::Index j = 0; j < np; ++j)
      for (Eigen::Index i = 0; i < nu; ++i)
        if (MH(i, j) != 0.0) {
          trips.emplace_back(ns + i, ns + nu + j, MH(i, j));
          trips.emplace_back(ns + nu + j, ns + i, MH(i, j));
        }
  }
  SparseMatrix A(ns + nu + np, ns + nu + np);
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

Vector load_vector(const FeSpace& space, const FormField& f, int points) {
  const auto& mesh = space.mesh();
  const auto rule = reference_rule(space.cell_type(), space.n(), points);
  const auto tab = tabulate(space, rule);
  const std::size_t C = tab.comps;
  Vector F = Vector::Zero(idx(space.size()));
  std::vector<double> vals, dvals;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto g = cell_geometry(mesh, c);
    map_tabulation(space, c, g, tab, vals, dvals);
    const auto dofs = space.cell_dofs(c);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto fx = f(g.physical_point(rule.point(q)));
      const double w = rule.weights[q] * g.det;
      for (std::size_t j = 0; j < tab.local; ++j) {
        double acc = 0.0;
        for (std::size_t s = 0; s < C; ++s) acc += fx[s] * vals[(q * tab.local + j) * C + s];
        F(dofs[j]) += w * acc;
      }
    }
  }
  return F;
}

HodgeSolution solve_hodge(const HodgePair& pair, const HodgeMatrices& m, const HarmonicBasis& H, const Vector& F,
                          const SolveOptions& opts) {
  const auto ns = static_cast<Eigen::Index>(m.B.cols());
  const auto nu = m.S.rows();
  const auto np = H.vectors.cols();
  if (F.size() != nu) throw std::invalid_argument("solve_hodge: load vector size does not match V^k");
  HodgeSolution sol;
  sol.variant = opts.variant;
  sol.harmonic_dim = H.dim();
  const SparseMatrix A = saddle_matrix(m, opts.variant, H);
  Vector rhs = Vector::Zero(A.rows());
  rhs.segment(ns, nu) = F;
  Vector x = Vector::Zero(A.rows());

  const bool schur = opts.solver == SolverChoice::automatic && np == 0 && pair.has_sigma();
  const bool use_lu = opts.solver == SolverChoice::bordered_lu || (opts.solver == SolverChoice::automatic && !schur);

  if (F.norm() == 0.0) {
    sol.method = "zero";
  } else if (schur) {
    // Schur complement on u: (S + B M^-1 B^T) u = F, sigma = M^-1 B^T u. It is SPD when
    // there are no harmonic forms.
    const SparseMatrix Bt = m.B.transpose();
    const SparseMatrix Ah = m.S + m.B * m.Mh->inverse_sparse() * Bt;
    const bool direct = pair.mesh().dim() <= 2 || nu <= kDirectLimit3d;
    const SpdSolver lumped(Ah, direct, 0.1 * opts.tolerance);
    Vector u, sigma;
    if (opts.variant == Variant::lumped) {
      u = lumped.solve(F);
      sigma = m.Mh->solve(Bt * u);
      sol.iterations = lumped.iterations();
      sol.method = direct ? "schur-ldlt" : "schur-iccg";
    } else {
      // Inner exact-mass solves: LDLT when cheap, else CG preconditioned by the lumped mass,
      // which is spectrally equivalent to M.
      const bool mass_direct = pair.mesh().dim() <= 2 || ns <= kDirectLimit3d;
      std::optional<Eigen::SimplicialLDLT<SparseMatrix>> mass_ldlt;
      if (mass_direct) {
        mass_ldlt.emplace(m.M);
        if (mass_ldlt->info() != Eigen::Success) throw std::runtime_error("solve_hodge: exact mass is singular");
      }
      auto mass_solve = [&](const Vector& b) -> Vector {
        if (mass_direct) return mass_ldlt->solve(b);
        Vector y;
        pcg([&](const Vector& v) -> Vector { return m.M * v; },
                     [&](const Vector& r) -> Vector { return m.Mh->solve(r); }, b, y, 1e-14, 10 * static_cast<int>(ns) + 100);
        return y;
      };
      auto apply = [&](const Vector& v) -> Vector { return m.S * v + m.B * mass_solve(Bt * v); };
      auto precondition = [&](const Vector& r) -> Vector { return lumped.precondition(r); };
      sol.iterations = pcg(apply, precondition, F, u, 0.1 * opts.tolerance, 10 * static_cast<int>(nu) + 100);
      sigma = mass_solve(Bt * u);
      sol.method = "schur-pcg";
    }
    x.segment(0, ns) = sigma;
    x.segment(ns, nu) = u;
  } else if (use_lu) {
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw std::runtime_error("solve_hodge: saddle matrix is singular");
    x = lu.solve(rhs);
    sol.method = "bordered-lu";
  } else {
    Eigen::MINRES<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::IdentityPreconditioner> minres;
    minres.setTolerance(opts.tolerance);
    minres.setMaxIterations(10 * static_cast<int>(A.rows()));
    minres.compute(A);
    x = minres.solve(rhs);
    sol.iterations = static_cast<int>(minres.iterations());
    sol.method = "minres";
  }
  sol.sigma = x.segment(0, ns);
  sol.u = x.segment(ns, nu);
  sol.p = x.segment(ns + nu, np);
  sol.residual = relative_residual(A, x, rhs);
  return sol;
}

Vector coderivative_local(const HodgeMatrices& m, const FeSpace& vkm1, const Vector& u) {
  if (!m.Mh) throw std::invalid_argument("coderivative_local: needs k >= 1");
  const Vector rhs = m.B.transpose() * u;
  Vector out = Vector::Zero(idx(vkm1.size()));
  // Independent dense SPD solves, one per vertex, written to disjoint index sets.
  for (std::size_t v = 0; v < m.Mh->num_blocks(); ++v) {
    const auto& ids = m.Mh->block_indices(v);
    if (ids.empty()) continue;
    Eigen::VectorXd rb(idx(ids.size()));
    for (std::size_t i = 0; i < ids.size(); ++i) rb(idx(i)) = rhs(ids[i]);
    const Eigen::VectorXd xb = m.Mh->solve_block(v, rb);
    for (std::size_t i = 0; i < ids.size(); ++i) out(ids[i]) = xb(idx(i));
  }
  return out;
}

Vector coderivative_global(const HodgeMatrices& m, const Vector& u, Variant variant) {
  if (!m.Mh) throw std::invalid_argument("coderivative_global: needs k >= 1");
  SparseMatrix storage;
  const auto& Ms = sigma_mass(m, variant, storage);
  Eigen::SimplicialLDLT<SparseMatrix> solver(Ms);
  if (solver.info() != Eigen::Success) throw std::runtime_error("coderivative_global: mass is singular");
  return solver.solve(Vector(m.B.transpose() * u));
}

bool dof_is_far(const HodgePair& pair, int vertex, int dof) {
  const auto support = pair.vk().support(dof);
  const auto& patch = pair.mesh().vertex_cells(vertex);
  for (int c : support)
    if (std::find(patch.begin(), patch.end(), c) != patch.end()) return false;
  return true;
}

LocalityReport locality_certificate(const HodgePair& pair, const HodgeMatrices& m, const Vector& u, int vertex, int dof,
                                    Variant variant) {
  if (!pair.has_sigma()) throw std::invalid_argument("locality_certificate: needs k >= 1");
  LocalityReport rep;
  rep.vertex = vertex;
  rep.perturbed_dof = dof;
  rep.far = dof_is_far(pair, vertex, dof);
  Vector w = u;
  w(dof) += 1.0;
  const auto op = [&](const Vector& v) {
    return variant == Variant::lumped ? coderivative_local(m, pair.vkm1(), v) : coderivative_global(m, v, Variant::exact);
  };
  const Vector a = op(u);
  const Vector b = op(w);
  for (int i : pair.vkm1().vertex_dofs(vertex)) rep.max_change = std::max(rep.max_change, std::abs(b(i) - a(i)));
  return rep;
}

InfSupLevel infsup_estimate(const HodgePair& pair, const HodgeMatrices& m, const HarmonicBasis& H, Variant variant,
                            std::size_t max_dim) {
  const SparseMatrix A = saddle_matrix(m, variant, H);
  const auto dim = static_cast<std::size_t>(A.rows());
  if (dim > max_dim)
    throw std::invalid_argument("infsup_estimate: saddle dimension " + std::to_string(dim) + " exceeds the dense cap " +
                                std::to_string(max_dim));
  const auto ns = static_cast<Eigen::Index>(m.B.cols());
  const auto nu = m.S.rows();
  const auto np = H.vectors.cols();
  InfSupLevel out;
  out.h = pair.mesh().h();
  out.dim = dim;
  // Triple-norm Gram matrix: ||tau||_*^2 + ||d tau||^2, ||v||^2 + ||dv||^2, |q|^2.
  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(idx(dim), idx(dim));
  Eigen::MatrixXd Ms, DtMD;
  if (ns > 0) {
    SparseMatrix storage;
    Ms = Eigen::MatrixXd(sigma_mass(m, variant, storage));
    DtMD = Eigen::MatrixXd(SparseMatrix(m.Dkm1.transpose() * m.B));
    DtMD = 0.5 * (DtMD + DtMD.transpose());
    N.block(0, 0, ns, ns) = Ms + DtMD;
  }
  N.block(ns, ns, nu, nu) = Eigen::MatrixXd(m.Mk) + Eigen::MatrixXd(m.S);
  N.block(ns + nu, ns + nu, np, np) = Eigen::MatrixXd::Identity(np, np);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(Eigen::MatrixXd(A), N, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw std::runtime_error("infsup_estimate: eigensolver failed");
  out.infsup = eig.eigenvalues().cwiseAbs().minCoeff();
  if (ns > 0) {
    // c_P^2 = 1 / smallest nonzero eigenvalue of (D^T M_k D, M_*).
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> pe(DtMD, Ms, Eigen::EigenvaluesOnly);
    if (pe.info() != Eigen::Success) throw std::runtime_error("infsup_estimate: eigensolver failed");
    const double top = pe.eigenvalues().maxCoeff();
    double lo = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < pe.eigenvalues().size(); ++i)
      if (pe.eigenvalues()(i) > kNullTol * top) lo = std::min(lo, pe.eigenvalues()(i));
    out.c_p = std::isfinite(lo) ? 1.0 / std::sqrt(lo) : 0.0;
  }
  return out;
}

}  // namespace lochodge
