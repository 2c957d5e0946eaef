#include <lochodge/assembly.hpp>

#include <json.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace lochodge {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// a^T K^-1 b over C components; the plain dot product without K.
inline double weighted_dot(const double* a, const double* b, std::size_t C, const std::vector<double>* kinv) {
  double acc = 0.0;
  if (kinv == nullptr) {
    for (std::size_t s = 0; s < C; ++s) acc += a[s] * b[s];
    return acc;
  }
  for (std::size_t s = 0; s < C; ++s) {
    double inner = 0.0;
    for (std::size_t t = 0; t < C; ++t) inner += (*kinv)[s * C + t] * b[t];
    acc += a[s] * inner;
  }
  return acc;
}

void check_coefficient(const FeSpace& space, const CoefficientField* K) {
  if (K == nullptr) return;
  if (K->k() != space.k() || K->n() != space.n() || K->num_cells() != static_cast<std::size_t>(space.mesh().num_cells()))
    throw std::invalid_argument("coefficient field does not match the space (degree, dimension or cell count)");
}

double scaled_rule_weight(const QuadratureRule& rule, std::size_t q, const CellGeometry& g) { return rule.weights[q] * g.det; }

}  // namespace

CoefficientField::CoefficientField(int n, int k, std::vector<std::vector<double>> cells)
    : n_(n), k_(k), comps_(static_cast<std::size_t>(binomial(n, k))), cells_(std::move(cells)) {
  const auto C = static_cast<Eigen::Index>(comps_);
  min_eig_ = std::numeric_limits<double>::infinity();
  max_eig_ = 0.0;
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const auto& m = cells_[c];
    if (m.size() != comps_ * comps_)
      throw std::invalid_argument("coefficient field: cell " + std::to_string(c) + " matrix has the wrong size");
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> A(m.data(), C, C);
    const double scale = A.cwiseAbs().maxCoeff();
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw std::invalid_argument("coefficient field: cell " + std::to_string(c) + " matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Eigen::MatrixXd(A), Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    if (!(lo > 0.0)) throw std::invalid_argument("coefficient field: cell " + std::to_string(c) + " matrix is not positive definite");
    min_eig_ = std::min(min_eig_, lo);
    max_eig_ = std::max(max_eig_, eig.eigenvalues().maxCoeff());
    const Eigen::MatrixXd inv = Eigen::MatrixXd(A).inverse();
    std::vector<double> flat(comps_ * comps_);
    for (Eigen::Index i = 0; i < C; ++i)
      for (Eigen::Index j = 0; j < C; ++j) flat[static_cast<std::size_t>(i * C + j)] = inv(i, j);
    inverses_.push_back(std::move(flat));
  }
}

CoefficientField CoefficientField::constant(const MeshComplex& mesh, int k, const std::vector<double>& matrix) {
  return CoefficientField(mesh.dim(), k, std::vector<std::vector<double>>(static_cast<std::size_t>(mesh.num_cells()), matrix));
}

CoefficientField CoefficientField::identity(const MeshComplex& mesh, int k) {
  const auto C = static_cast<std::size_t>(binomial(mesh.dim(), k));
  std::vector<double> id(C * C, 0.0);
  for (std::size_t i = 0; i < C; ++i) id[i * C + i] = 1.0;
  return constant(mesh, k, id);
}

CoefficientField coefficient_from_json(std::string_view text, const MeshComplex& mesh) {
  const auto doc = nlohmann::json::parse(text);
  const int k = doc.at("k").get<int>();
  if (k < 0 || k > mesh.dim()) throw std::invalid_argument("coefficient json: k out of range");
  std::vector<std::vector<double>> cells;
  for (const auto& rows : doc.at("cells")) {
    std::vector<double> flat;
    for (const auto& row : rows)
      for (const auto& x : row) flat.push_back(x.get<double>());
    cells.push_back(std::move(flat));
  }
  if (cells.size() != static_cast<std::size_t>(mesh.num_cells()))
    throw std::invalid_argument("coefficient json: " + std::to_string(cells.size()) + " cells given, mesh has " +
                                std::to_string(mesh.num_cells()));
  return CoefficientField(mesh.dim(), k, std::move(cells));
}

std::string coefficient_to_json(const CoefficientField& K) {
  nlohmann::json doc;
  doc["k"] = K.k();
  auto cells = nlohmann::json::array();
  const std::size_t C = K.comps();
  for (std::size_t c = 0; c < K.num_cells(); ++c) {
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < C; ++i) {
      std::vector<double> row(K.matrix(static_cast<int>(c)).begin() + static_cast<std::ptrdiff_t>(i * C),
                              K.matrix(static_cast<int>(c)).begin() + static_cast<std::ptrdiff_t>((i + 1) * C));
      rows.push_back(row);
    }
    cells.push_back(rows);
  }
  doc["cells"] = cells;
  return doc.dump();
}

QuadratureRule exact_mass_rule(ReferenceCell cell, int n) {
  // Simplex: P1 products have total degree 2. Box: S1plus products reach degree 4 per variable.
  return cell == ReferenceCell::simplex ? simplex_rule(n, 2) : cube_rule(n, 3);
}

SparseMatrix cross_mass(const FeSpace& row_space, const FeSpace& col_space, const QuadratureRule& rule,
                        const CoefficientField* K) {
  if (&row_space.mesh() != &col_space.mesh() || row_space.k() != col_space.k())
    throw std::invalid_argument("cross_mass: spaces differ in mesh or degree");
  check_coefficient(row_space, K);
  const auto& mesh = row_space.mesh();
  const auto tr = tabulate(row_space, rule);
  const auto tc = tabulate(col_space, rule);
  const std::size_t C = tr.comps;
  Triplets trips;
  std::vector<double> rv, rdv, cv, cdv;
  std::vector<double> local(tr.local * tc.local);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto g = cell_geometry(mesh, c);
    map_tabulation(row_space, c, g, tr, rv, rdv);
    map_tabulation(col_space, c, g, tc, cv, cdv);
    const std::vector<double>* kinv = K ? &K->inverse(c) : nullptr;
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = scaled_rule_weight(rule, q, g);
      for (std::size_t i = 0; i < tr.local; ++i)
        for (std::size_t j = 0; j < tc.local; ++j)
          local[i * tc.local + j] += w * weighted_dot(&rv[(q * tr.local + i) * C], &cv[(q * tc.local + j) * C], C, kinv);
    }
    const auto rd = row_space.cell_dofs(c);
    const auto cd = col_space.cell_dofs(c);
    for (std::size_t i = 0; i < tr.local; ++i)
      for (std::size_t j = 0; j < tc.local; ++j)
        if (local[i * tc.local + j] != 0.0) trips.emplace_back(rd[i], cd[j], local[i * tc.local + j]);
  }
  SparseMatrix m(static_cast<Eigen::Index>(row_space.size()), static_cast<Eigen::Index>(col_space.size()));
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

SparseMatrix mass_exact(const FeSpace& space, const CoefficientField* K) {
  return cross_mass(space, space, exact_mass_rule(space.cell_type(), space.n()), K);
}

SparseMatrix mass_lumped_matrix(const FeSpace& space, const CoefficientField* K) {
  return cross_mass(space, space, vertex_rule(space.cell_type(), space.n()), K);
}

Vector BlockDiagonalOperator::apply(const Vector& x) const {
  Vector y = Vector::Zero(static_cast<Eigen::Index>(size_));
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const auto& idx = indices_[b];
    Eigen::VectorXd xb(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) xb(static_cast<Eigen::Index>(i)) = x(idx[i]);
    const Eigen::VectorXd yb = blocks_[b] * xb;
    for (std::size_t i = 0; i < idx.size(); ++i) y(idx[i]) = yb(static_cast<Eigen::Index>(i));
  }
  return y;
}

Eigen::VectorXd BlockDiagonalOperator::solve_block(std::size_t v, const Eigen::VectorXd& rhs) const {
  return factors_[v].solve(rhs);
}

Vector BlockDiagonalOperator::solve(const Vector& rhs) const {
  Vector x = Vector::Zero(static_cast<Eigen::Index>(size_));
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const auto& idx = indices_[b];
    if (idx.empty()) continue;
    Eigen::VectorXd rb(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) rb(static_cast<Eigen::Index>(i)) = rhs(idx[i]);
    const Eigen::VectorXd xb = factors_[b].solve(rb);
    for (std::size_t i = 0; i < idx.size(); ++i) x(idx[i]) = xb(static_cast<Eigen::Index>(i));
  }
  return x;
}

SparseMatrix BlockDiagonalOperator::to_sparse() const {
  Triplets trips;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const auto& idx = indices_[b];
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j)
        trips.emplace_back(idx[i], idx[j], blocks_[b](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  }
  SparseMatrix m(static_cast<Eigen::Index>(size_), static_cast<Eigen::Index>(size_));
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

SparseMatrix BlockDiagonalOperator::inverse_sparse() const {
  Triplets trips;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const auto& idx = indices_[b];
    if (idx.empty()) continue;
    const Eigen::MatrixXd inv = factors_[b].solve(Eigen::MatrixXd::Identity(blocks_[b].rows(), blocks_[b].cols()));
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j)
        trips.emplace_back(idx[i], idx[j], inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  }
  SparseMatrix m(static_cast<Eigen::Index>(size_), static_cast<Eigen::Index>(size_));
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

BlockDiagonalOperator mass_lumped(const FeSpace& space, const CoefficientField* K) {
  const bool ok = (space.family() == SpaceFamily::P1 && space.cell_type() == ReferenceCell::simplex) ||
                  (space.family() == SpaceFamily::S1plus && space.cell_type() == ReferenceCell::cube);
  if (!ok) throw std::invalid_argument("mass_lumped: needs P1 on simplices or S1plus on boxes");
  check_coefficient(space, K);
  const auto& mesh = space.mesh();
  BlockDiagonalOperator op;
  op.size_ = space.size();
  const auto nv = static_cast<std::size_t>(mesh.num_vertices());
  op.indices_.resize(nv);
  op.blocks_.resize(nv);
  std::vector<int> position(space.size(), -1);
  for (std::size_t v = 0; v < nv; ++v) {
    op.indices_[v] = space.vertex_dofs(static_cast<int>(v));
    for (std::size_t i = 0; i < op.indices_[v].size(); ++i) position[static_cast<std::size_t>(op.indices_[v][i])] = static_cast<int>(i);
    const auto m = static_cast<Eigen::Index>(op.indices_[v].size());
    op.blocks_[v] = Eigen::MatrixXd::Zero(m, m);
  }
  const auto rule = vertex_rule(space.cell_type(), space.n());
  const auto tab = tabulate(space, rule);
  const std::size_t C = tab.comps;
  const auto& anchors = space.local_anchors();
  std::vector<double> vals, dvals;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto g = cell_geometry(mesh, c);
    map_tabulation(space, c, g, tab, vals, dvals);
    const auto dofs = space.cell_dofs(c);
    const auto& cv = mesh.cell_vertices(c);
    const std::vector<double>* kinv = K ? &K->inverse(c) : nullptr;
    // Vertex rule point q is local vertex q; only dofs anchored there are nonzero.
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = scaled_rule_weight(rule, q, g);
      auto& block = op.blocks_[static_cast<std::size_t>(cv[q])];
      for (std::size_t i = 0; i < tab.local; ++i) {
        if (anchors[i] != static_cast<int>(q)) continue;
        const int pi = position[static_cast<std::size_t>(dofs[i])];
        for (std::size_t j = 0; j < tab.local; ++j) {
          if (anchors[j] != static_cast<int>(q)) continue;
          const int pj = position[static_cast<std::size_t>(dofs[j])];
          block(pi, pj) += w * weighted_dot(&vals[(q * tab.local + i) * C], &vals[(q * tab.local + j) * C], C, kinv);
        }
      }
    }
  }
  op.factors_.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    if (op.blocks_[v].size() == 0) continue;
    op.factors_[v].compute(op.blocks_[v]);
    if (op.factors_[v].info() != Eigen::Success)
      throw std::runtime_error("mass_lumped: block of vertex " + std::to_string(v) + " is not positive definite");
  }
  return op;
}

SparseMatrix stiffness_matrix(const FeSpace& space) {
  const auto& mesh = space.mesh();
  SparseMatrix S(static_cast<Eigen::Index>(space.size()), static_cast<Eigen::Index>(space.size()));
  if (space.k() >= space.n()) return S;
  const auto rule = exact_mass_rule(space.cell_type(), space.n());
  const auto tab = tabulate(space, rule);
  const std::size_t Cd = tab.dcomps;
  Triplets trips;
  std::vector<double> v, dv;
  std::vector<double> local(tab.local * tab.local);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto g = cell_geometry(mesh, c);
    map_tabulation(space, c, g, tab, v, dv);
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = scaled_rule_weight(rule, q, g);
      for (std::size_t i = 0; i < tab.local; ++i)
        for (std::size_t j = 0; j < tab.local; ++j)
          local[i * tab.local + j] += w * weighted_dot(&dv[(q * tab.local + i) * Cd], &dv[(q * tab.local + j) * Cd], Cd, nullptr);
    }
    const auto dofs = space.cell_dofs(c);
    for (std::size_t i = 0; i < tab.local; ++i)
      for (std::size_t j = 0; j < tab.local; ++j)
        if (local[i * tab.local + j] != 0.0) trips.emplace_back(dofs[i], dofs[j], local[i * tab.local + j]);
  }
  S.setFromTriplets(trips.begin(), trips.end());
  return S;
}

MixedMatrices mixed_matrices(const FeSpace& space_km1, const FeSpace& space_k) {
  if (&space_km1.mesh() != &space_k.mesh() || space_k.k() != space_km1.k() + 1)
    throw std::invalid_argument("mixed_matrices: needs V^{k-1} and V^k on one mesh");
  // Validates the pair.
  (void)exterior_derivative_matrix(space_km1, space_k);
  const auto& mesh = space_k.mesh();
  const auto rule = exact_mass_rule(space_k.cell_type(), space_k.n());
  const auto ta = tabulate(space_km1, rule);
  const auto tb = tabulate(space_k, rule);
  const std::size_t C = tb.comps;
  Triplets trips;
  std::vector<double> av, adv, bv, bdv;
  std::vector<double> local(tb.local * ta.local);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto g = cell_geometry(mesh, c);
    map_tabulation(space_km1, c, g, ta, av, adv);
    map_tabulation(space_k, c, g, tb, bv, bdv);
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = scaled_rule_weight(rule, q, g);
      for (std::size_t i = 0; i < tb.local; ++i)
        for (std::size_t j = 0; j < ta.local; ++j)
          local[i * ta.local + j] += w * weighted_dot(&bv[(q * tb.local + i) * C], &adv[(q * ta.local + j) * C], C, nullptr);
    }
    const auto da = space_km1.cell_dofs(c);
    const auto db = space_k.cell_dofs(c);
    for (std::size_t i = 0; i < tb.local; ++i)
      for (std::size_t j = 0; j < ta.local; ++j)
        if (local[i * ta.local + j] != 0.0) trips.emplace_back(db[i], da[j], local[i * ta.local + j]);
  }
  MixedMatrices out;
  out.B.resize(static_cast<Eigen::Index>(space_k.size()), static_cast<Eigen::Index>(space_km1.size()));
  out.B.setFromTriplets(trips.begin(), trips.end());
  out.S = stiffness_matrix(space_k);
  return out;
}

SpectralRange condition_A_range(const FeSpace& space, const CoefficientField* K, std::size_t max_dim) {
  if (space.size() > max_dim)
    throw std::invalid_argument("condition_A_range: dimension " + std::to_string(space.size()) + " exceeds the dense cap");
  const Eigen::MatrixXd Mh(mass_lumped(space, K).to_sparse());
  const Eigen::MatrixXd M(mass_exact(space, K));
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(Mh, M, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw std::runtime_error("condition_A_range: eigensolver failed");
  return {eig.eigenvalues().minCoeff(), eig.eigenvalues().maxCoeff()};
}

SpectralRange condition_A_range_lanczos(const FeSpace& space, const CoefficientField* K, int max_steps,
                                        double rel_tol, unsigned seed) {
  const auto Mh = mass_lumped(space, K);
  const SparseMatrix M = mass_exact(space, K);
  const SparseMatrix H = Mh.to_sparse();
  const auto N = static_cast<Eigen::Index>(space.size());
  const int steps = static_cast<int>(std::min<Eigen::Index>(max_steps, N));
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::VectorXd v(N);
  for (Eigen::Index i = 0; i < N; ++i) v(i) = unif(rng);
  // Lanczos vectors V (M_h-orthonormal) and AV = M V, so that <x, V_j>_h = x . (M_h V_j).
  Eigen::MatrixXd V(N, steps), HV(N, steps);
  std::vector<double> alpha, beta;
  v /= std::sqrt(v.dot(H * v));
  Eigen::VectorXd hv = H * v;
  SpectralRange out{0.0, 0.0};
  for (int j = 0; j < steps; ++j) {
    V.col(j) = v;
    HV.col(j) = hv;
    const Eigen::VectorXd Mv = M * v;
    Eigen::VectorXd w = Mh.solve(Mv);
    alpha.push_back(Mv.dot(v));
    // Full reorthogonalization, twice, in the M_h product.
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd c = HV.leftCols(j + 1).transpose() * w;
      w -= V.leftCols(j + 1) * c;
    }
    const Eigen::VectorXd hw = H * w;
    const double b = std::sqrt(std::max(w.dot(hw), 0.0));

    const bool last = b <= 1e-12 * std::abs(alpha.back()) || j + 1 == steps;
    if (j % 5 != 4 && !last) {
      beta.push_back(b);
      v = w / b;
      hv = hw / b;
      continue;
    }
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(j + 1, j + 1);
    for (int i = 0; i <= j; ++i) {
      T(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i > 0) T(i, i - 1) = T(i - 1, i) = beta[static_cast<std::size_t>(i - 1)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(T);
    const auto& theta = eig.eigenvalues();
    const auto& S = eig.eigenvectors();
    // Ritz values of M_h^-1 M are reciprocals of those of (M_h, M).
    out = {1.0 / theta(j), 1.0 / theta(0)};
    // Residual bound of a Ritz pair: |b * last component of its Ritz vector|.
    const bool converged = std::abs(b * S(j, j)) <= rel_tol * theta(j) && std::abs(b * S(j, 0)) <= rel_tol * theta(0);
    if (converged || last) {
      if (!converged && steps < N) break;
      return out;
    }
    beta.push_back(b);
    v = w / b;
    hv = hw / b;
  }
  if (steps < N) throw std::runtime_error("condition_A_range_lanczos: extreme Ritz pairs did not converge");
  return out;
}

ConditionAReport verify_condition_A(Domain domain, MeshKind kind, int k, const std::vector<int>& levels,
                                    const CoefficientFactory& K, std::size_t dense_cap) {
  ConditionAReport rep;
  const auto family = kind == MeshKind::simplicial ? SpaceFamily::P1 : SpaceFamily::S1plus;
  for (int level : levels) {
    const auto mesh = build_grid(domain, kind, level);
    const FeSpace v(mesh, family, k);
    std::optional<CoefficientField> field;
    if (K) field = K(mesh);
    ConditionALevel row;
    row.level = level;
    row.h = mesh.h();
    row.dofs = v.size();
    row.range = v.size() <= dense_cap ? condition_A_range(v, field ? &*field : nullptr, dense_cap)
                                      : condition_A_range_lanczos(v, field ? &*field : nullptr);
    rep.levels.push_back(row);
  }
  for (std::size_t i = 1; i < rep.levels.size(); ++i) {
    const auto& a = rep.levels[i - 1].range;
    const auto& b = rep.levels[i].range;
    rep.drift_min = std::max(rep.drift_min, std::abs(b.min - a.min) / a.min);
    rep.drift_max = std::max(rep.drift_max, std::abs(b.max - a.max) / a.max);
  }
  return rep;
}

ConditionBReport verify_condition_B(const MeshComplex& mesh, int k, int trials, unsigned seed,
                                    const CoefficientField* K) {
  ConditionBReport rep;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const FeSpace w(mesh, SpaceFamily::P0, k);
  const auto exact = exact_mass_rule(mesh.cell_type(), mesh.dim());
  const auto vertex = vertex_rule(mesh.cell_type(), mesh.dim());
  auto norm_of = [](const SparseMatrix& M, const Vector& u) { return std::sqrt(u.dot(M * u)); };
  auto random_vector = [&](std::size_t n) {
    Vector u(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = unif(rng);
    return u;
  };
  if (mesh.kind() == MeshKind::simplicial) {
    const FeSpace v(mesh, SpaceFamily::P1, k);
    const SparseMatrix Ch = cross_mass(v, w, vertex, K);
    const SparseMatrix Ce = cross_mass(v, w, exact, K);
    const SparseMatrix M = mass_exact(v, K);
    for (int t = 0; t < trials; ++t) {
      const Vector u = random_vector(v.size());
      const Vector gap = Ch.transpose() * u - Ce.transpose() * u;
      rep.exact_vs_lumped = std::max(rep.exact_vs_lumped, gap.cwiseAbs().maxCoeff() / norm_of(M, u));
    }
    return rep;
  }
  const FeSpace s(mesh, SpaceFamily::S1plus, k);
  const FeSpace q(mesh, SpaceFamily::Q1minus, k);
  const SparseMatrix P = pi_h_matrix(s, q);
  const SparseMatrix ChQ = cross_mass(q, w, vertex, K);
  const SparseMatrix CeQ = cross_mass(q, w, exact, K);
  const SparseMatrix ChS = cross_mass(s, w, vertex, K);
  const SparseMatrix CeS = cross_mass(s, w, exact, K);
  const SparseMatrix MS = mass_exact(s, K);
  const SparseMatrix MQ = mass_exact(q, K);
  std::optional<SparseMatrix> DS, DQ;
  if (k < mesh.dim()) {
    const FeSpace q1(mesh, SpaceFamily::Q1minus, k + 1);
    DS = exterior_derivative_matrix(s, q1);
    DQ = exterior_derivative_matrix(q, q1);
  }
  for (int t = 0; t < trials; ++t) {
    const Vector u = random_vector(s.size());
    const Vector pu = P * u;
    const double nu = norm_of(MS, u);
    const double npu = norm_of(MQ, pu);
    if (npu > 0.0)
      rep.exact_vs_lumped =
          std::max(rep.exact_vs_lumped, (ChQ.transpose() * pu - CeQ.transpose() * pu).cwiseAbs().maxCoeff() / npu);
    rep.pi_h_lumped = std::max(rep.pi_h_lumped, (ChQ.transpose() * pu - ChS.transpose() * u).cwiseAbs().maxCoeff() / nu);
    rep.raw_s1plus_gap = std::max(rep.raw_s1plus_gap, (ChS.transpose() * u - CeS.transpose() * u).cwiseAbs().maxCoeff() / nu);
    if (DS) rep.d_pi_h = std::max(rep.d_pi_h, (*DQ * pu - *DS * u).cwiseAbs().maxCoeff() / nu);
  }
  return rep;
}

}  // namespace lochodge
