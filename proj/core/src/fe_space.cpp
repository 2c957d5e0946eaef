#include <lochodge/fe_space.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lochodge {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kInsideTol = 1e-12;

std::vector<double> to_doubles(const std::vector<Rational>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(to_double(x));
  return out;
}

bool legal_derivative_pair(SpaceFamily src, SpaceFamily dst) {
  return (src == SpaceFamily::P1 && dst == SpaceFamily::P1minus) ||
         (src == SpaceFamily::P1minus && dst == SpaceFamily::P1minus) ||
         (src == SpaceFamily::Q1minus && dst == SpaceFamily::Q1minus) ||
         (src == SpaceFamily::S1plus && dst == SpaceFamily::Q1minus);
}

// Assembles a reference-invariant local matrix (rows: dst dofs, cols: src dofs)
// into a global one. Every entry is determined by the functionals alone, so all
// cells sharing an entry must agree.
SparseMatrix assemble_invariant(const FeSpace& src, const FeSpace& dst, const RationalMatrix& local) {
  std::vector<double> lv(local.rows() * local.cols());
  for (std::size_t i = 0; i < local.rows(); ++i)
    for (std::size_t j = 0; j < local.cols(); ++j) lv[i * local.cols() + j] = to_double(local(i, j));
  struct Entry {
    int row;
    int col;
    double value;
  };
  std::vector<Entry> entries;
  const auto& mesh = src.mesh();
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto rd = dst.cell_dofs(c);
    const auto rs = dst.cell_signs(c);
    const auto cd = src.cell_dofs(c);
    const auto cs = src.cell_signs(c);
    for (std::size_t a = 0; a < rd.size(); ++a)
      for (std::size_t b = 0; b < cd.size(); ++b) {
        const double v = lv[a * local.cols() + b];
        if (v != 0.0) entries.push_back({rd[a], cd[b], rs[a] * cs[b] * v});
      }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    return x.col != y.col ? x.col < y.col : x.row < y.row;
  });
  std::vector<Eigen::Triplet<double>> trips;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0 && entries[i].row == entries[i - 1].row && entries[i].col == entries[i - 1].col) {
      if (std::abs(entries[i].value - entries[i - 1].value) > 1e-12 * (1.0 + std::abs(entries[i].value)))
        throw std::logic_error("inconsistent cell contributions to an invariant matrix");
      continue;
    }
    trips.emplace_back(entries[i].row, entries[i].col, entries[i].value);
  }
  SparseMatrix m(static_cast<Eigen::Index>(dst.size()), static_cast<Eigen::Index>(src.size()));
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

bool inside_reference(ReferenceCell cell, std::span<const double> xhat) {
  double sum = 0.0;
  for (double t : xhat) {
    if (t < -kInsideTol) return false;
    if (cell == ReferenceCell::cube && t > 1.0 + kInsideTol) return false;
    sum += t;
  }
  return cell == ReferenceCell::cube || sum <= 1.0 + kInsideTol;
}

// phi_hat(F^* field) for one reference functional.
double apply_functional(const FeSpace& space, const CellGeometry& g, const DofDescriptor& dof, const FormField& field,
                        int points) {
  const int n = space.n();
  const int k = space.k();
  const auto cell = space.cell_type();
  const auto& rf = reference_faces(cell, n, k)[static_cast<std::size_t>(dof.face)];
  auto push = [&](std::span<const double> v) {
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out[static_cast<std::size_t>(i)] += g.jacobian[static_cast<std::size_t>(i * n + j)] * v[static_cast<std::size_t>(j)];
    return out;
  };
  if (dof.kind == DofKind::vertex) {
    const auto x0hat = to_doubles(reference_vertex(cell, n, dof.anchor));
    std::vector<double> vecs;
    for (int nb : anchor_neighbours(cell, rf, dof.anchor)) {
      auto e = to_doubles(reference_vertex(cell, n, nb));
      for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i)] -= x0hat[static_cast<std::size_t>(i)];
      const auto pe = push(e);
      vecs.insert(vecs.end(), pe.begin(), pe.end());
    }
    return alt_apply(field(g.physical_point(x0hat)), std::span<const double>(vecs));
  }
  const auto base = to_doubles(rf.chart.base);
  const auto frame = to_doubles(rf.chart.frame);
  const int m = rf.chart.m;
  std::vector<double> vecs;
  for (int j = 0; j < m; ++j) {
    std::vector<double> col(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = frame[static_cast<std::size_t>(i * m + j)];
    const auto pc = push(col);
    vecs.insert(vecs.end(), pc.begin(), pc.end());
  }
  const auto rule = reference_rule(rf.chart.intrinsic, m, points);
  double total = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto t = rule.point(q);
    std::vector<double> yhat = base;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        yhat[static_cast<std::size_t>(i)] += frame[static_cast<std::size_t>(i * m + j)] * t[static_cast<std::size_t>(j)];
    double weight = rule.weights[q];
    if (dof.kind == DofKind::weighted_integral)
      for (int j = 0; j < m; ++j)
        if (dof.weight[static_cast<std::size_t>(j)] != 0) weight *= t[static_cast<std::size_t>(j)];
    total += weight * alt_apply(field(g.physical_point(yhat)), std::span<const double>(vecs));
  }
  return total;
}

double reference_volume(ReferenceCell cell, int n) {
  double v = 1.0;
  if (cell == ReferenceCell::simplex)
    for (int i = 2; i <= n; ++i) v /= i;
  return v;
}

}  // namespace

std::vector<double> CellGeometry::physical_point(std::span<const double> xhat) const {
  std::vector<double> x = origin;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      x[static_cast<std::size_t>(i)] += jacobian[static_cast<std::size_t>(i * n + j)] * xhat[static_cast<std::size_t>(j)];
  return x;
}

std::vector<double> CellGeometry::reference_point(std::span<const double> x) const {
  std::vector<double> xhat(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      xhat[static_cast<std::size_t>(i)] +=
          inverse[static_cast<std::size_t>(i * n + j)] * (x[static_cast<std::size_t>(j)] - origin[static_cast<std::size_t>(j)]);
  return xhat;
}

CellGeometry cell_geometry(const MeshComplex& mesh, int c) {
  CellGeometry g;
  g.n = mesh.dim();
  mesh.cell_map(c, g.origin, g.jacobian);
  const int n = g.n;
  Eigen::Map<const RowMat> J(g.jacobian.data(), n, n);
  const RowMat inv = J.inverse();
  g.inverse.assign(inv.data(), inv.data() + n * n);
  g.det = std::abs(J.determinant());
  for (int k = 0; k <= n; ++k) g.pull.push_back(alt_pullback_matrix<double>(g.inverse, n, n, k));
  return g;
}

FeSpace::FeSpace(const MeshComplex& mesh, SpaceFamily family, int k) : mesh_(&mesh), family_(family), k_(k) {
  const int n = mesh.dim();
  if (k < 0 || k > n) throw std::invalid_argument("build_space: need 0 <= k <= n");
  const auto cell = mesh.cell_type();
  if (family == SpaceFamily::P0) {
    const int comps = binomial(n, k);
    local_size_ = comps;
    for (int c = 0; c < mesh.num_cells(); ++c)
      for (int s = 0; s < comps; ++s) {
        dofs_.push_back({c, s});
        cell_dofs_.push_back(c * comps + s);
        cell_signs_.push_back(1.0);
      }
    local_anchors_.assign(static_cast<std::size_t>(comps), -1);
    for (const auto& s : alt_index_set(n, k)) basis_.push_back(PolyForm<double>::constant(AltForm<double>::basis(s)));
    return;
  }
  if (family_cell(family) != cell)
    throw std::invalid_argument("build_space: " + std::string(family_name(family)) + " does not live on " +
                                std::string(kind_name(mesh.kind())) + " meshes");
  ref_ = &reference_element(family, n, k);
  local_size_ = static_cast<int>(ref_->dofs.size());
  for (const auto& d : ref_->dofs) local_anchors_.push_back(d.kind == DofKind::vertex ? d.anchor : -1);

  const int per_face = anchored() ? (cell == ReferenceCell::simplex ? k + 1 : (1 << k)) : 1;
  for (int f = 0; f < mesh.num_faces(k); ++f) {
    const auto& fv = mesh.face_vertices(k, f);
    for (int a = 0; a < per_face; ++a) dofs_.push_back({f, anchored() ? fv[static_cast<std::size_t>(a)] : -1});
  }
  const auto& rfaces = reference_faces(cell, n, k);
  cell_dofs_.reserve(static_cast<std::size_t>(mesh.num_cells() * local_size_));
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cv = mesh.cell_vertices(c);
    const auto faces = mesh.cell_faces(c, k);
    for (const auto& d : ref_->dofs) {
      const int gface = faces[static_cast<std::size_t>(d.face)];
      const auto& rf = rfaces[static_cast<std::size_t>(d.face)];
      int gid = gface * per_face;
      double sign = 1.0;
      if (d.kind == DofKind::vertex) {
        const auto& fv = mesh.face_vertices(k, gface);
        const int ga = cv[static_cast<std::size_t>(d.anchor)];
        gid += static_cast<int>(std::find(fv.begin(), fv.end(), ga) - fv.begin());
        if (cell == ReferenceCell::simplex) {
          std::vector<int> seq;
          for (int nb : anchor_neighbours(cell, rf, d.anchor)) seq.push_back(cv[static_cast<std::size_t>(nb)]);
          sign = permutation_parity(seq);
        }
      } else if (cell == ReferenceCell::simplex) {
        std::vector<int> seq;
        for (int v : rf.vertices) seq.push_back(cv[static_cast<std::size_t>(v)]);
        sign = permutation_parity(seq);
      }
      cell_dofs_.push_back(gid);
      cell_signs_.push_back(sign);
    }
  }
  if (anchored()) {
    vertex_dofs_.assign(static_cast<std::size_t>(mesh.num_vertices()), {});
    for (std::size_t i = 0; i < dofs_.size(); ++i)
      vertex_dofs_[static_cast<std::size_t>(dofs_[i].anchor)].push_back(static_cast<int>(i));
  }
  for (const auto& u : ref_->dual) basis_.push_back(to_double(u));
  for (const auto& u : ref_->d_dual) d_basis_.push_back(to_double(u));
}

const std::vector<int>& FeSpace::vertex_dofs(int v) const {
  if (!anchored()) throw std::logic_error("vertex_dofs: space has no anchored degrees of freedom");
  return vertex_dofs_[static_cast<std::size_t>(v)];
}

std::vector<int> FeSpace::support(int i) const {
  const auto& d = dof(i);
  if (family_ == SpaceFamily::P0) return {d.face};
  // Omega_f is contained in Omega_x for anchored dofs.
  return mesh_->macroelement(k_, d.face);
}

FeSpace build_space(const MeshComplex& mesh, SpaceFamily family, int k) { return FeSpace(mesh, family, k); }

Tabulation tabulate(const FeSpace& space, const QuadratureRule& rule) {
  Tabulation t;
  const int n = space.n();
  t.points = rule.size();
  t.local = static_cast<std::size_t>(space.local_size());
  t.comps = static_cast<std::size_t>(binomial(n, space.k()));
  t.dcomps = space.reference_derivatives().empty() ? 0 : static_cast<std::size_t>(binomial(n, space.k() + 1));
  t.values.resize(t.points * t.local * t.comps);
  t.dvalues.resize(t.points * t.local * t.dcomps);
  for (std::size_t q = 0; q < t.points; ++q) {
    const auto x = rule.point(q);
    for (std::size_t j = 0; j < t.local; ++j) {
      const auto v = space.reference_basis()[j].evaluate<double>(x);
      for (std::size_t s = 0; s < t.comps; ++s) t.values[(q * t.local + j) * t.comps + s] = v[s];
      if (t.dcomps > 0) {
        const auto dv = space.reference_derivatives()[j].evaluate<double>(x);
        for (std::size_t s = 0; s < t.dcomps; ++s) t.dvalues[(q * t.local + j) * t.dcomps + s] = dv[s];
      }
    }
  }
  return t;
}

void map_tabulation(const FeSpace& space, int c, const CellGeometry& g, const Tabulation& tab,
                    std::vector<double>& values, std::vector<double>& dvalues) {
  values.assign(tab.values.size(), 0.0);
  dvalues.assign(tab.dvalues.size(), 0.0);
  const auto signs = space.cell_signs(c);
  if (!space.mapped()) {
    values = tab.values;
    return;
  }
  const auto& P = g.pull[static_cast<std::size_t>(space.k())];
  const std::size_t C = tab.comps;
  for (std::size_t q = 0; q < tab.points; ++q)
    for (std::size_t j = 0; j < tab.local; ++j) {
      const double s = signs[j];
      const double* in = &tab.values[(q * tab.local + j) * C];
      double* out = &values[(q * tab.local + j) * C];
      for (std::size_t r = 0; r < C; ++r) {
        double acc = 0.0;
        for (std::size_t t = 0; t < C; ++t) acc += P[r * C + t] * in[t];
        out[r] = s * acc;
      }
    }
  if (tab.dcomps == 0) return;
  const auto& Pd = g.pull[static_cast<std::size_t>(space.k() + 1)];
  const std::size_t D = tab.dcomps;
  for (std::size_t q = 0; q < tab.points; ++q)
    for (std::size_t j = 0; j < tab.local; ++j) {
      const double s = signs[j];
      const double* in = &tab.dvalues[(q * tab.local + j) * D];
      double* out = &dvalues[(q * tab.local + j) * D];
      for (std::size_t r = 0; r < D; ++r) {
        double acc = 0.0;
        for (std::size_t t = 0; t < D; ++t) acc += Pd[r * D + t] * in[t];
        out[r] = s * acc;
      }
    }
}

namespace {

QuadratureRule single_point(std::span<const double> xhat) {
  QuadratureRule r;
  r.dim = static_cast<int>(xhat.size());
  r.points.assign(xhat.begin(), xhat.end());
  r.weights = {1.0};
  return r;
}

void eval_at(const FeSpace& space, int c, std::span<const double> x, std::vector<double>& values,
             std::vector<double>& dvalues, Tabulation& tab) {
  const auto g = cell_geometry(space.mesh(), c);
  const auto xhat = g.reference_point(x);
  if (!inside_reference(space.cell_type(), xhat)) throw std::invalid_argument("eval_basis: point outside the cell");
  tab = tabulate(space, single_point(xhat));
  map_tabulation(space, c, g, tab, values, dvalues);
}

}  // namespace

std::vector<AltForm<double>> eval_basis(const FeSpace& space, int c, std::span<const double> x) {
  std::vector<double> values, dvalues;
  Tabulation tab;
  eval_at(space, c, x, values, dvalues, tab);
  std::vector<AltForm<double>> out;
  for (std::size_t j = 0; j < tab.local; ++j) {
    AltForm<double> a(space.n(), space.k());
    for (std::size_t s = 0; s < tab.comps; ++s) a[s] = values[j * tab.comps + s];
    out.push_back(a);
  }
  return out;
}

AltForm<double> evaluate(const FeSpace& space, const Vector& coeffs, int c, std::span<const double> x) {
  std::vector<double> values, dvalues;
  Tabulation tab;
  eval_at(space, c, x, values, dvalues, tab);
  AltForm<double> a(space.n(), space.k());
  const auto dofs = space.cell_dofs(c);
  for (std::size_t j = 0; j < tab.local; ++j)
    for (std::size_t s = 0; s < tab.comps; ++s) a[s] += coeffs(dofs[j]) * values[j * tab.comps + s];
  return a;
}

AltForm<double> evaluate_derivative(const FeSpace& space, const Vector& coeffs, int c, std::span<const double> x) {
  if (space.k() >= space.n()) throw std::invalid_argument("evaluate_derivative: n-forms have zero derivative");
  std::vector<double> values, dvalues;
  Tabulation tab;
  eval_at(space, c, x, values, dvalues, tab);
  AltForm<double> a(space.n(), space.k() + 1);
  if (tab.dcomps == 0) return a;
  const auto dofs = space.cell_dofs(c);
  for (std::size_t j = 0; j < tab.local; ++j)
    for (std::size_t s = 0; s < tab.dcomps; ++s) a[s] += coeffs(dofs[j]) * dvalues[j * tab.dcomps + s];
  return a;
}

SparseMatrix exterior_derivative_matrix(const FeSpace& src, const FeSpace& dst) {
  if (&src.mesh() != &dst.mesh()) throw std::invalid_argument("exterior_derivative_matrix: spaces on different meshes");
  if (dst.k() != src.k() + 1 || !legal_derivative_pair(src.family(), dst.family()))
    throw std::invalid_argument("exterior_derivative_matrix: illegal pair " + std::string(family_name(src.family())) +
                                " -> " + std::string(family_name(dst.family())));
  const auto* rs = src.reference();
  const auto* rd = dst.reference();
  const auto local = dof_matrix(dst.cell_type(), dst.n(), dst.k(), rd->dofs, rs->d_dual);
  return assemble_invariant(src, dst, local);
}

SparseMatrix canonical_projection_matrix(const FeSpace& src, const FeSpace& dst) {
  if (&src.mesh() != &dst.mesh()) throw std::invalid_argument("canonical_projection_matrix: spaces on different meshes");
  const bool whitney = dst.family() == SpaceFamily::P1minus || dst.family() == SpaceFamily::Q1minus;
  if (!whitney || !src.mapped() || src.k() != dst.k())
    throw std::invalid_argument("canonical_projection_matrix: needs a mapped source and P1minus^k or Q1minus^k");
  const auto local = dof_matrix(dst.cell_type(), dst.n(), dst.k(), dst.reference()->dofs, src.reference()->dual);
  return assemble_invariant(src, dst, local);
}

SparseMatrix pi_h_matrix(const FeSpace& s1plus, const FeSpace& q1minus) {
  if (s1plus.family() != SpaceFamily::S1plus || q1minus.family() != SpaceFamily::Q1minus || s1plus.k() != q1minus.k())
    throw std::invalid_argument("pi_h: needs S1plus^k and Q1minus^k");
  return canonical_projection_matrix(s1plus, q1minus);
}

Vector pi_h(const FeSpace& s1plus, const FeSpace& q1minus, const Vector& u) { return pi_h_matrix(s1plus, q1minus) * u; }

Vector interpolate(const FeSpace& space, const FormField& field, int points) {
  return interpolate_cellwise(space, [&field](int, std::span<const double> x) { return field(x); }, points);
}

Vector interpolate_cellwise(const FeSpace& space, const CellFormField& field, int points) {
  const auto& mesh = space.mesh();
  Vector out = Vector::Zero(static_cast<Eigen::Index>(space.size()));
  std::vector<char> done(space.size(), 0);
  const int n = space.n();
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto g = cell_geometry(mesh, c);
    const auto dofs = space.cell_dofs(c);
    const auto signs = space.cell_signs(c);
    const FormField on_cell = [&field, c](std::span<const double> x) { return field(c, x); };
    if (!space.mapped()) {
      const auto rule = reference_rule(space.cell_type(), n, points);
      const double vol = reference_volume(space.cell_type(), n);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const auto v = on_cell(g.physical_point(rule.point(q)));
        for (std::size_t s = 0; s < v.size(); ++s) out(dofs[s]) += rule.weights[q] * v[s] / vol;
      }
      continue;
    }
    for (std::size_t j = 0; j < dofs.size(); ++j) {
      if (done[static_cast<std::size_t>(dofs[j])]) continue;
      done[static_cast<std::size_t>(dofs[j])] = 1;
      out(dofs[j]) = signs[j] * apply_functional(space, g, space.reference()->dofs[j], on_cell, points);
    }
  }
  return out;
}

Vector project_piecewise_constant(const FeSpace& space, const Vector& u) {
  const auto& mesh = space.mesh();
  const int n = space.n();
  const auto C = static_cast<std::size_t>(binomial(n, space.k()));
  Vector out = Vector::Zero(static_cast<Eigen::Index>(mesh.num_cells()) * static_cast<Eigen::Index>(C));
  if (!space.mapped()) return u;
  const double vol = reference_volume(space.cell_type(), n);
  std::vector<std::vector<double>> means;
  for (const auto& psi : space.reference()->dual) {
    std::vector<double> m(C);
    for (std::size_t s = 0; s < C; ++s) m[s] = to_double(integrate(psi[s], space.cell_type())) / vol;
    means.push_back(std::move(m));
  }
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto g = cell_geometry(mesh, c);
    const auto& P = g.pull[static_cast<std::size_t>(space.k())];
    const auto dofs = space.cell_dofs(c);
    const auto signs = space.cell_signs(c);
    for (std::size_t j = 0; j < dofs.size(); ++j) {
      const double coef = signs[j] * u(dofs[j]);
      for (std::size_t r = 0; r < C; ++r) {
        double acc = 0.0;
        for (std::size_t t = 0; t < C; ++t) acc += P[r * C + t] * means[j][t];
        out(static_cast<Eigen::Index>(static_cast<std::size_t>(c) * C + r)) += coef * acc;
      }
    }
  }
  return out;
}

Vector project_piecewise_constant(const MeshComplex& mesh, int k, const FormField& field, int points) {
  const FeSpace w(mesh, SpaceFamily::P0, k);
  return interpolate(w, field, points);
}

}  // namespace lochodge
