#include <lochodge/reference_spaces.hpp>

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>

namespace lochodge {

namespace {

using PF = PolyForm<Rational>;
using Poly = Polynomial<Rational>;

std::size_t pow2(int e) { return std::size_t{1} << e; }

void check_nk(int n, int k) {
  if (n < 0 || n > kMaxPolyVars || k < 0 || k > n) throw std::invalid_argument("shape space: need 0 <= k <= n <= 4");
}

// Barycentric coordinates of the reference simplex as polynomials, and their differentials.
Poly lambda(int n, int i) {
  if (i > 0) return Poly::variable(n, i - 1);
  Poly p = Poly::constant(n, Rational(1));
  for (int j = 0; j < n; ++j) p -= Poly::variable(n, j);
  return p;
}

AltForm<Rational> dlambda(int n, int i) {
  if (i > 0) return AltForm<Rational>::dx(n, i);
  AltForm<Rational> a(n, 1);
  for (std::size_t j = 0; j < a.size(); ++j) a[j] = -1;
  return a;
}

AltForm<Rational> dlambda_wedge(int n, const std::vector<int>& ids) {
  AltForm<Rational> w(n, 0);
  w[0] = 1;
  for (int i : ids) w = wedge(w, dlambda(n, i));
  return w;
}

std::vector<int> without(const std::vector<int>& v, int drop) {
  std::vector<int> out;
  for (int x : v)
    if (x != drop) out.push_back(x);
  return out;
}

// lambda_i * constant form.
PF scaled(const Poly& p, const AltForm<Rational>& a) {
  PF u(a.dim(), a.degree());
  for (std::size_t r = 0; r < a.size(); ++r)
    if (!is_zero(a[r])) u[r] = a[r] * p;
  return u;
}

std::vector<PF> p1_basis(int n, int k) {
  std::vector<PF> out;
  for (const auto& f : reference_faces(ReferenceCell::simplex, n, k))
    for (int i : f.vertices) out.push_back(scaled(lambda(n, i), dlambda_wedge(n, without(f.vertices, i))));
  return out;
}

std::vector<PF> whitney_basis(int n, int k) {
  Rational kfact(1);
  for (int i = 2; i <= k; ++i) kfact *= i;
  std::vector<PF> out;
  for (const auto& f : reference_faces(ReferenceCell::simplex, n, k)) {
    PF u(n, k);
    for (std::size_t a = 0; a < f.vertices.size(); ++a) {
      const int i = f.vertices[a];
      PF term = scaled(lambda(n, i), dlambda_wedge(n, without(f.vertices, i)));
      if (a % 2 == 0)
        u += term;
      else
        u -= term;
    }
    out.push_back(kfact * u);
  }
  return out;
}

// Multilinear monomials in the variables of mask.
std::vector<Exponent> multilinear_exponents(std::uint32_t mask) {
  std::vector<Exponent> out;
  for (std::uint32_t sub = 0; sub < 32U; ++sub) {
    if ((sub & ~mask) != 0U) continue;
    Exponent e{};
    for (int i = 0; i < kMaxPolyVars; ++i)
      if ((sub >> i) & 1U) e[static_cast<std::size_t>(i)] = 1;
    out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint32_t full_mask(int n) { return n == 0 ? 0U : ((1U << n) - 1U); }

std::vector<PF> q1_basis(int n, int k) {
  std::vector<PF> out;
  for (auto sigma : alt_masks(n, k))
    for (const auto& e : multilinear_exponents(full_mask(n)))
      out.push_back(PF::monomial_form(n, sigma, Poly::monomial(n, e, Rational(1))));
  return out;
}

std::vector<PF> q1minus_basis(int n, int k) {
  std::vector<PF> out;
  for (auto sigma : alt_masks(n, k))
    for (const auto& e : multilinear_exponents(full_mask(n) & ~sigma))
      out.push_back(PF::monomial_form(n, sigma, Poly::monomial(n, e, Rational(1))));
  return out;
}

// Ordered by (sigma, alpha, beta), alpha over sigma with |alpha| >= 1, beta over sigma*.
std::vector<PF> b_basis(int n, int k) {
  std::vector<PF> out;
  for (auto sigma : alt_masks(n, k)) {
    for (const auto& alpha : multilinear_exponents(sigma)) {
      if (total_degree(alpha) == 0) continue;
      for (const auto& beta : multilinear_exponents(full_mask(n) & ~sigma)) {
        Exponent e{};
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<std::uint8_t>(alpha[i] + beta[i]);
        out.push_back(PF::monomial_form(n, sigma, Poly::monomial(n, e, Rational(1))));
      }
    }
  }
  return out;
}

std::vector<PF> s1plus_basis(int n, int k) {
  std::vector<PF> candidates = q1minus_basis(n, k);
  if (k > 0)
    for (const auto& b : b_basis(n, k)) candidates.push_back(exterior_derivative(koszul<Rational>(b)));
  const auto keep = independent_rows(coefficient_matrix(candidates));
  std::vector<PF> out;
  for (auto i : keep) out.push_back(candidates[i]);
  return out;
}

std::vector<PF> p0_basis(int n, int k) {
  std::vector<PF> out;
  for (auto sigma : alt_masks(n, k)) out.push_back(PF::monomial_form(n, sigma, Poly::constant(n, Rational(1))));
  return out;
}

std::vector<RefFace> build_faces(ReferenceCell cell, int n, int j) {
  std::vector<RefFace> faces;
  if (cell == ReferenceCell::simplex) {
    // (j+1)-subsets of {0..n} in lexicographic order.
    std::vector<int> idx(static_cast<std::size_t>(j + 1));
    for (int i = 0; i <= j; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
      RefFace f;
      f.vertices = idx;
      std::vector<std::vector<Rational>> pts;
      for (int v : idx) pts.push_back(reference_vertex(cell, n, v));
      f.chart = AffineFace::simplex(n, pts);
      faces.push_back(std::move(f));
      int p = j;
      while (p >= 0 && idx[static_cast<std::size_t>(p)] == n - j + p) --p;
      if (p < 0) break;
      ++idx[static_cast<std::size_t>(p)];
      for (int q = p + 1; q <= j; ++q) idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
    }
  } else {
    for (std::uint32_t free = 0; free <= full_mask(n); ++free) {
      if (popcount(free) != j) continue;
      const std::uint32_t fixed_axes = full_mask(n) & ~free;
      for (std::uint32_t bits = 0; bits <= full_mask(n); ++bits) {
        if ((bits & ~fixed_axes) != 0U) continue;
        RefFace f;
        f.free_mask = free;
        for (std::uint32_t sub = 0; sub <= full_mask(n); ++sub)
          if ((sub & ~free) == 0U) f.vertices.push_back(static_cast<int>(bits | sub));
        std::sort(f.vertices.begin(), f.vertices.end());
        f.chart = AffineFace::box(n, free, bits);
        faces.push_back(std::move(f));
      }
    }
    std::sort(faces.begin(), faces.end(), [](const RefFace& a, const RefFace& b) { return a.vertices < b.vertices; });
  }
  return faces;
}

}  // namespace

std::string_view family_name(SpaceFamily f) {
  switch (f) {
    case SpaceFamily::P1: return "P1";
    case SpaceFamily::P1minus: return "P1minus";
    case SpaceFamily::P0: return "P0";
    case SpaceFamily::Q1: return "Q1";
    case SpaceFamily::Q1minus: return "Q1minus";
    case SpaceFamily::BLambda: return "BLambda";
    case SpaceFamily::S1plus: return "S1plus";
  }
  return "?";
}

std::optional<SpaceFamily> parse_family(std::string_view name) {
  for (auto f : {SpaceFamily::P1, SpaceFamily::P1minus, SpaceFamily::P0, SpaceFamily::Q1, SpaceFamily::Q1minus,
                 SpaceFamily::BLambda, SpaceFamily::S1plus})
    if (family_name(f) == name) return f;
  return std::nullopt;
}

ReferenceCell family_cell(SpaceFamily f) {
  switch (f) {
    case SpaceFamily::P1:
    case SpaceFamily::P1minus:
    case SpaceFamily::P0: return ReferenceCell::simplex;
    default: return ReferenceCell::cube;
  }
}

std::size_t family_dimension(SpaceFamily f, int n, int k) {
  check_nk(n, k);
  const auto c = static_cast<std::size_t>(binomial(n, k));
  switch (f) {
    case SpaceFamily::P1: return static_cast<std::size_t>(n + 1) * c;
    case SpaceFamily::P1minus: return static_cast<std::size_t>(binomial(n + 1, k + 1));
    case SpaceFamily::P0: return c;
    case SpaceFamily::Q1: return pow2(n) * c;
    case SpaceFamily::Q1minus: return pow2(n - k) * c;
    case SpaceFamily::BLambda: return c * pow2(n - k) * (pow2(k) - 1);
    case SpaceFamily::S1plus: return pow2(n) * c;
  }
  throw std::invalid_argument("family_dimension: unknown family");
}

SpaceBasis shape_space(SpaceFamily f, int n, int k) {
  check_nk(n, k);
  SpaceBasis b;
  b.family = f;
  b.n = n;
  b.k = k;
  b.cell = family_cell(f);
  switch (f) {
    case SpaceFamily::P1: b.shapes = p1_basis(n, k); break;
    case SpaceFamily::P1minus: b.shapes = whitney_basis(n, k); break;
    case SpaceFamily::P0: b.shapes = p0_basis(n, k); break;
    case SpaceFamily::Q1: b.shapes = q1_basis(n, k); break;
    case SpaceFamily::Q1minus: b.shapes = q1minus_basis(n, k); break;
    case SpaceFamily::BLambda: b.shapes = b_basis(n, k); break;
    case SpaceFamily::S1plus: b.shapes = s1plus_basis(n, k); break;
  }
  return b;
}

std::vector<Rational> reference_vertex(ReferenceCell cell, int n, int id) {
  std::vector<Rational> x(static_cast<std::size_t>(n), Rational(0));
  if (cell == ReferenceCell::simplex) {
    if (id < 0 || id > n) throw std::invalid_argument("reference_vertex: id out of range");
    if (id > 0) x[static_cast<std::size_t>(id - 1)] = 1;
  } else {
    if (id < 0 || id >= (1 << n)) throw std::invalid_argument("reference_vertex: id out of range");
    for (int a = 0; a < n; ++a)
      if ((id >> a) & 1) x[static_cast<std::size_t>(a)] = 1;
  }
  return x;
}

const std::vector<RefFace>& reference_faces(ReferenceCell cell, int n, int j) {
  if (n < 0 || n > kMaxPolyVars || j < 0 || j > n) throw std::invalid_argument("reference_faces: need 0 <= j <= n <= 4");
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::vector<RefFace>> cache;
  std::lock_guard lock(mu);
  const auto key = std::make_tuple(static_cast<int>(cell), n, j);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_faces(cell, n, j)).first;
  return it->second;
}

std::vector<int> anchor_neighbours(ReferenceCell cell, const RefFace& f, int anchor) {
  if (std::find(f.vertices.begin(), f.vertices.end(), anchor) == f.vertices.end())
    throw std::invalid_argument("anchor_neighbours: anchor is not a vertex of the face");
  if (cell == ReferenceCell::simplex) return without(f.vertices, anchor);
  std::vector<int> out;
  for (int a = 0; a < kMaxPolyVars; ++a)
    if ((f.free_mask >> a) & 1U) out.push_back(anchor ^ (1 << a));
  return out;
}

std::vector<DofDescriptor> dof_descriptors(ReferenceCell cell, int n, int k, DofKind kind) {
  std::vector<DofDescriptor> out;
  const auto& faces = reference_faces(cell, n, k);
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    const auto& f = faces[fi];
    switch (kind) {
      case DofKind::vertex:
        for (int v : f.vertices) out.push_back({kind, static_cast<int>(fi), v, {}});
        break;
      case DofKind::face_integral: out.push_back({kind, static_cast<int>(fi), -1, {}}); break;
      case DofKind::weighted_integral:
        if (cell != ReferenceCell::cube) throw std::invalid_argument("weighted face moments are defined on cubes");
        for (const auto& e : multilinear_exponents(full_mask(k))) out.push_back({kind, static_cast<int>(fi), -1, e});
        break;
    }
  }
  return out;
}

DofKind natural_dof_kind(SpaceFamily f) {
  switch (f) {
    case SpaceFamily::P1:
    case SpaceFamily::Q1: return DofKind::vertex;
    case SpaceFamily::P1minus:
    case SpaceFamily::Q1minus: return DofKind::face_integral;
    case SpaceFamily::S1plus: return DofKind::weighted_integral;
    default: throw std::invalid_argument("natural_dof_kind: family has no degrees of freedom here");
  }
}

Rational apply_dof(ReferenceCell cell, int n, int k, const DofDescriptor& dof, const PolyForm<Rational>& u) {
  if (u.dim() != n || u.degree() != k) throw std::invalid_argument("apply_dof: form has the wrong (n, k)");
  const auto& f = reference_faces(cell, n, k).at(static_cast<std::size_t>(dof.face));
  switch (dof.kind) {
    case DofKind::vertex: {
      const auto x0 = reference_vertex(cell, n, dof.anchor);
      std::vector<Rational> vecs;
      for (int v : anchor_neighbours(cell, f, dof.anchor)) {
        const auto x = reference_vertex(cell, n, v);
        for (int i = 0; i < n; ++i) vecs.push_back(x[static_cast<std::size_t>(i)] - x0[static_cast<std::size_t>(i)]);
      }
      return alt_apply(u.evaluate<Rational>(x0), std::span<const Rational>(vecs));
    }
    case DofKind::face_integral: return integrate_top(trace(u, f.chart), f.chart.intrinsic);
    case DofKind::weighted_integral: {
      auto t = trace(u, f.chart);
      return integrate_top(t.times(Poly::monomial(k, dof.weight, Rational(1))), f.chart.intrinsic);
    }
  }
  return Rational(0);
}

RationalMatrix dof_matrix(ReferenceCell cell, int n, int k, std::span<const DofDescriptor> dofs,
                          std::span<const PolyForm<Rational>> forms) {
  RationalMatrix m(dofs.size(), forms.size());
  for (std::size_t i = 0; i < dofs.size(); ++i)
    for (std::size_t j = 0; j < forms.size(); ++j) m(i, j) = apply_dof(cell, n, k, dofs[i], forms[j]);
  return m;
}

Unisolvency unisolvency_matrix(const SpaceBasis& basis) {
  const auto dofs = dof_descriptors(basis.cell, basis.n, basis.k, natural_dof_kind(basis.family));
  if (dofs.size() != basis.size())
    throw std::logic_error("unisolvency_matrix: " + std::to_string(dofs.size()) + " functionals for " +
                           std::to_string(basis.size()) + " shape functions");
  Unisolvency u;
  u.matrix = dof_matrix(basis.cell, basis.n, basis.k, dofs, basis.shapes);
  u.det = determinant(u.matrix);
  return u;
}

RationalMatrix coefficient_matrix(std::span<const PolyForm<Rational>> forms) {
  std::map<std::pair<std::size_t, Exponent>, std::size_t> cols;
  for (const auto& u : forms)
    for (std::size_t r = 0; r < u.size(); ++r)
      for (const auto& [e, c] : u[r].terms()) cols.emplace(std::make_pair(r, e), 0);
  std::size_t next = 0;
  for (auto& [key, col] : cols) col = next++;
  RationalMatrix m(forms.size(), cols.size());
  for (std::size_t i = 0; i < forms.size(); ++i)
    for (std::size_t r = 0; r < forms[i].size(); ++r)
      for (const auto& [e, c] : forms[i][r].terms()) m(i, cols.at({r, e})) = c;
  return m;
}

std::size_t span_rank(std::span<const PolyForm<Rational>> forms) { return rank(coefficient_matrix(forms)); }

bool span_contains(std::span<const PolyForm<Rational>> basis, std::span<const PolyForm<Rational>> forms) {
  std::vector<PolyForm<Rational>> all(basis.begin(), basis.end());
  all.insert(all.end(), forms.begin(), forms.end());
  return span_rank(all) == span_rank(basis);
}

const ReferenceElement& reference_element(SpaceFamily f, int n, int k) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, ReferenceElement> cache;
  std::lock_guard lock(mu);
  const auto key = std::make_tuple(static_cast<int>(f), n, k);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  DofKind kind;
  switch (f) {
    case SpaceFamily::P1:
    case SpaceFamily::S1plus: kind = DofKind::vertex; break;
    case SpaceFamily::P1minus:
    case SpaceFamily::Q1minus: kind = DofKind::face_integral; break;
    default: throw std::invalid_argument("reference_element: no global space for family " + std::string(family_name(f)));
  }
  const auto basis = shape_space(f, n, k);
  ReferenceElement el;
  el.family = f;
  el.cell = basis.cell;
  el.n = n;
  el.k = k;
  el.dofs = dof_descriptors(el.cell, n, k, kind);
  const auto V = dof_matrix(el.cell, n, k, el.dofs, basis.shapes);
  const auto Vinv = inverse(V);
  if (!Vinv) throw std::logic_error("reference_element: functionals are not unisolvent");
  for (std::size_t j = 0; j < basis.size(); ++j) {
    PolyForm<Rational> psi(n, k);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const Rational& c = (*Vinv)(i, j);
      if (!is_zero(c)) psi += c * basis.shapes[i];
    }
    el.dual.push_back(std::move(psi));
  }
  if (k < n)
    for (const auto& psi : el.dual) el.d_dual.push_back(exterior_derivative(psi));
  return cache.emplace(key, std::move(el)).first->second;
}

}  // namespace lochodge
