#include <lochodge/polyform.hpp>

namespace lochodge {

namespace {

Rational factorial(int m) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(m));
  return Rational(f);
}

}  // namespace

AffineFace AffineFace::box(int n, std::uint32_t free_mask, std::uint32_t fixed_bits) {
  AffineFace f;
  f.n = n;
  f.m = popcount(free_mask);
  f.intrinsic = ReferenceCell::cube;
  f.base.assign(static_cast<std::size_t>(n), Rational(0));
  f.frame.assign(static_cast<std::size_t>(n * f.m), Rational(0));
  int col = 0;
  for (int i = 0; i < n; ++i) {
    if ((free_mask >> i) & 1U) {
      f.frame[static_cast<std::size_t>(i * f.m + col)] = 1;
      ++col;
    } else {
      f.base[static_cast<std::size_t>(i)] = ((fixed_bits >> i) & 1U) ? 1 : 0;
    }
  }
  return f;
}

AffineFace AffineFace::hyperplane(int n, int axis, const Rational& value) {
  if (axis < 0 || axis >= n) throw std::invalid_argument("AffineFace::hyperplane: axis out of range");
  AffineFace f = box(n, ((1U << n) - 1U) & ~(1U << axis), 0U);
  f.base[static_cast<std::size_t>(axis)] = value;
  return f;
}

AffineFace AffineFace::simplex(int n, const std::vector<std::vector<Rational>>& vertices) {
  if (vertices.empty()) throw std::invalid_argument("AffineFace::simplex: no vertices");
  AffineFace f;
  f.n = n;
  f.m = static_cast<int>(vertices.size()) - 1;
  f.intrinsic = ReferenceCell::simplex;
  f.base = vertices[0];
  f.frame.assign(static_cast<std::size_t>(n * f.m), Rational(0));
  for (int j = 0; j < f.m; ++j)
    for (int i = 0; i < n; ++i)
      f.frame[static_cast<std::size_t>(i * f.m + j)] =
          vertices[static_cast<std::size_t>(j + 1)][static_cast<std::size_t>(i)] - vertices[0][static_cast<std::size_t>(i)];
  return f;
}

PolyForm<Rational> trace(const PolyForm<Rational>& u, const AffineFace& f) {
  if (u.dim() != f.n) throw std::invalid_argument("trace: face lives in a different dimension");
  if (u.degree() > f.m) throw std::invalid_argument("trace: form degree exceeds face dimension");
  return pullback<Rational>(u, f.frame, f.m, f.base);
}

PolyForm<Rational> koszul_face(const PolyForm<Rational>& v, const AffineFace& f) {
  if (v.dim() != f.m) throw std::invalid_argument("koszul_face: form is not in intrinsic coordinates");
  return koszul<Rational>(v);
}

Rational integrate(const Polynomial<Rational>& p, ReferenceCell cell) {
  const int n = p.num_vars();
  Rational total(0);
  for (const auto& [e, c] : p.terms()) {
    Rational v(1);
    if (cell == ReferenceCell::cube) {
      for (int i = 0; i < n; ++i) v /= Rational(e[static_cast<std::size_t>(i)] + 1);
    } else {
      // Dirichlet integral over {x >= 0, sum x <= 1}.
      for (int i = 0; i < n; ++i) v *= factorial(e[static_cast<std::size_t>(i)]);
      v /= factorial(total_degree(e) + n);
    }
    total += c * v;
  }
  return total;
}

Rational integrate_exact(const PolyForm<Rational>& u, const PolyForm<Rational>& v, ReferenceCell cell) {
  if (u.dim() != v.dim() || u.degree() != v.degree()) throw std::invalid_argument("integrate_exact: (n, k) mismatch");
  Rational total(0);
  for (std::size_t r = 0; r < u.size(); ++r) {
    if (u[r].is_zero() || v[r].is_zero()) continue;
    total += integrate(u[r] * v[r], cell);
  }
  return total;
}

Rational integrate_top(const PolyForm<Rational>& u, ReferenceCell cell) {
  if (u.degree() != u.dim()) throw std::invalid_argument("integrate_top: not a top-degree form");
  return integrate(u[0], cell);
}

}  // namespace lochodge
