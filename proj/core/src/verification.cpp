#include <lochodge/verification.hpp>

#include <lochodge/exact_linalg.hpp>
#include <lochodge/polyform.hpp>
#include <lochodge/reference_spaces.hpp>

#include <random>
#include <stdexcept>

namespace lochodge {

namespace {

using Form = PolyForm<Rational>;
using Poly = Polynomial<Rational>;

Form random_form(std::mt19937& rng, int n, int k, int max_deg) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> deg(0, max_deg);
  Form u(n, k);
  for (std::size_t r = 0; r < u.size(); ++r)
    for (int t = 0; t < 3; ++t) {
      Exponent e{};
      for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(deg(rng));
      u[r].add_term(e, Rational(coef(rng)));
    }
  return u;
}

// Random form with coefficients homogeneous of total degree r.
Form random_homogeneous(std::mt19937& rng, int n, int k, int r) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> axis(0, std::max(n - 1, 0));
  Form u(n, k);
  for (std::size_t s = 0; s < u.size(); ++s)
    for (int t = 0; t < 3; ++t) {
      Exponent e{};
      if (n > 0)
        for (int j = 0; j < r; ++j) ++e[static_cast<std::size_t>(axis(rng))];
      else if (r > 0)
        continue;
      u[s].add_term(e, Rational(coef(rng)));
    }
  return u;
}

AltForm<Rational> random_alt(std::mt19937& rng, int n, int k) {
  std::uniform_int_distribution<int> coef(-5, 5);
  AltForm<Rational> a(n, k);
  for (std::size_t r = 0; r < a.size(); ++r) a[r] = ratio(coef(rng), 1 + static_cast<int>(r % 3));
  return a;
}

CheckRow row(std::string name, int n, int k, bool pass, std::string detail = {}) {
  return {std::move(name), n, k, pass, std::move(detail)};
}

std::vector<Form> apply_all(const std::vector<Form>& forms, Form (*op)(const Form&)) {
  std::vector<Form> out;
  out.reserve(forms.size());
  for (const auto& f : forms) out.push_back(op(f));
  return out;
}

Form d_of(const Form& u) { return exterior_derivative(u); }
Form dkappa_of(const Form& u) { return exterior_derivative(koszul<Rational>(u)); }

bool spans_equal(const std::vector<Form>& a, const std::vector<Form>& b) {
  return span_contains(a, b) && span_contains(b, a);
}

// Every monomial of every coefficient: per-variable degree <= 2, at most one variable of degree 2.
bool at_most_one_quadratic(const Form& u) {
  for (std::size_t r = 0; r < u.size(); ++r)
    for (const auto& [e, c] : u[r].terms()) {
      int quadratic = 0;
      for (int i = 0; i < u.dim(); ++i) {
        if (e[static_cast<std::size_t>(i)] > 2) return false;
        if (e[static_cast<std::size_t>(i)] == 2) ++quadratic;
      }
      if (quadratic > 1) return false;
    }
  return true;
}

bool has_quadratic_monomial(const Form& u) {
  for (std::size_t r = 0; r < u.size(); ++r)
    for (const auto& [e, c] : u[r].terms())
      for (int i = 0; i < u.dim(); ++i)
        if (e[static_cast<std::size_t>(i)] == 2) return true;
  return false;
}

}  // namespace

std::vector<CheckRow> algebra_suite(int n_max, int samples, unsigned seed) {
  if (n_max < 1 || n_max > 4) throw std::invalid_argument("algebra_suite: n_max must be in 1..4");
  std::mt19937 rng(seed);
  std::vector<CheckRow> rows;
  for (int n = 1; n <= n_max; ++n)
    for (int k = 0; k <= n; ++k) {
      int dd = 0, kk = 0, homotopy = 0, leibniz = 0, contraction = 0;
      std::uniform_int_distribution<int> split(0, k);
      std::uniform_int_distribution<int> degree(0, 3);
      for (int t = 0; t < samples; ++t) {
        const auto u = random_form(rng, n, k, 3);
        if (k + 2 <= n && !exterior_derivative(exterior_derivative(u)).is_zero()) ++dd;
        if (k >= 2 && !koszul<Rational>(koszul<Rational>(u)).is_zero()) ++kk;
        // (kappa d + d kappa) u = (r + k) u for u homogeneous of degree r.
        const int r = degree(rng);
        const auto h = random_homogeneous(rng, n, k, r);
        Form lhs(n, k);
        if (k < n) lhs += koszul<Rational>(exterior_derivative(h));
        if (k >= 1) lhs += exterior_derivative(koszul<Rational>(h));
        if (!(lhs == Rational(r + k) * h)) ++homotopy;
        // d(a ^ b) = da ^ b + (-1)^j a ^ db for a of degree j and b of degree k - j.
        if (k < n) {
          const int j = split(rng);
          const auto a = random_form(rng, n, j, 2);
          const auto b = random_form(rng, n, k - j, 2);
          Form rhs(n, k + 1);
          if (j < n) rhs += wedge(exterior_derivative(a), b);
          if (k - j < n) rhs += Rational(j % 2 == 0 ? 1 : -1) * wedge(a, exterior_derivative(b));
          if (!(exterior_derivative(wedge(a, b)) == rhs)) ++leibniz;
        }
        // (a ^ b) _| v = (a _| v) ^ b + (-1)^j a ^ (b _| v) on constant forms.
        if (k >= 1) {
          const int j = split(rng);
          const auto a = random_alt(rng, n, j);
          const auto b = random_alt(rng, n, k - j);
          std::vector<Rational> v(static_cast<std::size_t>(n));
          for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = ratio(static_cast<int>(rng() % 7) - 3, 2);
          const std::span<const Rational> vs(v);
          AltForm<Rational> rhs(n, k - 1);
          if (j >= 1) rhs += wedge(contract(a, vs), b);
          if (k - j >= 1) rhs += Rational(j % 2 == 0 ? 1 : -1) * wedge(a, contract(b, vs));
          if (!(contract(wedge(a, b), vs) == rhs)) ++contraction;
        }
      }
      auto detail = [&](int fails) { return std::to_string(fails) + " failures in " + std::to_string(samples); };
      rows.push_back(row("d_d_zero", n, k, dd == 0, detail(dd)));
      rows.push_back(row("kappa_kappa_zero", n, k, kk == 0, detail(kk)));
      rows.push_back(row("homotopy_formula", n, k, homotopy == 0, detail(homotopy)));
      rows.push_back(row("d_antiderivation", n, k, leibniz == 0, detail(leibniz)));
      rows.push_back(row("contraction_antiderivation", n, k, contraction == 0, detail(contraction)));
    }
  return rows;
}

std::vector<CheckRow> s1plus_suite(int n_max) {
  if (n_max < 1 || n_max > 4) throw std::invalid_argument("s1plus_suite: n_max must be in 1..4");
  std::vector<CheckRow> rows;
  for (int n = 1; n <= n_max; ++n)
    for (int k = 0; k <= n; ++k) {
      const auto s1 = shape_space(SpaceFamily::S1plus, n, k);
      const auto q1m = shape_space(SpaceFamily::Q1minus, n, k);
      const auto q1 = shape_space(SpaceFamily::Q1, n, k);
      const auto bl = shape_space(SpaceFamily::BLambda, n, k);
      const std::size_t expected = (std::size_t{1} << n) * static_cast<std::size_t>(binomial(n, k));

      rows.push_back(row("dimension", n, k, s1.size() == expected && span_rank(s1.shapes) == expected,
                         std::to_string(s1.size()) + " (expected " + std::to_string(expected) + ")"));

      const auto uni = unisolvency_matrix(s1);
      rows.push_back(row("unisolvency", n, k, uni.matrix.rows() == expected && !is_zero(uni.det),
                         "det = " + uni.det.get_str()));

      std::vector<Form> sum = q1m.shapes;
      sum.insert(sum.end(), bl.shapes.begin(), bl.shapes.end());
      rows.push_back(row("q1_direct_sum", n, k,
                         q1m.size() + bl.size() == q1.size() && span_rank(sum) == q1.size() && span_contains(q1.shapes, sum)));

      if (k >= 1) {
        bool a = true, b = true, c = true;
        const auto& kfaces = reference_faces(ReferenceCell::cube, n, k);
        for (const auto& m : bl.shapes) {
          a = a && has_quadratic_monomial(koszul<Rational>(m));
          const auto dk = dkappa_of(m);
          b = b && at_most_one_quadratic(dk);
          for (const auto& f : kfaces) {
            const auto t = trace(dk, f.chart);
            c = c && t.max_variable_degree() <= 1;
          }
        }
        rows.push_back(row("blambda_kappa_quadratic", n, k, a));
        rows.push_back(row("blambda_dkappa_one_quadratic", n, k, b));
        rows.push_back(row("blambda_dkappa_trace_q1", n, k, c));
        const auto dkb = apply_all(bl.shapes, dkappa_of);
        rows.push_back(row("blambda_dkappa_injective", n, k, span_rank(dkb) == bl.size(),
                           std::to_string(span_rank(dkb)) + " of " + std::to_string(bl.size())));
      }

      if (k < n) {
        const auto bl1 = shape_space(SpaceFamily::BLambda, n, k + 1);
        const auto db = apply_all(bl.shapes, d_of);
        const auto dkb1 = apply_all(bl1.shapes, dkappa_of);
        rows.push_back(row("d_blambda_inclusion", n, k, span_contains(bl1.shapes, db) && span_contains(dkb1, db)));
        rows.push_back(row("d_s1plus_equals_d_q1minus", n, k,
                           spans_equal(apply_all(s1.shapes, d_of), apply_all(q1m.shapes, d_of))));
      }

      {
        std::vector<Rational> diag, shift;
        for (int i = 0; i < n; ++i) {
          diag.push_back(ratio(2 + i, 1 + 2 * i));
          shift.push_back(ratio(1 - 2 * i, 3));
        }
        std::vector<Form> pulled;
        for (const auto& u : s1.shapes) pulled.push_back(pullback_affine<Rational>(u, diag, shift));
        rows.push_back(row("pullback_invariance", n, k, span_contains(s1.shapes, pulled)));
      }

      if (k <= n - 1) {
        const auto facet_space = shape_space(SpaceFamily::S1plus, n - 1, k);
        bool ok = true;
        const std::uint32_t full = (1U << n) - 1U;
        for (int axis = 0; axis < n; ++axis)
          for (std::uint32_t side : {0U, 1U}) {
            const auto f = AffineFace::box(n, full & ~(1U << axis), side << axis);
            std::vector<Form> traces;
            for (const auto& u : s1.shapes) traces.push_back(trace(u, f));
            ok = ok && span_contains(facet_space.shapes, traces);
          }
        rows.push_back(row("facet_trace_inclusion", n, k, ok));
      }

      {
        const auto q1f = shape_space(SpaceFamily::Q1, k, k);
        bool ok = true;
        for (const auto& f : reference_faces(ReferenceCell::cube, n, k)) {
          std::vector<Form> traces;
          for (const auto& u : s1.shapes) traces.push_back(trace(u, f.chart));
          ok = ok && span_contains(q1f.shapes, traces) && span_rank(traces) == q1f.size();
        }
        rows.push_back(row("k_face_trace_is_q1", n, k, ok));
      }
    }
  return rows;
}

bool all_pass(const std::vector<CheckRow>& rows) {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

}  // namespace lochodge
