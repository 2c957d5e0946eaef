#include <doctest.h>

#include <lochodge/polyform.hpp>

#include <random>

using namespace lochodge;
using P = Polynomial<Rational>;
using F = PolyForm<Rational>;

namespace {

P x(int n, int i) { return P::variable(n, i); }

F random_form(std::mt19937& rng, int n, int k, int max_deg) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> deg(0, max_deg);
  F u(n, k);
  for (std::size_t r = 0; r < u.size(); ++r)
    for (int t = 0; t < 3; ++t) {
      Exponent e{};
      for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(deg(rng));
      u[r].add_term(e, Rational(coef(rng)));
    }
  return u;
}

}  // namespace

TEST_CASE("exterior derivative examples") {
  F u(2, 0);
  u[0] = x(2, 0) * x(2, 1);
  const auto du = exterior_derivative(u);
  CHECK(du[0] == x(2, 1));
  CHECK(du[1] == x(2, 0));

  const auto v = F::monomial_form(2, 0b10, x(2, 0));
  CHECK(exterior_derivative(v)[0] == P::constant(2, 1));
}

TEST_CASE("koszul examples and homotopy formula") {
  const auto vol = F::monomial_form(2, 0b11, P::constant(2, 1));
  const auto kv = koszul<Rational>(vol);
  CHECK(kv[0] == -x(2, 1));  // coefficient of dx1
  CHECK(kv[1] == x(2, 0));   // coefficient of dx2

  const auto u = F::monomial_form(2, 0b10, x(2, 0));
  const auto lhs = koszul<Rational>(exterior_derivative(u)) + exterior_derivative(koszul<Rational>(u));
  CHECK(lhs == Rational(2) * u);
}

TEST_CASE("d d = 0 and kappa kappa = 0 on random forms") {
  std::mt19937 rng(5);
  for (int n = 1; n <= 4; ++n)
    for (int k = 0; k <= n; ++k)
      for (int t = 0; t < 10; ++t) {
        const auto u = random_form(rng, n, k, 3);
        if (k + 1 < n) CHECK(exterior_derivative(exterior_derivative(u)).is_zero());
        if (k >= 2) CHECK(koszul<Rational>(koszul<Rational>(u)).is_zero());
      }
}

TEST_CASE("trace examples and the face Koszul identity") {
  const auto dx1 = F::monomial_form(2, 0b01, P::constant(2, 1));
  const auto f = AffineFace::hyperplane(2, 0, Rational(1, 2));
  CHECK(trace(dx1, f).is_zero());

  const auto u = F::monomial_form(2, 0b10, x(2, 0));
  const auto g = AffineFace::hyperplane(2, 0, Rational(1));
  const auto t = trace(u, g);
  CHECK(t.dim() == 1);
  CHECK(t[0] == P::constant(1, 1));

  std::mt19937 rng(9);
  for (int n = 2; n <= 4; ++n)
    for (int k = 1; k < n; ++k)
      for (std::uint32_t free = 0; free < (1U << n); ++free) {
        if (popcount(free) < k) continue;
        const auto face = AffineFace::box(n, free, ((1U << n) - 1U) & ~free);
        const auto w = random_form(rng, n, k, 2);
        const auto lhs = trace(koszul<Rational>(w), face);
        auto rhs = trace(contract_constant<Rational>(w, face.base), face);
        rhs += koszul_face(trace(w, face), face);
        CHECK(lhs == rhs);
      }
}

TEST_CASE("pullback commutes with d and the identity map is trivial") {
  std::mt19937 rng(2);
  for (int n = 1; n <= 4; ++n)
    for (int k = 0; k < n; ++k) {
      const auto u = random_form(rng, n, k, 2);
      std::vector<Rational> ones(static_cast<std::size_t>(n), Rational(1)), zero(static_cast<std::size_t>(n), Rational(0));
      CHECK(pullback_affine<Rational>(u, ones, zero) == u);
      std::vector<Rational> D, b;
      for (int i = 0; i < n; ++i) {
        D.push_back(ratio(i + 2, 3));
        b.push_back(ratio(-i, 5));
      }
      CHECK(pullback_affine<Rational>(exterior_derivative(u), D, b) == exterior_derivative(pullback_affine<Rational>(u, D, b)));
      D[0] = 0;
      CHECK_THROWS(pullback_affine<Rational>(u, D, b));
    }
}

TEST_CASE("exact integrals") {
  CHECK(integrate(x(2, 0), ReferenceCell::simplex) == Rational(1, 6));
  CHECK(integrate(x(2, 0) * x(2, 1), ReferenceCell::cube) == Rational(1, 4));
  const auto dx1 = F::monomial_form(2, 0b01, P::constant(2, 1));
  CHECK(integrate_exact(dx1, dx1, ReferenceCell::cube) == 1);
  CHECK(integrate(x(3, 2) * x(3, 2), ReferenceCell::simplex) == ratio(1, 60));
}
