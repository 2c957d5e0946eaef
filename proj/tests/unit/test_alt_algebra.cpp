#include <doctest.h>

#include <lochodge/alt_algebra.hpp>

#include <random>

using namespace lochodge;
using Q = AltForm<Rational>;

namespace {

Q random_form(std::mt19937& rng, int n, int k) {
  std::uniform_int_distribution<int> num(-5, 5);
  std::uniform_int_distribution<int> den(1, 4);
  Q a(n, k);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = ratio(num(rng), den(rng));
  return a;
}

std::vector<Rational> random_vector(std::mt19937& rng, int n) {
  std::uniform_int_distribution<int> num(-7, 7);
  std::vector<Rational> v;
  for (int i = 0; i < n; ++i) v.push_back(ratio(num(rng), 3));
  return v;
}

}  // namespace

TEST_CASE("index sets are lexicographic with binomial length") {
  const auto s = alt_index_set(3, 2);
  REQUIRE(s.size() == 3);
  CHECK(s[0].entries() == std::vector<int>{1, 2});
  CHECK(s[1].entries() == std::vector<int>{1, 3});
  CHECK(s[2].entries() == std::vector<int>{2, 3});
  CHECK(alt_index_set(5, 0).size() == 1);
  const auto s4 = alt_index_set(4, 2);
  CHECK(s4.size() == 6);
  const int e13[] = {1, 3};
  CHECK(AltIndex::from_entries(4, e13).complement().entries() == std::vector<int>{2, 4});
  for (int n = 0; n <= kMaxAltDim; ++n)
    for (int k = 0; k <= n; ++k) CHECK(alt_index_set(n, k).size() == static_cast<std::size_t>(binomial(n, k)));
  CHECK_THROWS(alt_index_set(9, 1));
  CHECK_THROWS(alt_index_set(3, 4));
}

TEST_CASE("wedge signs") {
  const auto dx1 = Q::dx(2, 1);
  const auto dx2 = Q::dx(2, 2);
  CHECK(wedge(dx1, dx2)[0] == 1);
  CHECK(wedge(dx2, dx1)[0] == -1);
  CHECK(wedge(dx1, dx1).is_zero());
  CHECK_THROWS(wedge(Q::dx(2, 1), Q::dx(3, 1)));
}

TEST_CASE("inner product is orthonormal on dx_sigma") {
  const int e12[] = {1, 2};
  const int e13[] = {1, 3};
  const int e23[] = {2, 3};
  const auto a = Q::basis(AltIndex::from_entries(3, e12));
  const auto b = Q::basis(AltIndex::from_entries(3, e13));
  CHECK(alt_inner(a, a) == 1);
  CHECK(alt_inner(a, b) == 0);
  const auto c = a + Rational(2) * Q::basis(AltIndex::from_entries(3, e23));
  CHECK(alt_inner(c, c) == 5);
  for (int n = 1; n <= kMaxAltDim; ++n)
    for (int k = 0; k <= n; ++k)
      for (const auto& s : alt_index_set(n, k))
        for (const auto& t : alt_index_set(n, k))
          CHECK(alt_inner(Q::basis(s), Q::basis(t)) == (s == t ? 1 : 0));
}

TEST_CASE("contraction inserts into the first slot") {
  const int e12[] = {1, 2};
  const auto a = Q::basis(AltIndex::from_entries(2, e12));
  const std::vector<Rational> e1{1, 0}, e2{0, 1};
  CHECK(contract(a, std::span<const Rational>(e1)) == Q::dx(2, 2));
  CHECK(contract(a, std::span<const Rational>(e2)) == -Q::dx(2, 1));
}

TEST_CASE("antiderivation, nilpotence and graded commutativity on random forms") {
  std::mt19937 rng(11);
  for (int n = 1; n <= 5; ++n)
    for (int j = 0; j <= n; ++j)
      for (int k = 0; j + k <= n; ++k)
        for (int trial = 0; trial < 5; ++trial) {
          const auto a = random_form(rng, n, j);
          const auto b = random_form(rng, n, k);
          const auto v = random_vector(rng, n);
          const std::span<const Rational> vs(v);
          CHECK(wedge(a, b) == ((j * k) % 2 == 0 ? wedge(b, a) : -wedge(b, a)));
          if (j + k >= 1) {
            auto rhs = Q(n, j + k - 1);
            if (j >= 1) rhs += wedge(contract(a, vs), b);
            if (k >= 1) rhs += (j % 2 == 0 ? Rational(1) : Rational(-1)) * wedge(a, contract(b, vs));
            CHECK(contract(wedge(a, b), vs) == rhs);
          }
          if (j >= 2) CHECK(contract(contract(a, vs), vs).is_zero());
        }
}

TEST_CASE("alt_apply evaluates determinants") {
  // dx1^dx2 on (e1 + e2, e2) gives det [[1,0],[1,1]] = 1.
  const int e12[] = {1, 2};
  const auto a = Q::basis(AltIndex::from_entries(3, e12));
  const std::vector<Rational> vecs{1, 1, 0, 0, 1, 0};
  CHECK(alt_apply(a, std::span<const Rational>(vecs)) == 1);
}

TEST_CASE("pullback of the identity is the identity") {
  std::mt19937 rng(3);
  for (int n = 1; n <= 4; ++n)
    for (int k = 0; k <= n; ++k) {
      std::vector<Rational> id(static_cast<std::size_t>(n * n), Rational(0));
      for (int i = 0; i < n; ++i) id[static_cast<std::size_t>(i * n + i)] = 1;
      const auto a = random_form(rng, n, k);
      CHECK(alt_pullback(a, std::span<const Rational>(id), n) == a);
    }
}
