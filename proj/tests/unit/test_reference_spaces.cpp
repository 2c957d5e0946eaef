#include <doctest.h>

#include <lochodge/reference_spaces.hpp>

using namespace lochodge;

TEST_CASE("dimension formulas") {
  CHECK(family_dimension(SpaceFamily::Q1minus, 3, 1) == 12);
  CHECK(family_dimension(SpaceFamily::BLambda, 2, 1) == 4);
  CHECK(family_dimension(SpaceFamily::S1plus, 3, 2) == 24);
  for (int n = 0; n <= 3; ++n)
    for (int k = 0; k <= n; ++k)
      for (auto f : {SpaceFamily::P1, SpaceFamily::P1minus, SpaceFamily::P0, SpaceFamily::Q1, SpaceFamily::Q1minus,
                     SpaceFamily::BLambda, SpaceFamily::S1plus}) {
        const auto b = shape_space(f, n, k);
        CAPTURE(family_name(f));
        CAPTURE(n);
        CAPTURE(k);
        CHECK(b.size() == family_dimension(f, n, k));
        CHECK(span_rank(b.shapes) == b.size());
      }
}

TEST_CASE("reference faces") {
  CHECK(reference_faces(ReferenceCell::simplex, 2, 1).size() == 3);
  CHECK(reference_faces(ReferenceCell::simplex, 3, 1).size() == 6);
  CHECK(reference_faces(ReferenceCell::cube, 3, 1).size() == 12);
  CHECK(reference_faces(ReferenceCell::cube, 3, 2).size() == 6);
  const auto& e = reference_faces(ReferenceCell::cube, 2, 1);
  CHECK(e[0].vertices == std::vector<int>{0, 1});
  CHECK(e[1].vertices == std::vector<int>{0, 2});
}

TEST_CASE("S1plus unisolvency for small n") {
  for (int n = 1; n <= 3; ++n)
    for (int k = 0; k <= n; ++k) {
      CAPTURE(n);
      CAPTURE(k);
      const auto u = unisolvency_matrix(shape_space(SpaceFamily::S1plus, n, k));
      CHECK(u.matrix.rows() == family_dimension(SpaceFamily::S1plus, n, k));
      CHECK(!is_zero(u.det));
      CHECK(!is_zero(unisolvency_matrix(shape_space(SpaceFamily::Q1minus, n, k)).det));
    }
  const auto s21 = unisolvency_matrix(shape_space(SpaceFamily::S1plus, 2, 1));
  CHECK(s21.matrix.rows() == 8);
}

TEST_CASE("reference dual bases are dual") {
  for (int n = 1; n <= 3; ++n)
    for (int k = 0; k <= n; ++k)
      for (auto f : {SpaceFamily::P1, SpaceFamily::P1minus, SpaceFamily::Q1minus, SpaceFamily::S1plus}) {
        const auto& el = reference_element(f, n, k);
        const auto m = dof_matrix(el.cell, n, k, el.dofs, el.dual);
        CHECK(m == RationalMatrix::identity(el.dual.size()));
      }
}

TEST_CASE("closed-form simplicial bases are already dual") {
  for (int n = 1; n <= 3; ++n)
    for (int k = 0; k <= n; ++k) {
      const auto p1 = shape_space(SpaceFamily::P1, n, k);
      CHECK(dof_matrix(ReferenceCell::simplex, n, k, dof_descriptors(ReferenceCell::simplex, n, k, DofKind::vertex),
                       p1.shapes) == RationalMatrix::identity(p1.size()));
      const auto w = shape_space(SpaceFamily::P1minus, n, k);
      CHECK(dof_matrix(ReferenceCell::simplex, n, k,
                       dof_descriptors(ReferenceCell::simplex, n, k, DofKind::face_integral),
                       w.shapes) == RationalMatrix::identity(w.size()));
    }
}

TEST_CASE("Bareiss determinant agrees with elimination") {
  RationalMatrix m(3, 3);
  const int v[9] = {2, -1, 0, -1, 2, -1, 0, -1, 2};
  for (int i = 0; i < 9; ++i) m(static_cast<std::size_t>(i / 3), static_cast<std::size_t>(i % 3)) = ratio(v[i], 3);
  CHECK(determinant(m) == Rational(4, 27));
  m(0, 0) = 0;
  m(1, 1) = 0;
  m(2, 2) = 0;
  CHECK(determinant(m) == 0);
  CHECK(!inverse(m).has_value());
}
