#include <doctest.h>

#include <lochodge/hodge_solver.hpp>
#include <lochodge/manufactured.hpp>

#include <cmath>
#include <random>

using namespace lochodge;

namespace {

Vector random_vector(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Vector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = unif(rng);
  return v;
}

double l2(const SparseMatrix& M, const Vector& v) { return std::sqrt(v.dot(M * v)); }

}  // namespace

TEST_CASE("Betti numbers of the test domains") {
  CHECK(build_grid(Domain::unit_square, MeshKind::simplicial, 1).betti_numbers() == std::vector<long>{1, 0, 0});
  CHECK(build_grid(Domain::square_with_hole, MeshKind::simplicial, 0).betti_numbers() == std::vector<long>{1, 1, 0});
  CHECK(build_grid(Domain::square_with_hole, MeshKind::cubical, 1).betti_numbers() == std::vector<long>{1, 1, 0});
  CHECK(build_grid(Domain::unit_cube, MeshKind::simplicial, 1).betti_numbers() == std::vector<long>{1, 0, 0, 0});
  CHECK(build_grid(Domain::unit_interval, MeshKind::simplicial, 2).betti_numbers() == std::vector<long>{1, 0});
}

TEST_CASE("dense harmonic forms match the Betti numbers") {
  for (auto kind : {MeshKind::simplicial, MeshKind::cubical})
    for (int level = 0; level <= 1; ++level) {
      CAPTURE(level);
      const auto square = build_grid(Domain::unit_square, kind, level);
      CHECK(harmonic_basis(HodgePair(square, 1), 5000, true).dim() == 0);
      CHECK(harmonic_basis(HodgePair(square, 2), 5000, true).dim() == 0);
      const auto h0 = harmonic_basis(HodgePair(square, 0), 5000, true);
      REQUIRE(h0.dim() == 1);
      // Constants: all nodal values equal.
      CHECK(h0.vectors.col(0).maxCoeff() - h0.vectors.col(0).minCoeff() < 1e-10);

      const auto hole = build_grid(Domain::square_with_hole, kind, level);
      const HodgePair pair(hole, 1);
      const auto h = harmonic_basis(pair, 5000, true);
      REQUIRE(h.dim() == 1);
      CHECK(h.max_dq <= 1e-10);
      CHECK(h.max_btq <= 1e-10);
      const Eigen::MatrixXd gram = h.vectors.transpose() * (mass_exact(pair.vk()) * h.vectors);
      CHECK(std::abs(gram(0, 0) - 1.0) < 1e-12);
      CHECK(!h.from_topology);
      CHECK(harmonic_basis(pair).dim() == 1);
    }
  const auto cube = build_grid(Domain::unit_square, MeshKind::simplicial, 1);
  CHECK(harmonic_basis(HodgePair(cube, 1)).from_topology);
}

TEST_CASE("1D hand oracle for the local coderivative") {
  const auto mesh = build_grid(Domain::unit_interval, MeshKind::simplicial, 1);
  const HodgePair pair(mesh, 1);
  const auto m = assemble_hodge(pair);
  // u = dx: each Whitney dof is the integral over its cell.
  const Vector u = interpolate(pair.vk(), [](std::span<const double>) { return AltForm<double>(1, 1, {1.0}); });
  const Vector ds = coderivative_local(m, pair.vkm1(), u);
  REQUIRE(ds.size() == 3);
  for (int v = 0; v < 3; ++v) {
    const double x = mesh.vertex(v)[0];
    const double expected = x == 0.0 ? -4.0 : (x == 1.0 ? 4.0 : 0.0);
    CHECK(ds(v) == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("adjoint identity, block equivalence and coefficient scaling") {
  std::mt19937 rng(7);
  for (auto kind : {MeshKind::simplicial, MeshKind::cubical})
    for (auto [domain, k] : {std::pair{Domain::unit_square, 1}, std::pair{Domain::unit_square, 2},
                             std::pair{Domain::unit_cube, 1}, std::pair{Domain::unit_cube, 3}}) {
      CAPTURE(k);
      const auto mesh = build_grid(domain, kind, 1);
      const HodgePair pair(mesh, k);
      const auto m = assemble_hodge(pair);
      const SparseMatrix Mh = m.Mh->to_sparse();
      double adjoint = 0.0, blocks = 0.0;
      for (int t = 0; t < 50; ++t) {
        const Vector u = random_vector(rng, pair.vk().size());
        const Vector ds = coderivative_local(m, pair.vkm1(), u);
        const Vector rhs = m.B.transpose() * u;
        adjoint = std::max(adjoint, (Mh * ds - rhs).cwiseAbs().maxCoeff() / rhs.cwiseAbs().maxCoeff());
        const Vector global = coderivative_global(m, u, Variant::lumped);
        blocks = std::max(blocks, (ds - global).cwiseAbs().maxCoeff() / global.cwiseAbs().maxCoeff());
      }
      CHECK(adjoint <= 1e-10);
      CHECK(blocks <= 1e-12);

      const int C = binomial(mesh.dim(), k - 1);
      std::vector<double> three(static_cast<std::size_t>(C * C), 0.0);
      for (int i = 0; i < C; ++i) three[static_cast<std::size_t>(i * C + i)] = 3.0;
      const auto K = CoefficientField::constant(mesh, k - 1, three);
      const auto mk = assemble_hodge(pair, &K);
      const Vector u = random_vector(rng, pair.vk().size());
      const Vector a = coderivative_local(m, pair.vkm1(), u);
      const Vector b = coderivative_local(mk, pair.vkm1(), u);
      CHECK((b - 3.0 * a).cwiseAbs().maxCoeff() <= 1e-12 * a.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("locality: far perturbations leave d*_h u at a vertex bitwise unchanged") {
  std::mt19937 rng(3);
  for (auto kind : {MeshKind::simplicial, MeshKind::cubical}) {
    const auto mesh = build_grid(Domain::unit_square, kind, 2);
    const HodgePair pair(mesh, 1);
    const auto m = assemble_hodge(pair);
    const Vector u = random_vector(rng, pair.vk().size());
    int far = 0, near_nonzero = 0, control_nonzero = 0;
    for (int dof = 0; dof < static_cast<int>(pair.vk().size()); ++dof) {
      const auto rep = locality_certificate(pair, m, u, 0, dof);
      if (rep.far) {
        ++far;
        CHECK(rep.max_change == 0.0);
        if (locality_certificate(pair, m, u, 0, dof, Variant::exact).max_change > 0.0) ++control_nonzero;
      } else if (rep.max_change > 0.0) {
        ++near_nonzero;
      }
    }
    CHECK(far > 10);
    CHECK(near_nonzero > 0);
    CHECK(control_nonzero > 0);
  }
}

TEST_CASE("saddle solves: zero data, solver agreement and residuals") {
  for (auto kind : {MeshKind::simplicial, MeshKind::cubical})
    for (int k : {1, 2}) {
      CAPTURE(k);
      const auto mesh = build_grid(Domain::unit_square, kind, 2);
      const HodgePair pair(mesh, k);
      const auto m = assemble_hodge(pair);
      const auto H = harmonic_basis(pair);
      const auto zero = solve_hodge(pair, m, H, Vector::Zero(static_cast<Eigen::Index>(pair.vk().size())));
      CHECK(zero.u.norm() == 0.0);
      CHECK(zero.sigma.norm() == 0.0);

      const auto ms = k == 2 ? top_degree_solution(2) : gradient_solution(2);
      const Vector F = load_vector(pair.vk(), ms.f);
      for (auto variant : {Variant::lumped, Variant::exact}) {
        SolveOptions opts;
        opts.variant = variant;
        const auto a = solve_hodge(pair, m, H, F, opts);
        CHECK(a.residual <= 1e-10);
        opts.solver = SolverChoice::bordered_lu;
        const auto b = solve_hodge(pair, m, H, F, opts);
        CHECK(b.residual <= 1e-10);
        opts.solver = SolverChoice::minres;
        const auto c = solve_hodge(pair, m, H, F, opts);
        CHECK(c.residual <= 1e-9);
        const double scale = l2(m.M, a.sigma) + l2(m.Mk, a.u);
        CHECK(l2(m.M, a.sigma - b.sigma) + l2(m.Mk, a.u - b.u) <= 1e-8 * scale);
        CHECK(l2(m.M, a.sigma - c.sigma) + l2(m.Mk, a.u - c.u) <= 1e-7 * scale);
      }
    }
}

TEST_CASE("harmonic constraint on the annulus") {
  const auto mesh = build_grid(Domain::square_with_hole, MeshKind::simplicial, 1);
  const HodgePair pair(mesh, 1);
  const auto m = assemble_hodge(pair);
  const auto H = harmonic_basis(pair);
  REQUIRE(H.dim() == 1);
  // A load with a harmonic component: p picks it up and u stays orthogonal to q.
  const Vector F = m.Mk * (H.vectors.col(0) + Vector::Ones(static_cast<Eigen::Index>(pair.vk().size())) * 0.1);
  for (auto variant : {Variant::lumped, Variant::exact}) {
    SolveOptions opts;
    opts.variant = variant;
    const auto s = solve_hodge(pair, m, H, F, opts);
    CHECK(s.residual <= 1e-10);
    CHECK(std::abs(s.u.dot(m.Mk * H.vectors.col(0))) <= 1e-10);
    CHECK(std::abs(s.p(0) - H.vectors.col(0).dot(F)) <= 1e-10);
  }
}

TEST_CASE("inf-sup constants are positive and stable") {
  for (auto kind : {MeshKind::simplicial, MeshKind::cubical}) {
    std::vector<double> values;
    for (int level = 1; level <= 2; ++level) {
      const auto mesh = build_grid(Domain::unit_square, kind, level);
      const HodgePair pair(mesh, 1);
      const auto m = assemble_hodge(pair);
      const auto H = harmonic_basis(pair);
      const auto lumped = infsup_estimate(pair, m, H, Variant::lumped);
      const auto exact = infsup_estimate(pair, m, H, Variant::exact);
      CHECK(lumped.infsup > 0.0);
      CHECK(lumped.c_p > 0.0);
      CHECK(lumped.infsup / exact.infsup < 2.0);
      CHECK(exact.infsup / lumped.infsup < 2.0);
      values.push_back(lumped.infsup);
    }
    CHECK(std::abs(values[1] - values[0]) < 0.2 * values[0]);
  }
}

TEST_CASE("manufactured fields satisfy sigma = K d*u and f = d sigma") {
  // Central differences of the closed forms at interior points.
  const double h = 1e-5;
  const std::vector<double> K{2.0, 0.5, 0.5, 1.0};
  const auto top = top_degree_solution(2, K);
  const auto grad = gradient_solution(2, 3.0);
  for (const auto& p : {std::vector<double>{0.3, 0.7}, std::vector<double>{0.61, 0.17}}) {
    auto shifted = [&](int axis, double s) {
      auto q = p;
      q[static_cast<std::size_t>(axis)] += s;
      return q;
    };
    auto partial = [&](const FormField& f, std::size_t comp, int axis) {
      return (f(shifted(axis, h))[comp] - f(shifted(axis, -h))[comp]) / (2 * h);
    };
    // n = 2, k = 2: Alt^1 order (dx1, dx2); d*u = (d_2 phi, -d_1 phi) since (d*u)_i = (-1)^i d_i phi on dx_{[2]\\i}.
    const double d1 = partial(top.u, 0, 0);
    const double d2 = partial(top.u, 0, 1);
    const std::vector<double> dstar{d2, -d1};
    const auto s = top.sigma(p);
    CHECK(s[0] == doctest::Approx(K[0] * dstar[0] + K[1] * dstar[1]).epsilon(1e-8));
    CHECK(s[1] == doctest::Approx(K[2] * dstar[0] + K[3] * dstar[1]).epsilon(1e-8));
    // d(s1 dx1 + s2 dx2) = (d_1 s2 - d_2 s1) vol.
    CHECK(top.f(p)[0] == doctest::Approx(partial(top.sigma, 1, 0) - partial(top.sigma, 0, 1)).epsilon(1e-6));
    // Gradient case: u = grad p, sigma = -c lap p, f = grad sigma.
    CHECK(grad.f(p)[0] == doctest::Approx(partial(grad.sigma, 0, 0)).epsilon(1e-6));
    CHECK(grad.f(p)[1] == doctest::Approx(partial(grad.sigma, 0, 1)).epsilon(1e-6));
    const double div_u = partial(grad.u, 0, 0) + partial(grad.u, 1, 1);
    CHECK(grad.sigma(p)[0] == doctest::Approx(-3.0 * div_u).epsilon(1e-6));
  }
}

TEST_CASE("top-degree manufactured solution converges at first order") {
  const auto ms = top_degree_solution(2);
  std::vector<double> errors;
  for (int level = 2; level <= 4; ++level) {
    const auto mesh = build_grid(Domain::unit_square, MeshKind::simplicial, level);
    const HodgePair pair(mesh, 2);
    const auto m = assemble_hodge(pair);
    const auto H = harmonic_basis(pair);
    const auto s = solve_hodge(pair, m, H, load_vector(pair.vk(), ms.f));
    // Compare with the cell means of u.
    const Vector means = project_piecewise_constant(mesh, 2, ms.u);
    const Vector uh = project_piecewise_constant(pair.vk(), s.u);
    double err = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c) err += mesh.cell_volume(c) * std::pow(means(c) - uh(c), 2);
    errors.push_back(std::sqrt(err));
  }
  CHECK(errors[1] < errors[0]);
  CHECK(errors[2] < errors[1]);
}
