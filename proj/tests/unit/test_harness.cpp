#include <doctest.h>

#include <lochodge/harness.hpp>

#include <json.hpp>

#include <cmath>
#include <numeric>
#include <sstream>

using namespace lochodge;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

StudyConfig small(MeshKind kind, int k, const std::string& solution) {
  StudyConfig c;
  c.domain = Domain::unit_square;
  c.kind = kind;
  c.k = k;
  c.solution = solution;
  c.levels = {1, 2, 3};
  return c;
}

}  // namespace

TEST_CASE("config JSON round trip and validation") {
  const auto c = config_from_json(
      R"({"domain": "unit_cube", "kind": "cubical", "k": 1, "variant": "exact", "levels": [0, 1],
          "solution": "gradient", "coefficient_matrix": [2.0], "solver": "bordered_lu", "seed": 7})");
  CHECK(c.domain == Domain::unit_cube);
  CHECK(c.kind == MeshKind::cubical);
  CHECK(c.variant == Variant::exact);
  CHECK(c.levels == std::vector<int>{0, 1});
  CHECK(c.solver == SolverChoice::bordered_lu);
  CHECK(c.seed == 7u);
  const auto back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));

  CHECK_THROWS(config_from_json(R"({"domain": "unit_square", "k": 3})"));
  CHECK_THROWS(config_from_json(R"({"levels": [2, 1]})"));
  CHECK_THROWS(config_from_json(R"({"colour": "red"})"));
  CHECK_THROWS(config_from_json(R"({"k": 2, "coefficient_matrix": [1, 0, 0]})"));
  CHECK_THROWS(config_from_json(R"({"kind": "hexagonal"})"));
}

TEST_CASE("l2_error against fields the space reproduces") {
  const auto mesh = build_grid(Domain::unit_square, MeshKind::simplicial, 2);
  const FeSpace p1(mesh, SpaceFamily::P1, 0);
  const FormField linear = [](std::span<const double> x) {
    AltForm<double> a(2, 0);
    a[0] = 1.0 + x[0] - 2.0 * x[1];
    return a;
  };
  const FormField grad = [](std::span<const double>) {
    AltForm<double> a(2, 1);
    a[0] = 1.0;
    a[1] = -2.0;
    return a;
  };
  const Vector u = interpolate(p1, linear);
  CHECK(l2_error(p1, u, linear) < 1e-13);
  CHECK(l2_error(p1, u, grad, true) < 1e-13);
  // Zero coefficients give the norm: (1 + x - 2y)^2 integrates to 1/4 + 5/12 = 2/3.
  const Vector zero = Vector::Zero(u.size());
  CHECK(l2_error(p1, zero, linear) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("convergence report: columns, rates and determinism") {
  const auto c = small(MeshKind::simplicial, 2, "top");
  const auto rep = run_convergence(c);
  REQUIRE(rep.levels.size() == 3);
  REQUIRE(rep.rates.size() == 2);
  for (std::size_t i = 0; i + 1 < rep.levels.size(); ++i) {
    CHECK(rep.levels[i + 1].h == doctest::Approx(rep.levels[i].h / 2));
    CHECK(rep.levels[i + 1].err_sigma_l2 < rep.levels[i].err_sigma_l2);
    CHECK(rep.levels[i + 1].err_u_l2 < rep.levels[i].err_u_l2);
    // Independent recomputation of the observed rate.
    const double expect = std::log2(rep.levels[i].total() / rep.levels[i + 1].total());
    CHECK(rep.rates[i].total == doctest::Approx(expect).epsilon(1e-12));
    CHECK(std::isnan(rep.rates[i].du_l2));  // du = 0 exactly for k = n
  }
  for (const auto& l : rep.levels) CHECK(l.residual < 1e-10);

  const auto csv = convergence_csv(rep);
  const auto ls = lines(csv);
  REQUIRE(ls.size() == 1 + 3 + 1 + 1 + 2);
  CHECK(ls[0] == "level,h,dofs,err_sigma_l2,err_sigma_energy,err_u_l2,err_du_l2,residual");
  CHECK(ls[4].empty());
  CHECK(ls[5] == "from_level,to_level,rate_sigma_l2,rate_sigma_energy,rate_u_l2,rate_du_l2,rate_total");
  CHECK(fields(ls[1]).size() == 8);
  const auto rate_row = fields(ls[7]);
  REQUIRE(rate_row.size() == 7);
  CHECK(rate_row[5].empty());
  CHECK(csv.find('\r') == std::string::npos);

  const auto json_text = convergence_json(rep);
  const auto doc = nlohmann::json::parse(json_text);
  CHECK(doc["config"]["kind"] == "simplicial");
  CHECK(doc["metadata"]["version"] == library_version());
  CHECK(doc["rates"][0]["du_l2"].is_null());
  CHECK(doc["threshold"]["total_rate"] == kRateThreshold);

  const auto again = run_convergence(c);
  CHECK(convergence_csv(again) == csv);
  CHECK(convergence_json(again) == json_text);
}

TEST_CASE("convergence rejects inconsistent studies") {
  auto c = small(MeshKind::cubical, 1, "top");
  CHECK_THROWS(run_convergence(c));
  c.solution = "unknown";
  CHECK_THROWS(run_convergence(c));
  c = small(MeshKind::cubical, 1, "gradient");
  c.domain = Domain::square_with_hole;
  CHECK_THROWS(run_convergence(c));
}

TEST_CASE("gradient case converges on both kinds") {
  for (auto kind : {MeshKind::simplicial, MeshKind::cubical}) {
    CAPTURE(kind_name(kind));
    auto c = small(kind, 1, "gradient");
    c.levels = {2, 3, 4};
    const auto rep = run_convergence(c);
    CHECK(rep.final_total_rate() >= kRateThreshold);
    CHECK(rep.levels.back().err_du_l2 < 0.1);
  }
}

TEST_CASE("locality study: far perturbations are invisible, the exact mass is not local") {
  for (auto kind : {MeshKind::simplicial, MeshKind::cubical}) {
    CAPTURE(kind_name(kind));
    auto c = small(kind, 1, "gradient");
    c.levels = {2};
    const auto s = run_locality(c);
    CHECK(s.far_tested > 0);
    CHECK(s.far_changed == 0);
    CHECK(s.max_far_change == 0.0);
    CHECK(s.near_changed > 0);
    CHECK(s.control_changed > 0);
    const auto mesh = build_grid(Domain::unit_square, kind, 2);
    CHECK(s.far_tested + s.near_tested == static_cast<long>(s.vertices) * mesh.num_faces(1));
    const auto doc = nlohmann::json::parse(locality_json(s));
    CHECK(doc["pass"] == true);
  }
}

TEST_CASE("unisolvency study table") {
  const auto s = run_unisolvency(2);
  CHECK(s.pass());
  const auto ls = lines(unisolvency_csv(s));
  CHECK(ls[0] == "check,n,k,pass,detail");
  CHECK(ls.size() == s.rows.size() + 1);
  for (std::size_t i = 1; i < ls.size(); ++i) CHECK(fields(ls[i]).size() == 5);
}

TEST_CASE("inf-sup study on two levels") {
  auto c = small(MeshKind::cubical, 1, "gradient");
  c.levels = {1, 2};
  const auto s = run_infsup(c);
  REQUIRE(s.levels.size() == 2);
  for (const auto& r : s.levels) {
    CHECK(r.infsup_lumped > 0.0);
    CHECK(r.infsup_exact > 0.0);
    CHECK(r.c_p_lumped > 0.0);
  }
  CHECK(s.drift < 0.2);
}

TEST_CASE("conservation balance and its sensitivity") {
  for (auto kind : {MeshKind::simplicial, MeshKind::cubical}) {
    CAPTURE(kind_name(kind));
    auto c = small(kind, 2, "top");
    c.levels = {3};
    const auto s = run_conservation(c, 10);
    CHECK(s.max_cell_residual <= 1e-10);
    CHECK(s.domain_residual <= 1e-10);
    CHECK(s.max_union_residual <= 1e-10);
    CHECK(s.unions == 10);

    // A perturbed flux field must break the balance.
    const auto mesh = build_grid(Domain::unit_square, kind, 2);
    const HodgePair pair(mesh, 2);
    const auto m = assemble_hodge(pair);
    const auto ms = top_degree_solution(2);
    auto sol = solve_hodge(pair, m, harmonic_basis(pair), load_vector(pair.vk(), ms.f));
    std::vector<int> all(static_cast<std::size_t>(mesh.num_cells()));
    std::iota(all.begin(), all.end(), 0);
    CHECK(conservation_check(pair, sol, ms.f, {0}) <= 1e-10);
    CHECK(conservation_check(pair, sol, ms.f, all) <= 1e-10);
    sol.sigma *= 1.5;
    CHECK(conservation_check(pair, sol, ms.f, {0}) > 1e-3);
  }
  const auto mesh = build_grid(Domain::unit_square, MeshKind::simplicial, 1);
  const HodgePair pair(mesh, 1);
  CHECK_THROWS(conservation_check(pair, HodgeSolution{}, top_degree_solution(2).f, {0}));
}

TEST_CASE("solve report with and without closed-form errors") {
  auto c = small(MeshKind::simplicial, 2, "top");
  c.levels = {2};
  const auto doc = nlohmann::json::parse(solve_json(c));
  CHECK(doc["residual"].get<double>() < 1e-10);
  CHECK(doc["errors"]["u_l2"].get<double>() > 0.0);
  CHECK(doc["u"].size() == doc["dofs"].get<std::size_t>() - doc["sigma"].size());

  auto hole = small(MeshKind::cubical, 1, "gradient");
  hole.domain = Domain::square_with_hole;
  hole.levels = {1};
  const auto h = nlohmann::json::parse(solve_json(hole));
  CHECK(h["errors"].is_null());
  CHECK(h["harmonic_dim"] == 1);
}

TEST_CASE("coefficient matrix enters the manufactured data") {
  auto c = small(MeshKind::simplicial, 2, "top");
  c.levels = {2, 3};
  c.coefficient_matrix = {10.0, 3.0, 3.0, 1.0};
  const auto rep = run_convergence(c);
  CHECK(rep.levels.back().err_sigma_l2 < rep.levels.front().err_sigma_l2);
  CHECK(constant_coefficient(c) == c.coefficient_matrix);
}
