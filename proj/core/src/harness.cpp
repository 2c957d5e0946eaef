#include <lochodge/harness.hpp>

#include <json.hpp>

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#ifndef LOCHODGE_VERSION
#define LOCHODGE_VERSION "unknown"
#endif
#ifndef LOCHODGE_GIT_COMMIT
#define LOCHODGE_GIT_COMMIT "unknown"
#endif

namespace lochodge {

namespace {

using json = nlohmann::ordered_json;

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

std::string_view solver_name(SolverChoice s) {
  switch (s) {
    case SolverChoice::automatic: return "automatic";
    case SolverChoice::bordered_lu: return "bordered_lu";
    case SolverChoice::minres: return "minres";
  }
  return "automatic";
}

SolverChoice parse_solver(std::string_view s) {
  if (s == "automatic") return SolverChoice::automatic;
  if (s == "bordered_lu") return SolverChoice::bordered_lu;
  if (s == "minres") return SolverChoice::minres;
  throw std::invalid_argument("config: unknown solver '" + std::string(s) + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json coefficient_document(const StudyConfig& c) {
  if (c.coefficient_path.empty()) return json();
  return json::parse(read_file(c.coefficient_path));
}

// Coefficient on a mesh: inline matrix, file matrix or per-cell file; nullopt without one.
std::optional<CoefficientField> coefficient_on(const StudyConfig& c, const MeshComplex& mesh) {
  const auto K = constant_coefficient(c);
  if (!K.empty()) return CoefficientField::constant(mesh, c.k - 1, K);
  if (c.coefficient_path.empty()) return std::nullopt;
  const auto field = coefficient_from_json(read_file(c.coefficient_path), mesh);
  if (field.k() != c.k - 1) throw std::invalid_argument("coefficient file: k must be k-1 of the study");
  return field;
}

ManufacturedSolution manufactured_for(const StudyConfig& c) {
  const int n = c.dim();
  const auto K = constant_coefficient(c);
  if (c.solution == "top") return top_degree_solution(n, K);
  if (c.solution == "gradient") return gradient_solution(n, K.empty() ? 1.0 : K[0]);
  throw std::invalid_argument("config: unknown solution '" + c.solution + "'");
}

double rate(double ea, double eb, double ha, double hb) {
  if (std::max(ea, eb) <= kRoundoffError) return std::numeric_limits<double>::quiet_NaN();
  return std::log(ea / eb) / std::log(ha / hb);
}

std::string fmt(double x, const char* spec = "%.10e") {
  if (std::isnan(x)) return {};
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json metadata() {
  return {{"library", "lochodge"}, {"version", library_version()}, {"git_commit", git_commit()}};
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

std::string library_version() { return LOCHODGE_VERSION; }
std::string git_commit() { return LOCHODGE_GIT_COMMIT; }

void validate_config(const StudyConfig& c) {
  const int n = c.dim();
  if (c.k < 0 || c.k > n)
    throw std::invalid_argument("config: k = " + std::to_string(c.k) + " is not valid for n = " + std::to_string(n));
  if (c.levels.empty()) throw std::invalid_argument("config: no levels given");
  for (std::size_t i = 0; i < c.levels.size(); ++i) {
    if (c.levels[i] < 0) throw std::invalid_argument("config: negative level");
    if (i > 0 && c.levels[i] <= c.levels[i - 1]) throw std::invalid_argument("config: levels must increase");
  }
  if (!c.coefficient_matrix.empty()) {
    if (c.k < 1) throw std::invalid_argument("config: a coefficient needs k >= 1");
    const auto C = static_cast<std::size_t>(binomial(n, c.k - 1));
    if (c.coefficient_matrix.size() != C * C)
      throw std::invalid_argument("config: coefficient_matrix needs " + std::to_string(C * C) + " entries");
  }
  if (c.samples < 0) throw std::invalid_argument("config: samples must be >= 0");
}

StudyConfig config_from_json(std::string_view text) {
  const auto doc = json::parse(text);
  if (!doc.is_object()) throw std::invalid_argument("config: expected a JSON object");
  StudyConfig c;
  for (const auto& [key, value] : doc.items()) {
    if (key == "domain") {
      const auto d = parse_domain(value.get<std::string>());
      if (!d) throw std::invalid_argument("config: unknown domain " + value.dump());
      c.domain = *d;
    } else if (key == "kind") {
      const auto k = parse_kind(value.get<std::string>());
      if (!k) throw std::invalid_argument("config: unknown kind " + value.dump());
      c.kind = *k;
    } else if (key == "k") {
      c.k = value.get<int>();
    } else if (key == "variant") {
      const auto v = parse_variant(value.get<std::string>());
      if (!v) throw std::invalid_argument("config: unknown variant " + value.dump());
      c.variant = *v;
    } else if (key == "levels") {
      c.levels = value.get<std::vector<int>>();
    } else if (key == "solution") {
      c.solution = value.get<std::string>();
    } else if (key == "coefficient") {
      c.coefficient_path = value.get<std::string>();
    } else if (key == "coefficient_matrix") {
      c.coefficient_matrix = value.get<std::vector<double>>();
    } else if (key == "out") {
      c.out = value.get<std::string>();
    } else if (key == "solver") {
      c.solver = parse_solver(value.get<std::string>());
    } else if (key == "seed") {
      c.seed = value.get<unsigned>();
    } else if (key == "samples") {
      c.samples = value.get<int>();
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  validate_config(c);
  return c;
}

namespace {

json config_object(const StudyConfig& c) {
  json j;
  j["domain"] = domain_name(c.domain);
  j["kind"] = kind_name(c.kind);
  j["k"] = c.k;
  j["variant"] = variant_name(c.variant);
  j["levels"] = c.levels;
  j["solution"] = c.solution;
  if (!c.coefficient_path.empty()) j["coefficient"] = c.coefficient_path;
  if (!c.coefficient_matrix.empty()) j["coefficient_matrix"] = c.coefficient_matrix;
  if (!c.out.empty()) j["out"] = c.out;
  j["solver"] = solver_name(c.solver);
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  return j;
}

}  // namespace

std::string config_to_json(const StudyConfig& c) { return config_object(c).dump(2); }

std::vector<double> constant_coefficient(const StudyConfig& c) {
  if (!c.coefficient_matrix.empty()) return c.coefficient_matrix;
  const auto doc = coefficient_document(c);
  if (doc.is_null() || !doc.contains("matrix")) return {};
  if (doc.at("k").get<int>() != c.k - 1) throw std::invalid_argument("coefficient file: k must be k-1 of the study");
  std::vector<double> flat;
  for (const auto& row : doc.at("matrix")) {
    if (row.is_array())
      for (const auto& x : row) flat.push_back(x.get<double>());
    else
      flat.push_back(row.get<double>());
  }
  const auto C = static_cast<std::size_t>(binomial(c.dim(), c.k - 1));
  if (flat.size() != C * C) throw std::invalid_argument("coefficient file: matrix needs " + std::to_string(C * C) + " entries");
  return flat;
}

double l2_error(const FeSpace& space, const Vector& coeffs, const FormField& exact, bool derivative, int points) {
  const auto& mesh = space.mesh();
  const int n = space.n();
  if (derivative && space.k() == n) return 0.0;  // no (n+1)-forms
  const auto rule = reference_rule(space.cell_type(), n, points);
  const auto tab = tabulate(space, rule);
  const std::size_t C = derivative ? static_cast<std::size_t>(binomial(n, space.k() + 1)) : tab.comps;
  std::vector<double> vals, dvals;
  double sum = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto g = cell_geometry(mesh, c);
    map_tabulation(space, c, g, tab, vals, dvals);
    const auto dofs = space.cell_dofs(c);
    const auto& table = derivative ? dvals : vals;
    const std::size_t width = derivative ? tab.dcomps : tab.comps;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto ex = exact(g.physical_point(rule.point(q)));
      if (ex.size() != C) throw std::invalid_argument("l2_error: exact field has the wrong degree");
      double local = 0.0;
      for (std::size_t s = 0; s < C; ++s) {
        double uh = 0.0;
        if (width > 0)
          for (std::size_t j = 0; j < tab.local; ++j) uh += coeffs(dofs[j]) * table[(q * tab.local + j) * width + s];
        const double e = ex[s] - uh;
        local += e * e;
      }
      sum += rule.weights[q] * g.det * local;
    }
  }
  return std::sqrt(sum);
}

ConvergenceReport run_convergence(const StudyConfig& config) {
  validate_config(config);
  const auto ms = manufactured_for(config);
  if (ms.k != config.k)
    throw std::invalid_argument("convergence: solution '" + config.solution + "' is a k = " + std::to_string(ms.k) +
                                " case");
  if (config.domain != Domain::unit_square && config.domain != Domain::unit_cube &&
      config.domain != Domain::unit_interval)
    throw std::invalid_argument("convergence: manufactured solutions live on the unit box");
  const auto coef = constant_coefficient(config);
  if (coef.empty() && !config.coefficient_path.empty())
    throw std::invalid_argument("convergence: per-cell coefficient files are tied to one mesh; use a matrix");

  ConvergenceReport rep;
  rep.config = config;
  rep.boundary_note = ms.boundary_note;
  SolveOptions opts;
  opts.variant = config.variant;
  opts.solver = config.solver;
  for (int level : config.levels) {
    try {
      const auto mesh = build_grid(config.domain, config.kind, level);
      const HodgePair pair(mesh, config.k);
      std::optional<CoefficientField> K;
      if (!coef.empty()) K = CoefficientField::constant(mesh, config.k - 1, coef);
      const auto m = assemble_hodge(pair, K ? &*K : nullptr);
      const auto H = harmonic_basis(pair);
      const Vector F = load_vector(pair.vk(), ms.f);
      const auto sol = solve_hodge(pair, m, H, F, opts);

      ConvergenceLevel row;
      row.level = level;
      row.h = mesh.h();
      row.dofs = pair.vkm1().size() + pair.vk().size();
      row.err_sigma_l2 = l2_error(pair.vkm1(), sol.sigma, ms.sigma);
      row.err_sigma_energy = row.err_sigma_l2 + l2_error(pair.vkm1(), sol.sigma, ms.dsigma, true);
      row.err_u_l2 = l2_error(pair.vk(), sol.u, ms.u);
      row.err_du_l2 = config.k < mesh.dim() ? l2_error(pair.vk(), sol.u, ms.du, true) : 0.0;
      row.residual = sol.residual;
      row.harmonic_dim = sol.harmonic_dim;
      row.iterations = sol.iterations;
      row.method = sol.method;
      rep.levels.push_back(row);
    } catch (const std::exception& e) {
      throw std::runtime_error("convergence: level " + std::to_string(level) + ": " + e.what());
    }
  }
  for (std::size_t i = 0; i + 1 < rep.levels.size(); ++i) {
    const auto& a = rep.levels[i];
    const auto& b = rep.levels[i + 1];
    ConvergenceRate r;
    r.from_level = a.level;
    r.to_level = b.level;
    r.sigma_l2 = rate(a.err_sigma_l2, b.err_sigma_l2, a.h, b.h);
    r.sigma_energy = rate(a.err_sigma_energy, b.err_sigma_energy, a.h, b.h);
    r.u_l2 = rate(a.err_u_l2, b.err_u_l2, a.h, b.h);
    r.du_l2 = rate(a.err_du_l2, b.err_du_l2, a.h, b.h);
    r.total = rate(a.total(), b.total(), a.h, b.h);
    rep.rates.push_back(r);
  }
  return rep;
}

std::string convergence_csv(const ConvergenceReport& r) {
  std::string out = "level,h,dofs,err_sigma_l2,err_sigma_energy,err_u_l2,err_du_l2,residual\n";
  for (const auto& l : r.levels)
    out += std::to_string(l.level) + "," + fmt(l.h) + "," + std::to_string(l.dofs) + "," + fmt(l.err_sigma_l2) + "," +
           fmt(l.err_sigma_energy) + "," + fmt(l.err_u_l2) + "," + fmt(l.err_du_l2) + "," + fmt(l.residual, "%.3e") +
           "\n";
  out += "\nfrom_level,to_level,rate_sigma_l2,rate_sigma_energy,rate_u_l2,rate_du_l2,rate_total\n";
  for (const auto& x : r.rates)
    out += std::to_string(x.from_level) + "," + std::to_string(x.to_level) + "," + fmt(x.sigma_l2, "%.4f") + "," +
           fmt(x.sigma_energy, "%.4f") + "," + fmt(x.u_l2, "%.4f") + "," + fmt(x.du_l2, "%.4f") + "," +
           fmt(x.total, "%.4f") + "\n";
  return out;
}

std::string convergence_json(const ConvergenceReport& r) {
  json j;
  j["config"] = config_object(r.config);
  j["metadata"] = metadata();
  j["solution"] = {{"id", r.config.solution}, {"boundary_note", r.boundary_note}};
  auto levels = json::array();
  for (const auto& l : r.levels)
    levels.push_back({{"level", l.level},
                      {"h", l.h},
                      {"dofs", l.dofs},
                      {"err_sigma_l2", l.err_sigma_l2},
                      {"err_sigma_energy", l.err_sigma_energy},
                      {"err_u_l2", l.err_u_l2},
                      {"err_du_l2", l.err_du_l2},
                      {"residual", l.residual},
                      {"harmonic_dim", l.harmonic_dim},
                      {"iterations", l.iterations},
                      {"method", l.method}});
  j["levels"] = levels;
  auto rates = json::array();
  for (const auto& x : r.rates)
    rates.push_back({{"from_level", x.from_level},
                     {"to_level", x.to_level},
                     {"sigma_l2", number_or_null(x.sigma_l2)},
                     {"sigma_energy", number_or_null(x.sigma_energy)},
                     {"u_l2", number_or_null(x.u_l2)},
                     {"du_l2", number_or_null(x.du_l2)},
                     {"total", number_or_null(x.total)}});
  j["rates"] = rates;
  const double last = r.final_total_rate();
  j["threshold"] = {{"total_rate", kRateThreshold},
                    {"note", "theory gives O(h) without constants; the 0.9 margin is an engineering choice"},
                    {"pass", !r.rates.empty() && last >= kRateThreshold}};
  return j.dump(2) + "\n";
}

LocalityStudy run_locality(const StudyConfig& config) {
  validate_config(config);
  if (config.k < 1) throw std::invalid_argument("locality: needs k >= 1");
  LocalityStudy s;
  s.config = config;
  s.level = config.levels.back();
  const auto mesh = build_grid(config.domain, config.kind, s.level);
  const HodgePair pair(mesh, config.k);
  const auto K = coefficient_on(config, mesh);
  const auto m = assemble_hodge(pair, K ? &*K : nullptr);
  const auto& vkm1 = pair.vkm1();
  const auto nu = pair.vk().size();
  s.vertices = mesh.num_vertices();

  std::mt19937 rng(config.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector u(idx(nu));
  for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = dist(rng);
  const Vector base = coderivative_local(m, vkm1, u);

  // Exact-mass control: the change of M^-1 B^T u under u += e_i is the column M^-1 B^T e_i.
  Eigen::SimplicialLDLT<SparseMatrix> exact(m.M);
  if (exact.info() != Eigen::Success) throw std::runtime_error("locality: exact mass factorization failed");
  const SparseMatrix Bt = m.B.transpose();

  for (std::size_t i = 0; i < nu; ++i) {
    Vector w = u;
    w(idx(i)) += 1.0;
    const Vector pert = coderivative_local(m, vkm1, w);
    const Vector control = exact.solve(Vector(Bt.col(idx(i))));
    const double scale = std::max(1.0, control.cwiseAbs().maxCoeff());
    int control_left = config.samples;
    for (int x = 0; x < mesh.num_vertices(); ++x) {
      const bool far = dof_is_far(pair, x, static_cast<int>(i));
      double change = 0.0, cchange = 0.0;
      for (int j : vkm1.vertex_dofs(x)) {
        change = std::max(change, std::abs(pert(j) - base(j)));
        cchange = std::max(cchange, std::abs(control(j)));
      }
      if (far) {
        ++s.far_tested;
        if (change != 0.0) ++s.far_changed;
        s.max_far_change = std::max(s.max_far_change, change);
        if (control_left > 0) {
          --control_left;
          ++s.control_tested;
          if (cchange > 1e-13 * scale) ++s.control_changed;
          s.max_control_change = std::max(s.max_control_change, cchange);
        }
      } else {
        ++s.near_tested;
        if (change != 0.0) ++s.near_changed;
      }
    }
  }
  return s;
}

std::string locality_json(const LocalityStudy& s) {
  json j;
  j["config"] = config_object(s.config);
  j["metadata"] = metadata();
  j["level"] = s.level;
  j["vertices"] = s.vertices;
  j["far"] = {{"tested", s.far_tested}, {"changed", s.far_changed}, {"max_change", s.max_far_change}};
  j["near"] = {{"tested", s.near_tested}, {"changed", s.near_changed}};
  j["exact_mass_control"] = {
      {"tested", s.control_tested}, {"changed", s.control_changed}, {"max_change", s.max_control_change}};
  j["pass"] = s.far_tested > 0 && s.far_changed == 0 && s.control_changed > 0;
  return j.dump(2) + "\n";
}

UnisolvencyStudy run_unisolvency(int n_max) {
  UnisolvencyStudy s;
  s.n_max = n_max;
  s.rows = s1plus_suite(n_max);
  return s;
}

std::string unisolvency_csv(const UnisolvencyStudy& s) {
  std::string out = "check,n,k,pass,detail\n";
  for (const auto& r : s.rows) {
    std::string detail = r.detail;
    std::replace(detail.begin(), detail.end(), ',', ';');
    out += r.name + "," + std::to_string(r.n) + "," + std::to_string(r.k) + "," + (r.pass ? "1" : "0") + "," + detail +
           "\n";
  }
  return out;
}

std::string unisolvency_json(const UnisolvencyStudy& s) {
  json j;
  j["metadata"] = metadata();
  j["n_max"] = s.n_max;
  auto rows = json::array();
  for (const auto& r : s.rows)
    rows.push_back({{"check", r.name}, {"n", r.n}, {"k", r.k}, {"pass", r.pass}, {"detail", r.detail}});
  j["rows"] = rows;
  j["pass"] = s.pass();
  return j.dump(2) + "\n";
}

InfSupStudy run_infsup(const StudyConfig& config) {
  validate_config(config);
  InfSupStudy s;
  s.config = config;
  for (int level : config.levels) {
    const auto mesh = build_grid(config.domain, config.kind, level);
    const HodgePair pair(mesh, config.k);
    const auto K = coefficient_on(config, mesh);
    const auto m = assemble_hodge(pair, K ? &*K : nullptr);
    const auto H = harmonic_basis(pair);
    const auto lumped = infsup_estimate(pair, m, H, Variant::lumped);
    const auto exact = infsup_estimate(pair, m, H, Variant::exact);
    s.levels.push_back({level, lumped.h, lumped.dim, lumped.infsup, exact.infsup, lumped.c_p, exact.c_p});
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& r : s.levels) {
    const double v = config.variant == Variant::lumped ? r.infsup_lumped : r.infsup_exact;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  s.drift = hi > 0.0 ? (hi - lo) / hi : 0.0;
  return s;
}

std::string infsup_json(const InfSupStudy& s) {
  json j;
  j["config"] = config_object(s.config);
  j["metadata"] = metadata();
  auto levels = json::array();
  bool positive = true;
  for (const auto& r : s.levels) {
    positive = positive && r.infsup_lumped > 0.0 && r.infsup_exact > 0.0;
    levels.push_back({{"level", r.level},
                      {"h", r.h},
                      {"dim", r.dim},
                      {"infsup_lumped", r.infsup_lumped},
                      {"infsup_exact", r.infsup_exact},
                      {"c_p_lumped", r.c_p_lumped},
                      {"c_p_exact", r.c_p_exact}});
  }
  j["levels"] = levels;
  j["drift"] = s.drift;
  j["pass"] = positive && s.drift < 0.2;
  return j.dump(2) + "\n";
}

double conservation_check(const HodgePair& pair, const HodgeSolution& solution, const FormField& f,
                          const std::vector<int>& cells) {
  const auto& mesh = pair.mesh();
  const int n = mesh.dim();
  if (pair.k() != n) throw std::invalid_argument("conservation_check: needs k = n");
  const FeSpace facets(mesh, mesh.kind() == MeshKind::simplicial ? SpaceFamily::P1minus : SpaceFamily::Q1minus, n - 1);
  const Vector flux = canonical_projection_matrix(pair.vkm1(), facets) * solution.sigma;

  std::vector<int> cell_of_top(static_cast<std::size_t>(mesh.num_faces(n)), -1);
  for (int c = 0; c < mesh.num_cells(); ++c) cell_of_top[static_cast<std::size_t>(mesh.cell_faces(c, n)[0])] = c;
  std::vector<char> inside(static_cast<std::size_t>(mesh.num_cells()), 0);
  for (int c : cells) inside[static_cast<std::size_t>(c)] = 1;

  double boundary = 0.0;
  for (const auto& e : mesh.boundary(n))
    if (inside[static_cast<std::size_t>(cell_of_top[static_cast<std::size_t>(e.col)])])
      boundary += e.value * flux(e.row);

  const auto rule = reference_rule(mesh.cell_type(), n, 4);
  double source = 0.0;
  for (int c : cells) {
    const auto g = cell_geometry(mesh, c);
    for (std::size_t q = 0; q < rule.size(); ++q) source += rule.weights[q] * g.det * f(g.physical_point(rule.point(q)))[0];
  }
  return std::abs(source - boundary);
}

ConservationStudy run_conservation(const StudyConfig& config, int unions) {
  validate_config(config);
  if (config.k != config.dim()) throw std::invalid_argument("conservation: needs k = n");
  ConservationStudy s;
  s.config = config;
  s.level = config.levels.back();
  const auto mesh = build_grid(config.domain, config.kind, s.level);
  const HodgePair pair(mesh, config.k);
  const auto K = coefficient_on(config, mesh);
  const auto m = assemble_hodge(pair, K ? &*K : nullptr);
  const auto H = harmonic_basis(pair);
  // Any smooth source works; the manufactured one is used when the domain allows it.
  const int n = mesh.dim();
  const FormField f = [n](std::span<const double> x) {
    AltForm<double> a(n, n);
    double v = 1.0;
    for (double xi : x) v *= std::sin(3.0 * xi) + 0.5;
    a[0] = v;
    return a;
  };
  SolveOptions opts;
  opts.variant = config.variant;
  opts.solver = config.solver;
  const auto sol = solve_hodge(pair, m, H, load_vector(pair.vk(), f), opts);
  s.solve_residual = sol.residual;

  for (int c = 0; c < mesh.num_cells(); ++c)
    s.max_cell_residual = std::max(s.max_cell_residual, conservation_check(pair, sol, f, {c}));
  std::vector<int> all(static_cast<std::size_t>(mesh.num_cells()));
  for (int c = 0; c < mesh.num_cells(); ++c) all[static_cast<std::size_t>(c)] = c;
  s.domain_residual = conservation_check(pair, sol, f, all);

  // Cell adjacency through shared facets.
  std::vector<std::vector<int>> facet_cells(static_cast<std::size_t>(mesh.num_faces(n - 1)));
  for (int c = 0; c < mesh.num_cells(); ++c)
    for (int fid : mesh.cell_faces(c, n - 1)) facet_cells[static_cast<std::size_t>(fid)].push_back(c);
  std::mt19937 rng(config.seed);
  std::uniform_int_distribution<int> pick_cell(0, mesh.num_cells() - 1);
  std::uniform_int_distribution<int> pick_size(2, std::max(2, mesh.num_cells() / 2));
  for (int t = 0; t < unions; ++t) {
    const auto target = static_cast<std::size_t>(pick_size(rng));
    std::set<int> chosen{pick_cell(rng)};
    while (chosen.size() < target) {
      std::vector<int> candidates;
      for (int c : chosen)
        for (int fid : mesh.cell_faces(c, n - 1))
          for (int d : facet_cells[static_cast<std::size_t>(fid)])
            if (!chosen.count(d)) candidates.push_back(d);
      if (candidates.empty()) break;
      std::sort(candidates.begin(), candidates.end());
      candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      chosen.insert(candidates[pick(rng)]);
    }
    s.max_union_residual =
        std::max(s.max_union_residual, conservation_check(pair, sol, f, std::vector<int>(chosen.begin(), chosen.end())));
    ++s.unions;
  }
  return s;
}

std::string conservation_json(const ConservationStudy& s) {
  json j;
  j["config"] = config_object(s.config);
  j["metadata"] = metadata();
  j["level"] = s.level;
  j["solve_residual"] = s.solve_residual;
  j["max_cell_residual"] = s.max_cell_residual;
  j["domain_residual"] = s.domain_residual;
  j["unions"] = s.unions;
  j["max_union_residual"] = s.max_union_residual;
  j["pass"] = std::max({s.max_cell_residual, s.domain_residual, s.max_union_residual}) <= 1e-10;
  return j.dump(2) + "\n";
}

std::string solve_json(const StudyConfig& config) {
  validate_config(config);
  const int level = config.levels.back();
  const auto mesh = build_grid(config.domain, config.kind, level);
  const HodgePair pair(mesh, config.k);
  const auto K = coefficient_on(config, mesh);
  const auto m = assemble_hodge(pair, K ? &*K : nullptr);
  const auto H = harmonic_basis(pair);
  // Errors are reported only when the closed form matches the configured problem.
  const bool unit_box = config.domain != Domain::square_with_hole;
  const bool constant_k = K == std::nullopt || !constant_coefficient(config).empty();
  const int id_k = config.solution == "top" ? config.dim() : config.solution == "gradient" ? 1 : -1;
  if (id_k != config.k) throw std::invalid_argument("solve: solution '" + config.solution + "' does not match k");
  const auto ms = manufactured_for(config);
  SolveOptions opts;
  opts.variant = config.variant;
  opts.solver = config.solver;
  const auto sol = solve_hodge(pair, m, H, load_vector(pair.vk(), ms.f), opts);

  json j;
  j["config"] = config_object(config);
  j["metadata"] = metadata();
  j["level"] = level;
  j["h"] = mesh.h();
  j["dofs"] = pair.vkm1().size() + pair.vk().size();
  j["residual"] = sol.residual;
  j["method"] = sol.method;
  j["iterations"] = sol.iterations;
  j["harmonic_dim"] = sol.harmonic_dim;
  if (unit_box && constant_k) {
    j["errors"] = {{"sigma_l2", l2_error(pair.vkm1(), sol.sigma, ms.sigma)},
                   {"u_l2", l2_error(pair.vk(), sol.u, ms.u)},
                   {"du_l2", config.k < mesh.dim() ? l2_error(pair.vk(), sol.u, ms.du, true) : 0.0}};
  } else {
    j["errors"] = nullptr;
  }
  j["sigma"] = to_std(sol.sigma);
  j["u"] = to_std(sol.u);
  j["p"] = to_std(sol.p);
  return j.dump(2) + "\n";
}

}  // namespace lochodge
