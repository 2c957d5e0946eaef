// lochodge: batch studies for the mixed Hodge Laplacian.
//
//   lochodge convergence --domain unit_square --kind simplicial --k 2 --levels 2,3,4 --out runs/top
//   lochodge locality    --domain unit_cube --kind cubical --k 1 --levels 1
//   lochodge unisolvency --n-max 4
//   lochodge infsup      --domain unit_square --kind cubical --k 1 --levels 1,2,3
//   lochodge solve       --config study.json
//
// Flags override the values of --config. With --out, reports go to <out>.csv and
// <out>.json; otherwise the main report is printed.

#include <lochodge/harness.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

struct Flags {
  std::string config;
  std::string domain;
  std::string kind;
  int k = -1;
  std::string variant;
  std::string levels;
  std::string out;
  std::string solution;
  std::string coefficient;
  std::string solver;
};

// "2,3,4" or "2..6".
std::vector<int> parse_levels(const std::string& s) {
  std::vector<int> out;
  if (const auto dots = s.find(".."); dots != std::string::npos) {
    const int a = std::stoi(s.substr(0, dots));
    const int b = std::stoi(s.substr(dots + 2));
    for (int l = a; l <= b; ++l) out.push_back(l);
    return out;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoi(item));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

lochodge::StudyConfig make_config(const Flags& f) {
  using namespace lochodge;
  StudyConfig c = f.config.empty() ? StudyConfig{} : config_from_json(read_file(f.config));
  if (!f.domain.empty()) {
    const auto d = parse_domain(f.domain);
    if (!d) throw std::invalid_argument("unknown domain '" + f.domain + "'");
    c.domain = *d;
  }
  if (!f.kind.empty()) {
    const auto k = parse_kind(f.kind);
    if (!k) throw std::invalid_argument("unknown kind '" + f.kind + "'");
    c.kind = *k;
  }
  if (f.k >= 0) c.k = f.k;
  if (!f.variant.empty()) {
    const auto v = parse_variant(f.variant);
    if (!v) throw std::invalid_argument("unknown variant '" + f.variant + "'");
    c.variant = *v;
  }
  if (!f.levels.empty()) c.levels = parse_levels(f.levels);
  if (!f.out.empty()) c.out = f.out;
  if (!f.solution.empty()) c.solution = f.solution;
  if (!f.coefficient.empty()) c.coefficient_path = f.coefficient;
  if (!f.solver.empty()) {
    if (f.solver == "automatic") c.solver = SolverChoice::automatic;
    else if (f.solver == "bordered_lu") c.solver = SolverChoice::bordered_lu;
    else if (f.solver == "minres") c.solver = SolverChoice::minres;
    else throw std::invalid_argument("unknown solver '" + f.solver + "'");
  }
  validate_config(c);
  return c;
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// Writes <out>.json (and <out>.csv when given) or prints the primary report.
void emit(const std::string& out, const std::string& json, const std::string& csv = {}) {
  if (out.empty()) {
    std::cout << (csv.empty() ? json : csv);
    return;
  }
  write_text(out + ".json", json);
  if (!csv.empty()) write_text(out + ".csv", csv);
  std::cerr << "wrote " << out << (csv.empty() ? ".json" : ".csv and .json") << "\n";
}

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON file mirroring StudyConfig")->check(CLI::ExistingFile);
  cmd->add_option("--domain", f.domain, "unit_interval | unit_square | unit_cube | square_with_hole");
  cmd->add_option("--kind", f.kind, "simplicial | cubical");
  cmd->add_option("--k", f.k, "form degree of u");
  cmd->add_option("--variant", f.variant, "exact | lumped");
  cmd->add_option("--levels", f.levels, "refinement levels, \"2,3,4\" or \"2..6\"");
  cmd->add_option("--out", f.out, "output prefix for <out>.csv and <out>.json");
  cmd->add_option("--solution", f.solution, "manufactured solution: top | gradient");
  cmd->add_option("--coefficient", f.coefficient, "coefficient JSON file");
  cmd->add_option("--solver", f.solver, "automatic | bordered_lu | minres");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed Hodge Laplacian studies with local coderivatives"};
  app.require_subcommand(1);
  app.set_version_flag("--version", lochodge::library_version() + " (" + lochodge::git_commit() + ")");

  Flags flags;
  int n_max = 4;
  int unions = 20;
  auto* convergence = app.add_subcommand("convergence", "manufactured-solution rates, CSV + JSON");
  auto* locality = app.add_subcommand("locality", "far and near perturbations of the lumped coderivative");
  auto* unisolvency = app.add_subcommand("unisolvency", "exact S1plus dimension, determinant and trace checks");
  auto* infsup = app.add_subcommand("infsup", "triple-norm inf-sup constant across levels");
  auto* solve = app.add_subcommand("solve", "one solve on the last level");
  auto* conservation = app.add_subcommand("conservation", "local balance of a k = n solution");
  for (auto* cmd : {convergence, locality, infsup, solve, conservation}) add_common(cmd, flags);
  unisolvency->add_option("--n-max", n_max, "largest dimension (<= 4)")->check(CLI::Range(1, 4));
  unisolvency->add_option("--out", flags.out, "output prefix");
  conservation->add_option("--unions", unions, "random connected cell unions")->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  const auto start = std::chrono::steady_clock::now();
  bool pass = true;
  try {
    using namespace lochodge;
    if (*convergence) {
      const auto rep = run_convergence(make_config(flags));
      emit(rep.config.out, convergence_json(rep), convergence_csv(rep));
      pass = !rep.rates.empty() && rep.final_total_rate() >= kRateThreshold;
    } else if (*locality) {
      const auto s = run_locality(make_config(flags));
      emit(s.config.out, locality_json(s));
      pass = s.far_changed == 0;
    } else if (*unisolvency) {
      const auto s = run_unisolvency(n_max);
      emit(flags.out, unisolvency_json(s), unisolvency_csv(s));
      pass = s.pass();
    } else if (*infsup) {
      const auto s = run_infsup(make_config(flags));
      emit(s.config.out, infsup_json(s));
    } else if (*solve) {
      const auto c = make_config(flags);
      emit(c.out, solve_json(c));
    } else if (*conservation) {
      const auto s = run_conservation(make_config(flags), unions);
      emit(s.config.out, conservation_json(s));
      pass = std::max({s.max_cell_residual, s.domain_residual, s.max_union_residual}) <= 1e-10;
    }
  } catch (const std::exception& e) {
    std::cerr << "lochodge: " << e.what() << "\n";
    return 2;
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  std::cerr << "elapsed " << elapsed.count() << " s\n";
  return pass ? 0 : 1;
}
