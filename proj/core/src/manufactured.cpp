#include <lochodge/manufactured.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lochodge {

namespace {

constexpr double kPi = std::numbers::pi;

// prod_i s_i(pi x_i) with s_i = cos on the axes in `cos_axes` and sin elsewhere.
double product(std::span<const double> x, std::uint32_t cos_axes) {
  double v = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    v *= ((cos_axes >> i) & 1U) ? std::cos(kPi * x[i]) : std::sin(kPi * x[i]);
  return v;
}

// Second derivative d_i d_j of phi = prod sin(pi x).
double phi_second(std::span<const double> x, int i, int j) {
  if (i == j) return -kPi * kPi * product(x, 0);
  return kPi * kPi * product(x, (1U << i) | (1U << j));
}

// Component of dx_{[n] \ i} (0-based i) in Alt^{n-1}.
std::size_t omit_rank(int n, int i) {
  const std::uint32_t full = (1U << n) - 1U;
  return static_cast<std::size_t>(alt_rank(n, full & ~(1U << i)));
}

}  // namespace

ManufacturedSolution top_degree_solution(int n, const std::vector<double>& Kin) {
  if (n < 1 || n > 3) throw std::invalid_argument("top_degree_solution: n must be 1, 2 or 3");
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> K = Kin;
  if (K.empty()) {
    K.assign(un * un, 0.0);
    for (std::size_t i = 0; i < un; ++i) K[i * un + i] = 1.0;
  }
  if (K.size() != un * un) throw std::invalid_argument("top_degree_solution: K must be n x n");
  ManufacturedSolution s;
  s.id = "top";
  s.n = n;
  s.k = n;
  s.boundary_note = "phi = prod sin(pi x_i) vanishes on the boundary, so tr *u = 0 holds";
  // d*u in Alt^{n-1} coefficients (component order of Alt^{n-1}).
  auto dstar = [n](std::span<const double> x) {
    std::vector<double> c(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
      const double sign = (i % 2 == 0) ? -1.0 : 1.0;  // (-1)^(i+1) with 1-based index i+1
      c[omit_rank(n, i)] = sign * kPi * product(x, 1U << i);
    }
    return c;
  };
  s.u = [n](std::span<const double> x) { return AltForm<double>(n, n, {product(x, 0)}); };
  s.du = [n](std::span<const double>) { return AltForm<double>(n, n); };
  s.sigma = [n, K, dstar](std::span<const double> x) {
    const auto c = dstar(x);
    const auto un = static_cast<std::size_t>(n);
    std::vector<double> out(un, 0.0);
    for (std::size_t a = 0; a < un; ++a)
      for (std::size_t b = 0; b < un; ++b) out[a] += K[a * un + b] * c[b];
    return AltForm<double>(n, n - 1, out);
  };
  // f = sum_{i,j} (-1)^(i+j+1) K_{r(i) r(j)} d_i d_j phi (0-based i, j).
  s.f = [n, K](std::span<const double> x) {
    const auto un = static_cast<std::size_t>(n);
    double v = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double sign = ((i + j) % 2 == 0) ? -1.0 : 1.0;
        v += sign * K[omit_rank(n, i) * un + omit_rank(n, j)] * phi_second(x, i, j);
      }
    return AltForm<double>(n, n, {v});
  };
  s.dsigma = s.f;
  return s;
}

ManufacturedSolution gradient_solution(int n, double c) {
  if (n < 2 || n > 3) throw std::invalid_argument("gradient_solution: n must be 2 or 3");
  if (!(c > 0.0)) throw std::invalid_argument("gradient_solution: coefficient must be positive");
  const std::uint32_t all = (1U << n) - 1U;
  ManufacturedSolution s;
  s.id = "gradient";
  s.n = n;
  s.k = 1;
  s.boundary_note = "u = grad p with d_i p = 0 on x_i in {0,1}, so u.nu = 0; du = 0";
  auto grad = [n, all](std::span<const double> x) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = -kPi * product(x, all & ~(1U << i));
    return g;
  };
  const double lap = n * kPi * kPi;
  s.u = [n, grad](std::span<const double> x) { return AltForm<double>(n, 1, grad(x)); };
  s.du = [n](std::span<const double>) { return AltForm<double>(n, 2); };
  s.sigma = [n, all, c, lap](std::span<const double> x) { return AltForm<double>(n, 0, {c * lap * product(x, all)}); };
  s.f = [n, c, lap, grad](std::span<const double> x) {
    auto g = grad(x);
    for (auto& v : g) v *= c * lap;
    return AltForm<double>(n, 1, g);
  };
  s.dsigma = s.f;
  return s;
}

std::optional<ManufacturedSolution> manufactured_by_id(std::string_view id, int n) {
  if (id == "top") return top_degree_solution(n);
  if (id == "gradient") return gradient_solution(n);
  return std::nullopt;
}

}  // namespace lochodge
