#include <lochodge/quadrature.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace lochodge {

QuadratureRule gauss_jacobi_01(int m, double alpha) {
  if (m < 1) throw std::invalid_argument("gauss_jacobi_01: need at least one point");
  // Golub-Welsch on the Jacobi matrix of P^(alpha, 0) on [-1, 1].
  const double a = alpha;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    const double s = 2.0 * k + a;
    J(k, k) = (k == 0) ? -a / (a + 2.0) : -(a * a) / (s * (s + 2.0));
    if (k + 1 < m) {
      const double kk = k + 1.0;
      const double t = 2.0 * kk + a;
      const double b = std::sqrt(4.0 * kk * (kk + a) * kk * (kk + a) / (t * t * (t + 1.0) * (t - 1.0)));
      J(k, k + 1) = b;
      J(k + 1, k) = b;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  const double mu0 = std::pow(2.0, a + 1.0) / (a + 1.0);
  QuadratureRule r;
  r.dim = 1;
  for (int i = 0; i < m; ++i) {
    const double t = eig.eigenvalues()(i);
    const double v0 = eig.eigenvectors()(0, i);
    r.points.push_back(0.5 * (1.0 + t));
    r.weights.push_back(mu0 * v0 * v0 * std::pow(2.0, -a - 1.0));
  }
  return r;
}

QuadratureRule cube_rule(int n, int m) {
  const auto g = gauss_jacobi_01(m);
  QuadratureRule r;
  r.dim = n;
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(m);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    double w = 1.0;
    for (int a = 0; a < n; ++a) {
      const std::size_t q = rest % static_cast<std::size_t>(m);
      rest /= static_cast<std::size_t>(m);
      r.points.push_back(g.points[q]);
      w *= g.weights[q];
    }
    r.weights.push_back(w);
  }
  return r;
}

QuadratureRule simplex_rule(int n, int m) {
  // x_1 = t_1, x_2 = (1 - t_1) t_2, ...; the Jacobian (1-t_1)^(n-1) (1-t_2)^(n-2) ...
  // is absorbed by Gauss-Jacobi weights.
  std::vector<QuadratureRule> axes;
  for (int i = 0; i < n; ++i) axes.push_back(gauss_jacobi_01(m, static_cast<double>(n - 1 - i)));
  QuadratureRule r;
  r.dim = n;
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(m);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    double w = 1.0;
    double remaining = 1.0;
    for (int a = 0; a < n; ++a) {
      const std::size_t q = rest % static_cast<std::size_t>(m);
      rest /= static_cast<std::size_t>(m);
      const double t = axes[static_cast<std::size_t>(a)].points[q];
      r.points.push_back(remaining * t);
      remaining *= 1.0 - t;
      w *= axes[static_cast<std::size_t>(a)].weights[q];
    }
    r.weights.push_back(w);
  }
  if (n == 0) {
    r.weights = {1.0};
  }
  return r;
}

QuadratureRule reference_rule(ReferenceCell cell, int n, int m) {
  return cell == ReferenceCell::cube ? cube_rule(n, m) : simplex_rule(n, m);
}

QuadratureRule vertex_rule(ReferenceCell cell, int n) {
  QuadratureRule r;
  r.dim = n;
  if (cell == ReferenceCell::simplex) {
    double volume = 1.0;
    for (int i = 2; i <= n; ++i) volume /= i;
    for (int v = 0; v <= n; ++v) {
      for (int i = 0; i < n; ++i) r.points.push_back(v == i + 1 ? 1.0 : 0.0);
      r.weights.push_back(volume / (n + 1));
    }
  } else {
    for (int v = 0; v < (1 << n); ++v) {
      for (int i = 0; i < n; ++i) r.points.push_back(((v >> i) & 1) ? 1.0 : 0.0);
      r.weights.push_back(std::ldexp(1.0, -n));
    }
  }
  return r;
}

}  // namespace lochodge
