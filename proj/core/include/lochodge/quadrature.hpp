#pragma once

// Quadrature rules on reference cells. Points are stored consecutively
// (dim entries per point); weights integrate over the reference cell itself,
// so they sum to 1 on the cube and to 1/n! on the simplex.

#include <lochodge/polyform.hpp>

#include <vector>

namespace lochodge {

struct QuadratureRule {
  int dim = 0;
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  std::span<const double> point(std::size_t q) const {
    return {points.data() + q * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
};

/// m-point Gauss rule for int_0^1 f(x) (1 - x)^alpha dx, exact for degree 2m - 1.
QuadratureRule gauss_jacobi_01(int m, double alpha = 0.0);

/// Tensor Gauss-Legendre on [0,1]^n with m points per axis.
QuadratureRule cube_rule(int n, int m);

/// Collapsed (Duffy) product rule on the unit simplex, exact for total degree 2m - 1.
QuadratureRule simplex_rule(int n, int m);

QuadratureRule reference_rule(ReferenceCell cell, int n, int m);

/// Vertex rule: weight |T|/(n+1) at each simplex vertex, 2^-n |T| at each cube vertex,
/// with vertices in reference order.
QuadratureRule vertex_rule(ReferenceCell cell, int n);

}  // namespace lochodge
