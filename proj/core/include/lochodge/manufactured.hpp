#pragma once

// Closed-form solutions of the mixed Hodge Laplacian on [0,1]^n with natural
// boundary conditions, sigma = K d*u and f = d sigma + d* du.
//
//   top (k = n):  u = phi vol,  phi = prod_i sin(pi x_i).
//     Since phi vanishes on the boundary, <u, d tau> = <d*u, tau> with
//     (d*u) = sum_i (-1)^i d_i phi dx_{[n] \ i}  (1-based i), and
//     f = d sigma = sum_{i,j} (-1)^(i-1+j) K_ij d_i d_j phi vol.  For K = I, f = n pi^2 u.
//   gradient (k = 1):  p = prod_i cos(pi x_i),  u = grad p,  du = 0.
//     u.nu = 0 on the boundary, so the natural conditions hold; d*u = -lap p = n pi^2 p,
//     sigma = c n pi^2 p for K = c, and f = d sigma = c n pi^2 grad p.

#include <lochodge/fe_space.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lochodge {

struct ManufacturedSolution {
  std::string id;
  int n = 0;
  int k = 0;
  FormField sigma;   // (k-1)-form
  FormField dsigma;  // k-form
  FormField u;       // k-form
  FormField du;      // (k+1)-form (zero form when k == n)
  FormField f;       // k-form
  std::string boundary_note;
};

/// k = n case with a constant SPD matrix on Alt^{n-1} coefficients (identity if empty).
ManufacturedSolution top_degree_solution(int n, const std::vector<double>& K = {});
/// k = 1 case with a scalar coefficient c > 0 on Alt^0.
ManufacturedSolution gradient_solution(int n, double c = 1.0);

/// Ids "top" and "gradient"; the k of the pair follows from the id.
std::optional<ManufacturedSolution> manufactured_by_id(std::string_view id, int n);

}  // namespace lochodge
