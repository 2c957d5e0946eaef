#pragma once

// Exact (rational) checks of the form calculus and of the cubical S1plus spaces.
// Each check reports one (name, n, k) row; all arithmetic is exact, so a row
// either passes or exhibits a counterexample.

#include <string>
#include <vector>

namespace lochodge {

struct CheckRow {
  std::string name;
  int n = 0;
  int k = 0;
  bool pass = false;
  std::string detail;
};

/// d d = 0, kappa kappa = 0, the homotopy formula on homogeneous forms of degree r <= 3,
/// and the antiderivation laws of d (polynomial forms) and of contraction (Alt^k),
/// with `samples` random forms per (n, k), n <= n_max <= 4.
std::vector<CheckRow> algebra_suite(int n_max = 4, int samples = 100, unsigned seed = 1);

/// S1plus theorem suite for every (n, k), n <= n_max <= 4:
///   dimension 2^n C(n,k) with independent basis, unisolvency determinant,
///   Q1 = Q1minus (+) BLambda, properties (a)-(d) of d kappa on BLambda, the inclusion
///   d BLambda^k in BLambda^{k+1} and in d kappa BLambda^{k+1}, invariance under dilation
///   plus translation, facet trace inclusion, k-face traces equal to Q1 Lambda^k(f),
///   and d S1plus = d Q1minus.
std::vector<CheckRow> s1plus_suite(int n_max = 4);

bool all_pass(const std::vector<CheckRow>& rows);

}  // namespace lochodge
