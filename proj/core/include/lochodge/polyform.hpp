#pragma once

// Differential forms with polynomial coefficients, u = sum_sigma u_sigma dx_sigma.
//
// Everything symbolic (Koszul complex identities, the cubical shape spaces,
// unisolvency) runs on PolyForm<Rational>; finite element evaluation converts
// to PolyForm<double> once per reference element.

#include <lochodge/alt_algebra.hpp>
#include <lochodge/polynomial.hpp>

#include <span>
#include <stdexcept>
#include <vector>

namespace lochodge {

enum class ReferenceCell { simplex, cube };

template <class Scalar>
class PolyForm {
 public:
  PolyForm(int n, int k) : n_(n), k_(k), coeffs_(static_cast<std::size_t>(binomial(n, k)), Polynomial<Scalar>(n)) {
    if (n < 0 || n > kMaxPolyVars || k < 0 || k > n) throw std::invalid_argument("PolyForm: need 0 <= k <= n <= 4");
  }

  /// p dx_sigma.
  static PolyForm monomial_form(int n, std::uint32_t sigma_mask, Polynomial<Scalar> p) {
    PolyForm u(n, popcount(sigma_mask));
    u.coeffs_[static_cast<std::size_t>(alt_rank(n, sigma_mask))] = std::move(p);
    return u;
  }
  static PolyForm constant(const AltForm<Scalar>& a) {
    PolyForm u(a.dim(), a.degree());
    for (std::size_t r = 0; r < a.size(); ++r) u.coeffs_[r] = Polynomial<Scalar>::constant(a.dim(), a[r]);
    return u;
  }

  int dim() const { return n_; }
  int degree() const { return k_; }
  std::size_t size() const { return coeffs_.size(); }
  const Polynomial<Scalar>& operator[](std::size_t r) const { return coeffs_[r]; }
  Polynomial<Scalar>& operator[](std::size_t r) { return coeffs_[r]; }

  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (!c.is_zero()) return false;
    return true;
  }

  PolyForm& operator+=(const PolyForm& o) {
    check_same(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  PolyForm& operator-=(const PolyForm& o) {
    check_same(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  PolyForm& operator*=(const Scalar& s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  friend PolyForm operator+(PolyForm a, const PolyForm& b) { return a += b; }
  friend PolyForm operator-(PolyForm a, const PolyForm& b) { return a -= b; }
  friend PolyForm operator*(const Scalar& s, PolyForm a) { return a *= s; }
  friend bool operator==(const PolyForm& a, const PolyForm& b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.coeffs_ == b.coeffs_;
  }

  /// Multiply every coefficient by a scalar polynomial.
  PolyForm times(const Polynomial<Scalar>& p) const {
    PolyForm out(n_, k_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] = coeffs_[i] * p;
    return out;
  }

  template <class T>
  AltForm<T> evaluate(std::span<const T> x) const {
    AltForm<T> a(n_, k_);
    for (std::size_t r = 0; r < coeffs_.size(); ++r) a[r] = coeffs_[r].template evaluate<T>(x);
    return a;
  }

  /// Largest per-variable degree over all coefficients.
  int max_variable_degree() const {
    int d = 0;
    for (const auto& c : coeffs_)
      for (int i = 0; i < n_; ++i) d = std::max(d, c.degree_in(i));
    return d;
  }

 private:
  void check_same(const PolyForm& o) const {
    if (o.n_ != n_ || o.k_ != k_) throw std::invalid_argument("PolyForm: (n, k) mismatch");
  }

  int n_;
  int k_;
  std::vector<Polynomial<Scalar>> coeffs_;
};

/// Pointwise wedge product of two polynomial forms.
template <class Scalar>
PolyForm<Scalar> wedge(const PolyForm<Scalar>& a, const PolyForm<Scalar>& b) {
  const int n = a.dim();
  if (b.dim() != n || a.degree() + b.degree() > n) throw std::invalid_argument("wedge: degree exceeds dimension");
  PolyForm<Scalar> out(n, a.degree() + b.degree());
  const auto& ma = alt_masks(n, a.degree());
  const auto& mb = alt_masks(n, b.degree());
  for (std::size_t i = 0; i < ma.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < mb.size(); ++j) {
      if ((ma[i] & mb[j]) != 0U || b[j].is_zero()) continue;
      const auto r = static_cast<std::size_t>(alt_rank(n, ma[i] | mb[j]));
      if (merge_sign(ma[i], mb[j]) > 0)
        out[r] += a[i] * b[j];
      else
        out[r] -= a[i] * b[j];
    }
  }
  return out;
}

/// du = sum_sigma sum_i d_i u_sigma dx_i ^ dx_sigma. An n-form has no representable derivative;
/// callers check degree() < dim() (the derivative is zero anyway).
template <class Scalar>
PolyForm<Scalar> exterior_derivative(const PolyForm<Scalar>& u) {
  const int n = u.dim();
  const int k = u.degree();
  if (k >= n) throw std::invalid_argument("exterior_derivative: the derivative of an n-form is identically zero");
  PolyForm<Scalar> out(n, k + 1);
  const auto& masks = alt_masks(n, k);
  for (std::size_t r = 0; r < masks.size(); ++r) {
    if (u[r].is_zero()) continue;
    for (int i = 0; i < n; ++i) {
      if ((masks[r] >> i) & 1U) continue;
      auto di = u[r].derivative(i);
      if (di.is_zero()) continue;
      const auto t = static_cast<std::size_t>(alt_rank(n, masks[r] | (1U << i)));
      if (merge_sign(1U << i, masks[r]) > 0)
        out[t] += di;
      else
        out[t] -= di;
    }
  }
  return out;
}

/// u ⌟ v for a constant vector v.
template <class Scalar>
PolyForm<Scalar> contract_constant(const PolyForm<Scalar>& u, std::span<const Scalar> v) {
  const int n = u.dim();
  if (u.degree() < 1) throw std::invalid_argument("contract: degree-0 form");
  PolyForm<Scalar> out(n, u.degree() - 1);
  const auto& masks = alt_masks(n, u.degree());
  for (std::size_t r = 0; r < masks.size(); ++r) {
    if (u[r].is_zero()) continue;
    int pos = 0;
    for (int i = 0; i < n; ++i) {
      if (!((masks[r] >> i) & 1U)) continue;
      const auto t = static_cast<std::size_t>(alt_rank(n, masks[r] & ~(1U << i)));
      const Scalar vi = v[static_cast<std::size_t>(i)];
      auto term = vi * u[r];
      if (pos % 2 == 0)
        out[t] += term;
      else
        out[t] -= term;
      ++pos;
    }
  }
  return out;
}

/// Koszul operator (kappa_b u)_x = u_x ⌟ (x - b). An empty base means the origin.
template <class Scalar>
PolyForm<Scalar> koszul(const PolyForm<Scalar>& u, std::span<const Scalar> base = {}) {
  const int n = u.dim();
  if (u.degree() < 1) throw std::invalid_argument("koszul: degree-0 form");
  if (!base.empty() && static_cast<int>(base.size()) != n) throw std::invalid_argument("koszul: base point dimension");
  PolyForm<Scalar> out(n, u.degree() - 1);
  const auto& masks = alt_masks(n, u.degree());
  for (std::size_t r = 0; r < masks.size(); ++r) {
    if (u[r].is_zero()) continue;
    int pos = 0;
    for (int i = 0; i < n; ++i) {
      if (!((masks[r] >> i) & 1U)) continue;
      auto xi = Polynomial<Scalar>::variable(n, i);
      if (!base.empty()) xi -= Polynomial<Scalar>::constant(n, base[static_cast<std::size_t>(i)]);
      const auto t = static_cast<std::size_t>(alt_rank(n, masks[r] & ~(1U << i)));
      auto term = u[r] * xi;
      if (pos % 2 == 0)
        out[t] += term;
      else
        out[t] -= term;
      ++pos;
    }
  }
  return out;
}

/// Pullback of u under the affine map s -> A s + b from R^m to R^n
/// (A given row-major, n x m).
template <class Scalar>
PolyForm<Scalar> pullback(const PolyForm<Scalar>& u, std::span<const Scalar> A, int m, std::span<const Scalar> b) {
  const int n = u.dim();
  const int k = u.degree();
  if (static_cast<int>(A.size()) != n * m || static_cast<int>(b.size()) != n)
    throw std::invalid_argument("pullback: map dimensions");
  if (k > m) throw std::invalid_argument("pullback: form degree exceeds target dimension");
  std::vector<Polynomial<Scalar>> subs;
  subs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto p = Polynomial<Scalar>::constant(m, b[static_cast<std::size_t>(i)]);
    for (int j = 0; j < m; ++j) {
      const Scalar& a = A[static_cast<std::size_t>(i * m + j)];
      if (!is_zero(a)) p += a * Polynomial<Scalar>::variable(m, j);
    }
    subs.push_back(std::move(p));
  }
  const auto mat = alt_pullback_matrix<Scalar>(A, n, m, k);
  const std::size_t cols = u.size();
  PolyForm<Scalar> out(m, k);
  for (std::size_t s = 0; s < cols; ++s) {
    if (u[s].is_zero()) continue;
    const auto composed = u[s].compose(subs);
    for (std::size_t t = 0; t < out.size(); ++t) {
      const Scalar& c = mat[t * cols + s];
      if (!is_zero(c)) out[t] += c * composed;
    }
  }
  return out;
}

/// phi^* u for phi(x) = D x + b with D diagonal and invertible.
template <class Scalar>
PolyForm<Scalar> pullback_affine(const PolyForm<Scalar>& u, std::span<const Scalar> diagonal, std::span<const Scalar> b) {
  const int n = u.dim();
  if (static_cast<int>(diagonal.size()) != n) throw std::invalid_argument("pullback_affine: diagonal length");
  std::vector<Scalar> A(static_cast<std::size_t>(n * n), Scalar(0));
  for (int i = 0; i < n; ++i) {
    if (is_zero(diagonal[static_cast<std::size_t>(i)])) throw std::invalid_argument("pullback_affine: singular scaling");
    A[static_cast<std::size_t>(i * n + i)] = diagonal[static_cast<std::size_t>(i)];
  }
  return pullback<Scalar>(u, A, n, b);
}

template <class Scalar>
PolyForm<double> to_double(const PolyForm<Scalar>& u) {
  PolyForm<double> out(u.dim(), u.degree());
  for (std::size_t r = 0; r < u.size(); ++r) out[r] = to_double(u[r]);
  return out;
}

/// An m-dimensional affine face x = base + frame * s of a reference cell in R^n,
/// with intrinsic coordinates s ranging over the unit m-simplex or unit m-cube.
struct AffineFace {
  int n = 0;
  int m = 0;
  std::vector<Rational> base;   // n
  std::vector<Rational> frame;  // n x m, row-major
  ReferenceCell intrinsic = ReferenceCell::cube;

  /// Face of [0,1]^n keeping the axes in free_mask; the other axes are fixed to
  /// the corresponding bit of fixed_bits (0 or 1).
  static AffineFace box(int n, std::uint32_t free_mask, std::uint32_t fixed_bits);
  /// Axis-aligned hyperplane {x_axis = value} (0-based axis).
  static AffineFace hyperplane(int n, int axis, const Rational& value);
  /// Simplex spanned by the given points (each of length n), oriented in the given order.
  static AffineFace simplex(int n, const std::vector<std::vector<Rational>>& vertices);
};

/// tr_f u in intrinsic coordinates of f.
PolyForm<Rational> trace(const PolyForm<Rational>& u, const AffineFace& f);

/// Koszul operator of the face acting on forms in intrinsic coordinates, centred at x^f = base.
/// Since x - x^f = frame * s on the face, this is the plain Koszul operator in s, and
///   tr_f(kappa u) = kappa_f(tr_f u) + tr_f(u ⌟ x^f).
PolyForm<Rational> koszul_face(const PolyForm<Rational>& v, const AffineFace& f);

/// Integral of a polynomial over the unit simplex or unit cube in its variables.
Rational integrate(const Polynomial<Rational>& p, ReferenceCell cell);

/// Integral of <u_x, v_x>_Alt over the reference cell.
Rational integrate_exact(const PolyForm<Rational>& u, const PolyForm<Rational>& v, ReferenceCell cell);

/// Integral of the single coefficient of a top-degree form over the reference cell.
Rational integrate_top(const PolyForm<Rational>& u, ReferenceCell cell);

}  // namespace lochodge
