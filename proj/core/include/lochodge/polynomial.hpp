#pragma once

#include <lochodge/rational.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace lochodge {

inline constexpr int kMaxPolyVars = 4;

/// Exponent vector alpha of x^alpha; unused trailing slots stay zero.
using Exponent = std::array<std::uint8_t, kMaxPolyVars>;

inline int total_degree(const Exponent& e) {
  int d = 0;
  for (auto a : e) d += a;
  return d;
}

/// Sparse multivariate polynomial. Zero coefficients are never stored.
template <class Scalar>
class Polynomial {
 public:
  using Terms = std::map<Exponent, Scalar>;

  explicit Polynomial(int nvars = 0) : nvars_(nvars) {
    if (nvars < 0 || nvars > kMaxPolyVars) throw std::invalid_argument("Polynomial: too many variables");
  }

  static Polynomial constant(int nvars, const Scalar& c) {
    Polynomial p(nvars);
    p.add_term(Exponent{}, c);
    return p;
  }
  /// x_i, 0-based.
  static Polynomial variable(int nvars, int i) {
    Exponent e{};
    e[static_cast<std::size_t>(i)] = 1;
    return monomial(nvars, e, Scalar(1));
  }
  static Polynomial monomial(int nvars, const Exponent& e, const Scalar& c) {
    Polynomial p(nvars);
    p.add_term(e, c);
    return p;
  }

  int num_vars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponent& e, const Scalar& c) {
    if (lochodge::is_zero(c)) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (lochodge::is_zero(it->second)) terms_.erase(it);
    }
  }

  Scalar coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  int degree_in(int i) const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[static_cast<std::size_t>(i)]));
    return d;
  }
  int total_degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, lochodge::total_degree(e));
    return d;
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, Scalar(-c));
    return *this;
  }
  Polynomial& operator*=(const Scalar& s) {
    if (lochodge::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Scalar& s, Polynomial a) { return a *= s; }
  friend Polynomial operator-(Polynomial a) { return a *= Scalar(-1); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out(std::max(a.nvars_, b.nvars_));
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponent e{};
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<std::uint8_t>(ea[i] + eb[i]);
        out.add_term(e, Scalar(ca * cb));
      }
    return out;
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  /// d/dx_i, 0-based.
  Polynomial derivative(int i) const {
    Polynomial out(nvars_);
    const auto ii = static_cast<std::size_t>(i);
    for (const auto& [e, c] : terms_) {
      if (e[ii] == 0) continue;
      Exponent f = e;
      f[ii] = static_cast<std::uint8_t>(f[ii] - 1);
      out.add_term(f, Scalar(c * static_cast<long>(e[ii])));
    }
    return out;
  }

  template <class T>
  T evaluate(std::span<const T> x) const {
    T s(0);
    for (const auto& [e, c] : terms_) {
      T t = convert<T>(c);
      for (int i = 0; i < nvars_; ++i)
        for (int p = 0; p < e[static_cast<std::size_t>(i)]; ++p) t *= x[static_cast<std::size_t>(i)];
      s += t;
    }
    return s;
  }

  /// p(subs_1(s), ..., subs_n(s)); the substitutions share one variable count.
  Polynomial compose(std::span<const Polynomial> subs) const {
    if (static_cast<int>(subs.size()) != nvars_) throw std::invalid_argument("Polynomial::compose: arity mismatch");
    const int m = subs.empty() ? 0 : subs[0].num_vars();
    std::vector<std::vector<Polynomial>> powers(static_cast<std::size_t>(nvars_));
    Polynomial out(m);
    for (const auto& [e, c] : terms_) {
      Polynomial t = Polynomial::constant(m, c);
      for (int i = 0; i < nvars_; ++i) {
        const int p = e[static_cast<std::size_t>(i)];
        if (p == 0) continue;
        auto& pw = powers[static_cast<std::size_t>(i)];
        if (pw.empty()) pw.push_back(Polynomial::constant(m, Scalar(1)));
        while (static_cast<int>(pw.size()) <= p) pw.push_back(pw.back() * subs[static_cast<std::size_t>(i)]);
        t = t * pw[static_cast<std::size_t>(p)];
      }
      out += t;
    }
    return out;
  }

  /// Same coefficients reinterpreted with a different variable count (must not drop used variables).
  Polynomial with_num_vars(int nvars) const {
    Polynomial out(nvars);
    for (const auto& [e, c] : terms_) {
      for (int i = nvars; i < kMaxPolyVars; ++i)
        if (e[static_cast<std::size_t>(i)] != 0) throw std::invalid_argument("Polynomial::with_num_vars: variable in use");
      out.add_term(e, c);
    }
    return out;
  }

 private:
  template <class T>
  static T convert(const Scalar& c) {
    if constexpr (std::is_same_v<T, Scalar>)
      return c;
    else
      return static_cast<T>(lochodge::to_double(c));
  }

  int nvars_;
  Terms terms_;
};

template <class Scalar>
Polynomial<double> to_double(const Polynomial<Scalar>& p) {
  Polynomial<double> out(p.num_vars());
  for (const auto& [e, c] : p.terms()) out.add_term(e, lochodge::to_double(c));
  return out;
}

}  // namespace lochodge
