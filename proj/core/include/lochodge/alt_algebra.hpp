#pragma once

// Constant alternating k-forms on R^n.
//
// A k-form is stored as its coefficient vector over the basis {dx_sigma},
// sigma running over the strictly increasing index sequences of length k in
// lexicographic order. That ordering is shared by every other module, so a
// coefficient position means the same thing everywhere in the library.

#include <lochodge/rational.hpp>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace lochodge {

inline constexpr int kMaxAltDim = 8;

int binomial(int n, int k);

/// Number of set bits.
inline int popcount(std::uint32_t mask) { return __builtin_popcount(mask); }

/// A strictly increasing index sequence sigma_1 < ... < sigma_k in 1..n.
/// Internally a bit mask (bit i-1 set <=> i in sigma).
class AltIndex {
 public:
  AltIndex(int n, std::uint32_t mask);
  static AltIndex from_entries(int n, std::span<const int> entries);

  int dim() const { return n_; }
  int degree() const { return popcount(mask_); }
  std::uint32_t mask() const { return mask_; }

  /// 1-based entries in increasing order.
  std::vector<int> entries() const;
  AltIndex complement() const;
  bool contains(int i) const { return (mask_ >> (i - 1)) & 1U; }

  /// Position in alt_index_set(n, k).
  int rank() const;

  friend bool operator==(const AltIndex&, const AltIndex&) = default;

 private:
  int n_;
  std::uint32_t mask_;
};

/// Sigma(k) in the global lexicographic order.
std::vector<AltIndex> alt_index_set(int n, int k);

/// Masks of alt_index_set(n, k) in order. Cached, valid for the program lifetime.
const std::vector<std::uint32_t>& alt_masks(int n, int k);

/// Rank of a mask among the masks of the same popcount.
int alt_rank(int n, std::uint32_t mask);

/// Sign of the permutation sorting the concatenation (a, b) of two disjoint
/// increasing sequences, i.e. dx_a ^ dx_b = sign * dx_{a u b}.
int merge_sign(std::uint32_t a, std::uint32_t b);

template <class Scalar>
class AltForm {
 public:
  AltForm(int n, int k) : n_(n), k_(k), coeffs_(static_cast<std::size_t>(binomial(n, k)), Scalar(0)) {
    if (n < 0 || n > kMaxAltDim || k < 0 || k > n) throw std::invalid_argument("AltForm: invalid (n, k)");
  }
  AltForm(int n, int k, std::vector<Scalar> coeffs) : AltForm(n, k) {
    if (coeffs.size() != coeffs_.size()) throw std::invalid_argument("AltForm: coefficient count mismatch");
    coeffs_ = std::move(coeffs);
  }

  /// dx_sigma for a given index.
  static AltForm basis(const AltIndex& s) {
    AltForm a(s.dim(), s.degree());
    a.coeffs_[static_cast<std::size_t>(s.rank())] = Scalar(1);
    return a;
  }
  /// dx_i, i 1-based.
  static AltForm dx(int n, int i) { return basis(AltIndex(n, 1U << (i - 1))); }

  int dim() const { return n_; }
  int degree() const { return k_; }
  std::size_t size() const { return coeffs_.size(); }

  const Scalar& operator[](std::size_t r) const { return coeffs_[r]; }
  Scalar& operator[](std::size_t r) { return coeffs_[r]; }
  const Scalar& coeff(const AltIndex& s) const { return coeffs_[static_cast<std::size_t>(s.rank())]; }
  const std::vector<Scalar>& coefficients() const { return coeffs_; }

  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (!lochodge::is_zero(c)) return false;
    return true;
  }

  AltForm& operator+=(const AltForm& o) {
    check_same(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  AltForm& operator-=(const AltForm& o) {
    check_same(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  AltForm& operator*=(const Scalar& s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  friend AltForm operator+(AltForm a, const AltForm& b) { return a += b; }
  friend AltForm operator-(AltForm a, const AltForm& b) { return a -= b; }
  friend AltForm operator*(const Scalar& s, AltForm a) { return a *= s; }
  friend AltForm operator-(AltForm a) { return a *= Scalar(-1); }
  friend bool operator==(const AltForm& a, const AltForm& b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.coeffs_ == b.coeffs_;
  }

 private:
  void check_same(const AltForm& o) const {
    if (o.n_ != n_ || o.k_ != k_) throw std::invalid_argument("AltForm: (n, k) mismatch");
  }

  int n_;
  int k_;
  std::vector<Scalar> coeffs_;
};

template <class Scalar>
AltForm<Scalar> wedge(const AltForm<Scalar>& a, const AltForm<Scalar>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("wedge: dimension mismatch");
  const int n = a.dim();
  if (a.degree() + b.degree() > n) throw std::invalid_argument("wedge: degree exceeds dimension");
  AltForm<Scalar> out(n, a.degree() + b.degree());
  const auto& ma = alt_masks(n, a.degree());
  const auto& mb = alt_masks(n, b.degree());
  for (std::size_t i = 0; i < ma.size(); ++i) {
    if (is_zero(a[i])) continue;
    for (std::size_t j = 0; j < mb.size(); ++j) {
      if ((ma[i] & mb[j]) != 0U || is_zero(b[j])) continue;
      const auto r = static_cast<std::size_t>(alt_rank(n, ma[i] | mb[j]));
      const Scalar term = a[i] * b[j];
      if (merge_sign(ma[i], mb[j]) > 0)
        out[r] += term;
      else
        out[r] -= term;
    }
  }
  return out;
}

template <class Scalar>
Scalar alt_inner(const AltForm<Scalar>& a, const AltForm<Scalar>& b) {
  if (a.dim() != b.dim() || a.degree() != b.degree()) throw std::invalid_argument("alt_inner: degree mismatch");
  Scalar s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Interior product a ⌟ v: v is inserted into the first slot.
///   dx_sigma ⌟ v = sum_i (-1)^(i+1) v_{sigma_i} dx_{sigma without sigma_i}
template <class Scalar>
AltForm<Scalar> contract(const AltForm<Scalar>& a, std::span<const Scalar> v) {
  const int n = a.dim();
  if (a.degree() < 1) throw std::invalid_argument("contract: degree-0 form");
  if (static_cast<int>(v.size()) != n) throw std::invalid_argument("contract: vector length mismatch");
  AltForm<Scalar> out(n, a.degree() - 1);
  const auto& masks = alt_masks(n, a.degree());
  for (std::size_t r = 0; r < masks.size(); ++r) {
    if (is_zero(a[r])) continue;
    int pos = 0;
    for (int i = 0; i < n; ++i) {
      if (!((masks[r] >> i) & 1U)) continue;
      const auto t = static_cast<std::size_t>(alt_rank(n, masks[r] & ~(1U << i)));
      const Scalar term = a[r] * v[static_cast<std::size_t>(i)];
      if (pos % 2 == 0)
        out[t] += term;
      else
        out[t] -= term;
      ++pos;
    }
  }
  return out;
}

/// Determinant of a small dense square matrix given row-major.
template <class Scalar>
Scalar small_det(std::vector<Scalar> m, int size) {
  Scalar det(1);
  for (int c = 0; c < size; ++c) {
    int piv = -1;
    for (int r = c; r < size; ++r)
      if (!is_zero(m[static_cast<std::size_t>(r * size + c)])) {
        piv = r;
        break;
      }
    if (piv < 0) return Scalar(0);
    if (piv != c) {
      for (int j = 0; j < size; ++j)
        std::swap(m[static_cast<std::size_t>(piv * size + j)], m[static_cast<std::size_t>(c * size + j)]);
      det = -det;
    }
    const Scalar p = m[static_cast<std::size_t>(c * size + c)];
    det *= p;
    for (int r = c + 1; r < size; ++r) {
      const Scalar f = m[static_cast<std::size_t>(r * size + c)] / p;
      if (is_zero(f)) continue;
      for (int j = c; j < size; ++j)
        m[static_cast<std::size_t>(r * size + j)] -= f * m[static_cast<std::size_t>(c * size + j)];
    }
  }
  return det;
}

/// a(t_1, ..., t_k) where vectors holds the k vectors consecutively (k*n entries).
template <class Scalar>
Scalar alt_apply(const AltForm<Scalar>& a, std::span<const Scalar> vectors) {
  const int n = a.dim();
  const int k = a.degree();
  if (static_cast<int>(vectors.size()) != n * k) throw std::invalid_argument("alt_apply: expected k vectors of length n");
  if (k == 0) return a[0];
  const auto& masks = alt_masks(n, k);
  Scalar total(0);
  std::vector<Scalar> minor(static_cast<std::size_t>(k * k));
  for (std::size_t r = 0; r < masks.size(); ++r) {
    if (is_zero(a[r])) continue;
    int row = 0;
    for (int i = 0; i < n; ++i) {
      if (!((masks[r] >> i) & 1U)) continue;
      for (int j = 0; j < k; ++j)
        minor[static_cast<std::size_t>(row * k + j)] = vectors[static_cast<std::size_t>(j * n + i)];
      ++row;
    }
    total += a[r] * small_det(minor, k);
  }
  return total;
}

/// Coefficient matrix (row-major, C(m,k) x C(n,k)) of the pullback L^* acting on
/// Alt^k(R^n) -> Alt^k(R^m) for a linear map L : R^m -> R^n given row-major (n x m).
///   (L^* a)_tau = sum_sigma a_sigma det L[sigma, tau]
template <class Scalar>
std::vector<Scalar> alt_pullback_matrix(std::span<const Scalar> linear, int n, int m, int k) {
  const auto& rows = alt_masks(m, k);
  const auto& cols = alt_masks(n, k);
  std::vector<Scalar> out(rows.size() * cols.size(), Scalar(0));
  std::vector<Scalar> minor(static_cast<std::size_t>(k * k));
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t s = 0; s < cols.size(); ++s) {
      if (k == 0) {
        out[t * cols.size() + s] = Scalar(1);
        continue;
      }
      int ri = 0;
      for (int i = 0; i < n; ++i) {
        if (!((cols[s] >> i) & 1U)) continue;
        int cj = 0;
        for (int j = 0; j < m; ++j) {
          if (!((rows[t] >> j) & 1U)) continue;
          minor[static_cast<std::size_t>(ri * k + cj)] = linear[static_cast<std::size_t>(i * m + j)];
          ++cj;
        }
        ++ri;
      }
      out[t * cols.size() + s] = small_det(minor, k);
    }
  }
  return out;
}

template <class Scalar>
AltForm<Scalar> alt_pullback(const AltForm<Scalar>& a, std::span<const Scalar> linear, int m) {
  const auto mat = alt_pullback_matrix<Scalar>(linear, a.dim(), m, a.degree());
  AltForm<Scalar> out(m, a.degree());
  const std::size_t cols = a.size();
  for (std::size_t t = 0; t < out.size(); ++t)
    for (std::size_t s = 0; s < cols; ++s) out[t] += mat[t * cols + s] * a[s];
  return out;
}

template <class Scalar>
AltForm<double> to_double(const AltForm<Scalar>& a) {
  AltForm<double> out(a.dim(), a.degree());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = lochodge::to_double(a[i]);
  return out;
}

}  // namespace lochodge
