#include <lochodge/exact_linalg.hpp>

#include <stdexcept>
#include <utility>

namespace lochodge {

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("RationalMatrix: product shape mismatch");
  RationalMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t l = 0; l < a.cols_; ++l) {
      const Rational& x = a(i, l);
      if (is_zero(x)) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += x * b(l, j);
    }
  return c;
}

RationalMatrix RationalMatrix::vstack(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.rows_ == 0) return b;
  if (b.rows_ == 0) return a;
  if (a.cols_ != b.cols_) throw std::invalid_argument("RationalMatrix::vstack: column mismatch");
  RationalMatrix c(a.rows_ + b.rows_, a.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < a.cols_; ++j) c(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows_; ++i)
    for (std::size_t j = 0; j < b.cols_; ++j) c(a.rows_ + i, j) = b(i, j);
  return c;
}

namespace {

// Row echelon form in place; returns the rank.
std::size_t eliminate(RationalMatrix& m) {
  const std::size_t R = m.rows();
  const std::size_t C = m.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < C && r < R; ++c) {
    std::size_t piv = R;
    for (std::size_t i = r; i < R; ++i)
      if (!is_zero(m(i, c))) {
        piv = i;
        break;
      }
    if (piv == R) continue;
    if (piv != r) {
      for (std::size_t j = 0; j < C; ++j) std::swap(m(piv, j), m(r, j));
    }
    const Rational p = m(r, c);
    for (std::size_t i = r + 1; i < R; ++i) {
      if (is_zero(m(i, c))) continue;
      const Rational f = m(i, c) / p;
      for (std::size_t j = c; j < C; ++j) m(i, j) -= f * m(r, j);
    }
    ++r;
  }
  return r;
}

}  // namespace

std::size_t rank(RationalMatrix m) { return eliminate(m); }

Rational determinant(const RationalMatrix& m) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw std::invalid_argument("determinant: matrix is not square");
  if (n == 0) return Rational(1);
  // Clear denominators row by row, then run Bareiss on integers.
  std::vector<mpz_class> a(n * n);
  Rational scale(1);
  for (std::size_t i = 0; i < n; ++i) {
    mpz_class l = 1;
    for (std::size_t j = 0; j < n; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
    scale *= Rational(l);
    for (std::size_t j = 0; j < n; ++j) {
      Rational v = m(i, j) * Rational(l);
      a[i * n + j] = v.get_num();
    }
  }
  int sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k * n + k] == 0) {
      std::size_t piv = k + 1;
      while (piv < n && a[piv * n + k] == 0) ++piv;
      if (piv == n) return Rational(0);
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class t = a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j];
        mpz_divexact(a[i * n + j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a[i * n + k] = 0;
    }
    prev = a[k * n + k];
  }
  Rational det(a[n * n - 1]);
  if (sign < 0) det = -det;
  return det / scale;
}

std::optional<RationalMatrix> inverse(const RationalMatrix& m) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw std::invalid_argument("inverse: matrix is not square");
  RationalMatrix a = m;
  RationalMatrix inv = RationalMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    for (std::size_t i = c; i < n; ++i)
      if (!is_zero(a(i, c))) {
        piv = i;
        break;
      }
    if (piv == n) return std::nullopt;
    if (piv != c)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(c, j));
        std::swap(inv(piv, j), inv(c, j));
      }
    const Rational p = a(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) /= p;
      inv(c, j) /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || is_zero(a(i, c))) continue;
      const Rational f = a(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(c, j);
        inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

bool row_span_contains(const RationalMatrix& basis, const RationalMatrix& rows) {
  if (rows.rows() == 0) return true;
  return rank(RationalMatrix::vstack(basis, rows)) == rank(basis);
}

std::vector<std::size_t> independent_rows(const RationalMatrix& m) {
  // Greedy in the given order: keep row i when it raises the rank of the kept set.
  std::vector<std::size_t> kept;
  std::vector<std::vector<Rational>> basis;
  std::vector<std::size_t> pivot_col;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<Rational> v(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) v[j] = m(i, j);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const std::size_t c = pivot_col[b];
      if (is_zero(v[c])) continue;
      const Rational f = v[c] / basis[b][c];
      for (std::size_t j = 0; j < v.size(); ++j)
        if (!is_zero(basis[b][j])) v[j] -= f * basis[b][j];
    }
    std::size_t c = 0;
    while (c < v.size() && is_zero(v[c])) ++c;
    if (c == v.size()) continue;
    basis.push_back(std::move(v));
    pivot_col.push_back(c);
    kept.push_back(i);
  }
  return kept;
}

}  // namespace lochodge
