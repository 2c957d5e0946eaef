#pragma once

// Dense linear algebra over the rationals, used for rank, span and
// determinant checks on the reference spaces.

#include <lochodge/rational.hpp>

#include <cstddef>
#include <optional>
#include <vector>

namespace lochodge {

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  RationalMatrix transpose() const;
  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

  /// Rows of a stacked on top of rows of b (same column count).
  static RationalMatrix vstack(const RationalMatrix& a, const RationalMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

std::size_t rank(RationalMatrix m);

/// Fraction-free (Bareiss) determinant. Rows are scaled to integers first.
Rational determinant(const RationalMatrix& m);

/// Exact inverse; std::nullopt when singular.
std::optional<RationalMatrix> inverse(const RationalMatrix& m);

/// True when every row of rows lies in the row span of basis.
bool row_span_contains(const RationalMatrix& basis, const RationalMatrix& rows);

/// Indices of a maximal independent subset of rows, chosen greedily in order.
std::vector<std::size_t> independent_rows(const RationalMatrix& m);

}  // namespace lochodge
