#pragma once

#include <gmpxx.h>

#include <string>

namespace lochodge {

/// Exact rational scalar used by every symbolic computation.
using Rational = mpq_class;

/// a / b in canonical form (mpq_class(a, b) does not canonicalize).
inline Rational ratio(long a, long b) {
  Rational q(a, b);
  q.canonicalize();
  return q;
}

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_zero(double x) { return x == 0.0; }

inline std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace lochodge
