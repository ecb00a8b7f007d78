#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace dunklsb {

using Rational = mpq_class;
using Integer = mpz_class;

/// num/den in canonical form.
inline Rational make_rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Accepts "p", "p/q" and plain decimals such as "-0.125" or "1.5e-2".
Rational parse_rational(std::string_view text);

/// Always "num/den", also for integers.
std::string format_rational(const Rational& q);

/// Correctly rounded to within one ulp of long double.
long double to_long_double(const Rational& q);
inline double to_double(const Rational& q) { return static_cast<double>(to_long_double(q)); }

/// Exact conversion of a finite double.
Rational from_double(double x);

Rational pow(const Rational& base, long exponent);

bool is_perfect_square(const Rational& q);
/// Requires is_perfect_square(q).
Rational exact_sqrt(const Rational& q);

/// coefficient * sqrt(radicand), radicand > 0 and square-free over the rationals
/// in the sense that perfect-square factors of numerator and denominator are
/// pulled into the coefficient.
class Surd {
 public:
  Surd() : coefficient_(0), radicand_(1) {}
  Surd(Rational coefficient, Rational radicand);
  static Surd sqrt(const Rational& radicand) { return Surd(1, radicand); }

  const Rational& coefficient() const noexcept { return coefficient_; }
  const Rational& radicand() const noexcept { return radicand_; }
  bool is_rational() const { return radicand_ == 1; }
  bool is_zero() const { return sgn(coefficient_) == 0; }

  Surd operator*(const Surd& other) const;
  Surd operator*(const Rational& other) const;
  Surd inverse() const;
  bool operator==(const Surd& other) const;
  long double to_long_double() const;
  double to_double() const { return static_cast<double>(to_long_double()); }

 private:
  Rational coefficient_;
  Rational radicand_;
};

/// Dense row-major rational matrix.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  RationalMatrix operator*(const RationalMatrix& other) const;
  std::vector<Rational> operator*(const std::vector<Rational>& v) const;
  RationalMatrix transpose() const;
  bool operator==(const RationalMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Solves A X = B exactly for a full column rank A. Throws
/// InternalConsistencyError if A is rank deficient or the system is
/// inconsistent.
RationalMatrix solve_exact(RationalMatrix a, RationalMatrix b);

/// Throws DegeneracyError if singular.
RationalMatrix inverse(const RationalMatrix& a);

}  // namespace dunklsb
