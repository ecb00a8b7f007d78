#include "dunklsb/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "dunklsb/error.hpp"

namespace dunklsb {

namespace {

Rational parse_decimal(std::string_view text) {
  std::string s(text);
  std::size_t epos = s.find_first_of("eE");
  long exponent = 0;
  if (epos != std::string::npos) {
    try {
      std::size_t used = 0;
      exponent = std::stol(s.substr(epos + 1), &used);
      if (used != s.size() - epos - 1) throw InvalidParameterError("bad exponent");
    } catch (const std::logic_error&) {
      throw InvalidParameterError("malformed number: " + std::string(text));
    }
    s.resize(epos);
  }
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.erase(0, 1);
  }
  std::string digits;
  long scale = 0;
  bool seen_point = false;
  for (char c : s) {
    if (c == '.') {
      if (seen_point) throw InvalidParameterError("malformed number: " + std::string(text));
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_point) ++scale;
    } else {
      throw InvalidParameterError("malformed number: " + std::string(text));
    }
  }
  if (digits.empty()) throw InvalidParameterError("malformed number: " + std::string(text));
  Rational value{Integer(digits, 10)};
  value *= pow(Rational(10), exponent - scale);
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw InvalidParameterError("empty rational");
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  Rational num = parse_decimal(text.substr(0, slash));
  Rational den = parse_decimal(text.substr(slash + 1));
  if (sgn(den) == 0) throw InvalidParameterError("zero denominator: " + std::string(text));
  Rational q = num / den;
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

long double to_long_double(const Rational& q) {
  // mpq_get_d truncates; one correction step recovers the long double residue.
  double head = q.get_d();
  if (!std::isfinite(head)) return head;
  Rational rest = q - Rational(head);
  return static_cast<long double>(head) + static_cast<long double>(rest.get_d());
}

Rational from_double(double x) {
  if (!std::isfinite(x)) throw InvalidParameterError("non-finite value");
  Rational q(x);
  return q;
}

Rational pow(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (sgn(base) == 0) throw InvalidParameterError("zero to a negative power");
    return pow(Rational(1) / base, -exponent);
  }
  Rational result;
  mpz_pow_ui(result.get_num_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(result.get_den_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  result.canonicalize();
  return result;
}

bool is_perfect_square(const Rational& q) {
  if (sgn(q) < 0) return false;
  return mpz_perfect_square_p(q.get_num_mpz_t()) != 0 && mpz_perfect_square_p(q.get_den_mpz_t()) != 0;
}

Rational exact_sqrt(const Rational& q) {
  if (!is_perfect_square(q)) throw RegimeError("not a rational square: " + format_rational(q));
  Integer num, den;
  mpz_sqrt(num.get_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(den.get_mpz_t(), q.get_den_mpz_t());
  return Rational(num, den);
}

namespace {

// Splits n > 0 as s^2 * r with r free of the small square factors we can find
// cheaply. Exactness does not depend on r being square free, only the
// canonical form used for equality does, and equality is checked via squares.
void pull_squares(Integer& n, Integer& out_root) {
  out_root = 1;
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    mpz_sqrt(out_root.get_mpz_t(), n.get_mpz_t());
    n = 1;
    return;
  }
  for (unsigned long p = 2; p < 1000; ++p) {
    Integer sq = p * p;
    while (mpz_divisible_p(n.get_mpz_t(), sq.get_mpz_t())) {
      n /= sq;
      out_root *= p;
    }
  }
}

}  // namespace

Surd::Surd(Rational coefficient, Rational radicand)
    : coefficient_(std::move(coefficient)), radicand_(std::move(radicand)) {
  if (sgn(radicand_) <= 0) throw InvalidParameterError("surd radicand must be positive");
  if (sgn(coefficient_) == 0) {
    radicand_ = 1;
    return;
  }
  // sqrt(a/b) = sqrt(a b) / b keeps the radicand integral.
  Integer n = radicand_.get_num() * radicand_.get_den();
  Rational scale(1, radicand_.get_den());
  Integer root;
  pull_squares(n, root);
  coefficient_ *= scale * Rational(root);
  radicand_ = Rational(n);
}

Surd Surd::operator*(const Surd& other) const {
  return Surd(coefficient_ * other.coefficient_, radicand_ * other.radicand_);
}

Surd Surd::operator*(const Rational& other) const {
  Surd s = *this;
  s.coefficient_ *= other;
  if (sgn(s.coefficient_) == 0) s.radicand_ = 1;
  return s;
}

Surd Surd::inverse() const {
  if (is_zero()) throw InvalidParameterError("inverse of zero surd");
  // 1/(c sqrt r) = sqrt(r) / (c r)
  return Surd(Rational(1) / (coefficient_ * radicand_), radicand_);
}

bool Surd::operator==(const Surd& other) const {
  if (sgn(coefficient_) != sgn(other.coefficient_)) return false;
  return coefficient_ * coefficient_ * radicand_ == other.coefficient_ * other.coefficient_ * other.radicand_;
}

long double Surd::to_long_double() const {
  return dunklsb::to_long_double(coefficient_) * std::sqrt(dunklsb::to_long_double(radicand_));
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& other) const {
  if (cols_ != other.rows_) throw InvalidParameterError("matrix shape mismatch");
  RationalMatrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (sgn(a) == 0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) out(i, j) += a * other(k, j);
    }
  return out;
}

std::vector<Rational> RationalMatrix::operator*(const std::vector<Rational>& v) const {
  if (cols_ != v.size()) throw InvalidParameterError("matrix shape mismatch");
  std::vector<Rational> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) out[i] += (*this)(i, k) * v[k];
  return out;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

RationalMatrix solve_exact(RationalMatrix a, RationalMatrix b) {
  const std::size_t m = a.rows(), n = a.cols(), k = b.cols();
  if (b.rows() != m) throw InvalidParameterError("solve_exact: shape mismatch");
  std::size_t row = 0;
  std::vector<std::size_t> pivot_row(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = row;
    while (p < m && sgn(a(p, col)) == 0) ++p;
    if (p == m) throw InternalConsistencyError("solve_exact: rank deficient system");
    if (p != row) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(row, j));
      for (std::size_t j = 0; j < k; ++j) std::swap(b(p, j), b(row, j));
    }
    Rational inv = Rational(1) / a(row, col);
    for (std::size_t j = col; j < n; ++j) a(row, j) *= inv;
    for (std::size_t j = 0; j < k; ++j) b(row, j) *= inv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == row || sgn(a(r, col)) == 0) continue;
      Rational f = a(r, col);
      for (std::size_t j = col; j < n; ++j)
        if (sgn(a(row, j)) != 0) a(r, j) -= f * a(row, j);
      for (std::size_t j = 0; j < k; ++j)
        if (sgn(b(row, j)) != 0) b(r, j) -= f * b(row, j);
    }
    pivot_row[col] = row;
    ++row;
  }
  for (std::size_t r = n; r < m; ++r)
    for (std::size_t j = 0; j < k; ++j)
      if (sgn(b(r, j)) != 0) throw InternalConsistencyError("solve_exact: inconsistent system");
  RationalMatrix x(n, k);
  for (std::size_t col = 0; col < n; ++col)
    for (std::size_t j = 0; j < k; ++j) x(col, j) = b(pivot_row[col], j);
  return x;
}

RationalMatrix inverse(const RationalMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidParameterError("inverse of non-square matrix");
  try {
    return solve_exact(a, RationalMatrix::identity(a.rows()));
  } catch (const InternalConsistencyError&) {
    throw DegeneracyError("singular matrix");
  }
}

}  // namespace dunklsb
