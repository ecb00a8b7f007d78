#pragma once

#include <array>
#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <type_traits>
#include <algorithm>
#include <string>
#include <vector>

#include "dunklsb/error.hpp"
#include "dunklsb/rational.hpp"

namespace dunklsb {

inline constexpr std::size_t kMaxVariables = 12;

/// Exponent multi-index. Ordered by total degree, then so that within a
/// degree x1^n comes first (graded lexicographic).
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::span<const int> exponents);
  Monomial(std::initializer_list<int> exponents);

  int operator[](std::size_t i) const { return exps_[i]; }
  int degree() const { return degree_; }
  Monomial operator*(const Monomial& other) const;
  /// Requires (*this)[i] > 0.
  Monomial lowered(std::size_t i) const;
  Monomial raised(std::size_t i) const;
  /// Exponents of variables [offset, offset+count) moved to [0, count).
  Monomial block(std::size_t offset, std::size_t count) const;
  Monomial shifted(std::size_t offset) const;
  std::vector<int> exponents(std::size_t nvars) const;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    if (a.degree_ != b.degree_) return a.degree_ <=> b.degree_;
    for (std::size_t i = 0; i < kMaxVariables; ++i)
      if (a.exps_[i] != b.exps_[i]) return b.exps_[i] <=> a.exps_[i];
    return std::strong_ordering::equal;
  }

 private:
  void set(std::size_t i, int e);
  std::array<std::uint8_t, kMaxVariables> exps_{};
  std::uint16_t degree_ = 0;
};

/// All monomials of exact degree n in nvars variables, graded-lex order.
std::vector<Monomial> monomials_of_degree(std::size_t nvars, int n);

using Complex = std::complex<double>;

namespace detail {
inline bool is_zero(const Rational& c) { return sgn(c) == 0; }
inline bool is_zero(double c) { return c == 0.0; }
inline bool is_zero(const Complex& c) { return c == Complex(0.0, 0.0); }

template <class V>
V convert(const Rational& c) {
  if constexpr (std::is_same_v<V, Rational>)
    return c;
  else
    return V(to_long_double(c));
}
template <class V>
V convert(double c) {
  return V(c);
}
template <class V>
V convert(const Complex& c) {
  if constexpr (std::is_same_v<V, std::complex<long double>>)
    return V(c.real(), c.imag());
  else
    return V(c);
}
}  // namespace detail

/// Sparse polynomial with coefficients in C. Zero coefficients are never stored.
template <class C>
class BasicPolynomial {
 public:
  using Coefficient = C;
  using TermMap = std::map<Monomial, C>;

  BasicPolynomial() = default;
  explicit BasicPolynomial(std::size_t nvars) : nvars_(nvars) {
    if (nvars > kMaxVariables) throw InvalidParameterError("too many variables");
  }
  static BasicPolynomial constant(std::size_t nvars, const C& c) {
    BasicPolynomial p(nvars);
    p.add_term(Monomial{}, c);
    return p;
  }
  static BasicPolynomial monomial(std::size_t nvars, const Monomial& m, const C& c = C(1)) {
    BasicPolynomial p(nvars);
    p.add_term(m, c);
    return p;
  }
  static BasicPolynomial variable(std::size_t nvars, std::size_t i) {
    std::vector<int> e(nvars, 0);
    e.at(i) = 1;
    return monomial(nvars, Monomial(e));
  }

  std::size_t num_variables() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  /// -1 for the zero polynomial.
  int degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }
  C coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? C(0) : it->second;
  }

  void add_term(const Monomial& m, const C& c) {
    if (detail::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (detail::is_zero(it->second)) terms_.erase(it);
    }
  }

  BasicPolynomial homogeneous_part(int n) const {
    BasicPolynomial out(nvars_);
    for (const auto& [m, c] : terms_)
      if (m.degree() == n) out.terms_.emplace_hint(out.terms_.end(), m, c);
    return out;
  }

  BasicPolynomial& operator+=(const BasicPolynomial& o) {
    check_compatible(o);
    if (terms_.empty()) nvars_ = std::max(nvars_, o.nvars_);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  BasicPolynomial& operator-=(const BasicPolynomial& o) {
    check_compatible(o);
    if (terms_.empty()) nvars_ = std::max(nvars_, o.nvars_);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  BasicPolynomial& operator*=(const C& s) {
    if (detail::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }
  friend BasicPolynomial operator+(BasicPolynomial a, const BasicPolynomial& b) { return a += b; }
  friend BasicPolynomial operator-(BasicPolynomial a, const BasicPolynomial& b) { return a -= b; }
  friend BasicPolynomial operator*(BasicPolynomial a, const C& s) { return a *= s; }
  friend BasicPolynomial operator*(const C& s, BasicPolynomial a) { return a *= s; }
  BasicPolynomial operator-() const { return *this * C(-1); }
  friend BasicPolynomial operator*(const BasicPolynomial& a, const BasicPolynomial& b) {
    a.check_compatible(b);
    BasicPolynomial out(a.nvars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
    return out;
  }
  friend bool operator==(const BasicPolynomial& a, const BasicPolynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  BasicPolynomial partial(std::size_t i) const {
    BasicPolynomial out(nvars_);
    for (const auto& [m, c] : terms_) {
      int e = m[i];
      if (e > 0) out.add_term(m.lowered(i), c * C(e));
    }
    return out;
  }

  /// Evaluation in any field V that C converts into.
  template <class V>
  V evaluate(std::span<const V> point) const {
    if (point.size() != nvars_) throw InvalidParameterError("evaluation point has wrong dimension");
    V total(0);
    for (const auto& [m, c] : terms_) {
      V term = detail::convert<V>(c);
      for (std::size_t i = 0; i < nvars_; ++i)
        for (int k = 0; k < m[i]; ++k) term *= point[i];
      total += term;
    }
    return total;
  }

  /// Renames variable i to i + offset in a space of total_vars variables.
  BasicPolynomial embedded(std::size_t total_vars, std::size_t offset) const {
    BasicPolynomial out(total_vars);
    if (offset + nvars_ > total_vars) throw InvalidParameterError("embedding out of range");
    for (const auto& [m, c] : terms_) out.terms_.emplace(m.shifted(offset), c);
    return out;
  }

  void check_compatible(const BasicPolynomial& o) const {
    if (o.nvars_ != nvars_ && !o.terms_.empty() && !terms_.empty())
      throw InvalidParameterError("polynomials in different numbers of variables");
  }

 private:
  std::size_t nvars_ = 0;
  TermMap terms_;
};

using Polynomial = BasicPolynomial<Rational>;
using RealPolynomial = BasicPolynomial<double>;
using ComplexPolynomial = BasicPolynomial<Complex>;

ComplexPolynomial to_complex(const Polynomial& p);
RealPolynomial to_real(const Polynomial& p);

/// Exact evaluation.
Rational evaluate(const Polynomial& p, std::span<const Rational> point);
/// Horner-free direct evaluation in long double complex; used where 1e-12
/// residuals must not drown in rounding.
std::complex<long double> evaluate_ld(const ComplexPolynomial& p, std::span<const std::complex<long double>> point);

/// Sum of a polynomial of square-class components: sum_r sqrt(r) * P_r with
/// distinct radicand classes (no ratio of two radicands is a rational square).
class SurdPolynomial {
 public:
  SurdPolynomial() = default;
  explicit SurdPolynomial(const Polynomial& p);
  SurdPolynomial(const Rational& radicand, const Polynomial& p);

  std::size_t num_variables() const;
  const std::vector<std::pair<Rational, Polynomial>>& components() const { return parts_; }
  bool is_rational() const;
  /// Requires is_rational().
  Polynomial rational_part() const;

  SurdPolynomial& operator+=(const SurdPolynomial& o);
  friend SurdPolynomial operator+(SurdPolynomial a, const SurdPolynomial& b) { return a += b; }
  friend SurdPolynomial operator-(SurdPolynomial a, const SurdPolynomial& b);
  SurdPolynomial operator*(const Surd& s) const;
  friend SurdPolynomial operator*(const SurdPolynomial& a, const SurdPolynomial& b);
  bool is_zero() const;
  friend bool operator==(const SurdPolynomial& a, const SurdPolynomial& b) { return (a - b).is_zero(); }

  ComplexPolynomial to_complex() const;
  template <class V>
  V evaluate(std::span<const V> point) const {
    V total(0);
    for (const auto& [r, p] : parts_)
      total += V(std::sqrt(static_cast<double>(to_long_double(r)))) * p.template evaluate<V>(point);
    return total;
  }

 private:
  void add_component(const Rational& radicand, const Polynomial& p);
  std::vector<std::pair<Rational, Polynomial>> parts_;
};

std::string to_string(const Polynomial& p);

}  // namespace dunklsb
