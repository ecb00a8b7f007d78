#include "dunklsb/polynomial.hpp"

#include <sstream>

namespace dunklsb {

Monomial::Monomial(std::span<const int> exponents) {
  if (exponents.size() > kMaxVariables) throw InvalidParameterError("too many variables");
  for (std::size_t i = 0; i < exponents.size(); ++i) set(i, exponents[i]);
}

Monomial::Monomial(std::initializer_list<int> exponents)
    : Monomial(std::span<const int>(exponents.begin(), exponents.size())) {}

void Monomial::set(std::size_t i, int e) {
  if (e < 0 || e > 255) throw InvalidParameterError("exponent out of range");
  degree_ = static_cast<std::uint16_t>(degree_ - exps_[i] + e);
  exps_[i] = static_cast<std::uint8_t>(e);
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial out = *this;
  for (std::size_t i = 0; i < kMaxVariables; ++i)
    if (other.exps_[i] != 0) out.set(i, exps_[i] + other.exps_[i]);
  return out;
}

Monomial Monomial::lowered(std::size_t i) const {
  Monomial out = *this;
  out.set(i, exps_[i] - 1);
  return out;
}

Monomial Monomial::raised(std::size_t i) const {
  Monomial out = *this;
  out.set(i, exps_[i] + 1);
  return out;
}

Monomial Monomial::block(std::size_t offset, std::size_t count) const {
  Monomial out;
  for (std::size_t i = 0; i < count; ++i) out.set(i, exps_[offset + i]);
  return out;
}

Monomial Monomial::shifted(std::size_t offset) const {
  Monomial out;
  for (std::size_t i = 0; i + offset < kMaxVariables; ++i)
    if (exps_[i] != 0) out.set(i + offset, exps_[i]);
  return out;
}

std::vector<int> Monomial::exponents(std::size_t nvars) const {
  return std::vector<int>(exps_.begin(), exps_.begin() + static_cast<std::ptrdiff_t>(nvars));
}

namespace {

void fill_monomials(std::size_t nvars, std::size_t var, int remaining, std::vector<int>& current,
                    std::vector<Monomial>& out) {
  if (var + 1 == nvars) {
    current[var] = remaining;
    out.emplace_back(current);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[var] = e;
    fill_monomials(nvars, var + 1, remaining - e, current, out);
  }
  current[var] = 0;
}

}  // namespace

std::vector<Monomial> monomials_of_degree(std::size_t nvars, int n) {
  std::vector<Monomial> out;
  if (n < 0) return out;
  if (nvars == 0) {
    if (n == 0) out.emplace_back();
    return out;
  }
  std::vector<int> current(nvars, 0);
  fill_monomials(nvars, 0, n, current, out);
  return out;
}

ComplexPolynomial to_complex(const Polynomial& p) {
  ComplexPolynomial out(p.num_variables());
  for (const auto& [m, c] : p.terms()) out.add_term(m, Complex(to_double(c), 0.0));
  return out;
}

RealPolynomial to_real(const Polynomial& p) {
  RealPolynomial out(p.num_variables());
  for (const auto& [m, c] : p.terms()) out.add_term(m, to_double(c));
  return out;
}

Rational evaluate(const Polynomial& p, std::span<const Rational> point) {
  return p.evaluate<Rational>(point);
}

std::complex<long double> evaluate_ld(const ComplexPolynomial& p,
                                      std::span<const std::complex<long double>> point) {
  return p.evaluate<std::complex<long double>>(point);
}

SurdPolynomial::SurdPolynomial(const Polynomial& p) {
  if (!p.is_zero()) parts_.emplace_back(Rational(1), p);
}

SurdPolynomial::SurdPolynomial(const Rational& radicand, const Polynomial& p) {
  Surd s = Surd::sqrt(radicand);
  add_component(s.radicand(), p * s.coefficient());
}

std::size_t SurdPolynomial::num_variables() const {
  return parts_.empty() ? 0 : parts_.front().second.num_variables();
}

bool SurdPolynomial::is_rational() const {
  return parts_.empty() || (parts_.size() == 1 && parts_.front().first == 1);
}

Polynomial SurdPolynomial::rational_part() const {
  if (!is_rational()) throw RegimeError("polynomial has irrational coefficients");
  return parts_.empty() ? Polynomial() : parts_.front().second;
}

void SurdPolynomial::add_component(const Rational& radicand, const Polynomial& p) {
  if (p.is_zero()) return;
  for (auto it = parts_.begin(); it != parts_.end(); ++it) {
    Rational ratio = radicand / it->first;
    if (is_perfect_square(ratio)) {
      // sqrt(radicand) = sqrt(ratio) * sqrt(existing)
      it->second += p * exact_sqrt(ratio);
      if (it->second.is_zero()) parts_.erase(it);
      return;
    }
  }
  parts_.emplace_back(radicand, p);
}

SurdPolynomial& SurdPolynomial::operator+=(const SurdPolynomial& o) {
  for (const auto& [r, p] : o.parts_) add_component(r, p);
  return *this;
}

SurdPolynomial operator-(SurdPolynomial a, const SurdPolynomial& b) {
  for (const auto& [r, p] : b.parts_) a.add_component(r, -p);
  return a;
}

SurdPolynomial SurdPolynomial::operator*(const Surd& s) const {
  SurdPolynomial out;
  for (const auto& [r, p] : parts_) {
    Surd combined = Surd::sqrt(r) * s;
    out.add_component(combined.radicand(), p * combined.coefficient());
  }
  return out;
}

SurdPolynomial operator*(const SurdPolynomial& a, const SurdPolynomial& b) {
  SurdPolynomial out;
  for (const auto& [ra, pa] : a.parts_)
    for (const auto& [rb, pb] : b.parts_) {
      Surd combined = Surd::sqrt(ra) * Surd::sqrt(rb);
      out.add_component(combined.radicand(), (pa * pb) * combined.coefficient());
    }
  return out;
}

bool SurdPolynomial::is_zero() const { return parts_.empty(); }

ComplexPolynomial SurdPolynomial::to_complex() const {
  ComplexPolynomial out(num_variables());
  for (const auto& [r, p] : parts_) {
    long double root = std::sqrt(to_long_double(r));
    for (const auto& [m, c] : p.terms())
      out.add_term(m, Complex(static_cast<double>(to_long_double(c) * root), 0.0));
  }
  return out;
}

std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    if (!first) os << " + ";
    first = false;
    os << c.get_str();
    for (std::size_t i = 0; i < p.num_variables(); ++i) {
      if (m[i] == 0) continue;
      os << "*x" << (i + 1);
      if (m[i] > 1) os << "^" << m[i];
    }
  }
  return os.str();
}

}  // namespace dunklsb
