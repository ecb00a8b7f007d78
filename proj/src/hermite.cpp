#include "dunklsb/hermite.hpp"

#include <algorithm>
#include <cmath>

#include "dunklsb/error.hpp"

namespace dunklsb {

std::string to_string(BasisOrdering ordering) {
  return ordering == BasisOrdering::kGradedLex ? "graded-lex" : "graded-reverse-lex";
}

BasisOrdering parse_basis_ordering(const std::string& text) {
  if (text == "graded-lex") return BasisOrdering::kGradedLex;
  if (text == "graded-reverse-lex") return BasisOrdering::kGradedReverseLex;
  throw ConfigError("unknown basis ordering '" + text + "'");
}

std::span<const OrthogonalBasis::Element> OrthogonalBasis::degree(int n) const {
  if (n < 0 || n > max_degree_) throw DegreeRangeError("basis built to degree " + std::to_string(max_degree_));
  std::size_t begin = degree_start_[static_cast<std::size_t>(n)];
  std::size_t end = degree_start_[static_cast<std::size_t>(n) + 1];
  return std::span<const Element>(elements_).subspan(begin, end - begin);
}

const OrthogonalBasis::Element& OrthogonalBasis::at(const Monomial& nu) const {
  auto it = index_.find(nu);
  if (it == index_.end())
    throw DegreeRangeError("multi-index of degree " + std::to_string(nu.degree()) + " outside basis of degree " +
                           std::to_string(max_degree_));
  return elements_[it->second];
}

SurdPolynomial OrthogonalBasis::phi(const Monomial& nu) const {
  const Element& e = at(nu);
  return SurdPolynomial(1 / e.r, e.q);
}

OrthogonalBasis build_orthogonal_basis(const DunklContext& ctx, int max_degree, BasisOrdering ordering) {
  ctx.require_exact("orthogonal basis");
  if (max_degree < 0) throw InvalidParameterError("basis degree must be nonnegative");
  OrthogonalBasis basis;
  basis.max_degree_ = max_degree;
  basis.nvars_ = ctx.dimension();
  basis.ordering_ = ordering;
  const auto gram = fischer_gram(ctx, max_degree);
  for (int n = 0; n <= max_degree; ++n) {
    basis.degree_start_.push_back(basis.elements_.size());
    auto mons = monomials_of_degree(basis.nvars_, n);
    const RationalMatrix& g = gram[static_cast<std::size_t>(n)];
    const std::size_t d = mons.size();
    std::vector<std::size_t> order(d);
    for (std::size_t k = 0; k < d; ++k) order[k] = ordering == BasisOrdering::kGradedLex ? k : d - 1 - k;

    // Coordinates over mons; G-inner products of the vectors built so far.
    std::vector<std::vector<Rational>> done;
    std::vector<std::vector<Rational>> done_g;  // G * v, reused for projections
    std::vector<Rational> norms;
    for (std::size_t k : order) {
      std::vector<Rational> v(d, Rational(0));
      v[k] = 1;
      for (std::size_t j = 0; j < done.size(); ++j) {
        // <x^k, v_j> = (G v_j)[k]
        Rational coeff = done_g[j][k] / norms[j];
        if (sgn(coeff) == 0) continue;
        for (std::size_t a = 0; a < d; ++a) v[a] -= coeff * done[j][a];
      }
      std::vector<Rational> gv(d, Rational(0));
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
          if (sgn(v[b]) != 0) gv[a] += g(a, b) * v[b];
      Rational r = 0;
      for (std::size_t a = 0; a < d; ++a) r += v[a] * gv[a];
      if (sgn(r) <= 0)
        throw DegeneracyError("Fischer pairing has a nonpositive Gram-Schmidt pivot in degree " + std::to_string(n));
      Polynomial q(basis.nvars_);
      for (std::size_t a = 0; a < d; ++a) q.add_term(mons[a], v[a]);
      basis.index_.emplace(mons[k], basis.elements_.size());
      basis.elements_.push_back({mons[k], std::move(q), r});
      done.push_back(std::move(v));
      done_g.push_back(std::move(gv));
      norms.push_back(std::move(r));
    }
  }
  basis.degree_start_.push_back(basis.elements_.size());
  return basis;
}

Polynomial hermite_core(const DunklContext& ctx, const OrthogonalBasis& basis, const Rational& t, const Monomial& nu) {
  if (sgn(t) <= 0) throw InvalidParameterError("Hermite polynomials need t > 0");
  return heat_apply(ctx, -t, basis.at(nu).q);
}

namespace {
// delta_{t^{-1/2}} on a homogeneous polynomial of degree n is the scalar t^{-n/2}.
Rational dilation_radicand(const Rational& t, int n) { return pow(1 / t, n); }
}  // namespace

SurdPolynomial hermite_unnormalized(const DunklContext& ctx, const OrthogonalBasis& basis, const Rational& t,
                                    const Monomial& nu) {
  if (sgn(t) <= 0) throw InvalidParameterError("Hermite polynomials need t > 0");
  // Literal composition: dilate first, then the backward heat flow.
  SurdPolynomial dilated = dilate(Surd::sqrt(1 / t), basis.at(nu).q);
  return heat_apply(ctx, -t, dilated);
}

SurdPolynomial hermite_polynomial(const DunklContext& ctx, const OrthogonalBasis& basis, const Rational& t,
                                  const Monomial& nu) {
  return hermite_unnormalized(ctx, basis, t, nu) * Surd::sqrt(1 / basis.at(nu).r);
}

HermiteFamily::HermiteFamily(const DunklContext& ctx, const OrthogonalBasis& basis, Rational t)
    : t_(std::move(t)), basis_(&basis) {
  if (sgn(t_) <= 0) throw InvalidParameterError("Hermite polynomials need t > 0");
  for (const auto& e : basis.elements()) {
    cores_.emplace(e.nu, heat_apply(ctx, -t_, e.q));
    scales_.emplace(e.nu, Surd::sqrt(dilation_radicand(t_, e.nu.degree()) / e.r));
  }
}

const Polynomial& HermiteFamily::core(const Monomial& nu) const {
  auto it = cores_.find(nu);
  if (it == cores_.end()) throw DegreeRangeError("multi-index outside the Hermite family");
  return it->second;
}

const Surd& HermiteFamily::scale(const Monomial& nu) const {
  auto it = scales_.find(nu);
  if (it == scales_.end()) throw DegreeRangeError("multi-index outside the Hermite family");
  return it->second;
}

SurdPolynomial HermiteFamily::polynomial(const Monomial& nu) const {
  const Surd& s = scale(nu);
  return SurdPolynomial(s.radicand(), core(nu) * s.coefficient());
}

ComplexPolynomial HermiteFamily::numeric(const Monomial& nu) const {
  return to_complex(core(nu)) * Complex(scale(nu).to_double(), 0.0);
}

long double hermite_function_eval(const DunklContext& ctx, const OrthogonalBasis& basis, const Rational& t,
                                  const Monomial& nu, std::span<const double> x) {
  if (x.size() != ctx.dimension()) throw InvalidParameterError("point has wrong dimension");
  SurdPolynomial h = hermite_polynomial(ctx, basis, t, nu);
  std::vector<long double> pt(x.begin(), x.end());
  long double r2 = 0;
  for (long double v : pt) r2 += v * v;
  long double value = 0;
  for (const auto& [r, p] : h.components())
    value += std::sqrt(to_long_double(r)) * p.evaluate<long double>(std::span<const long double>(pt));
  return std::exp(-r2 / (4 * to_long_double(t))) * value;
}

void write_basis_csv(std::ostream& out, const OrthogonalBasis& basis) {
  out << "nu,degree,r,q\n";
  const std::size_t nv = basis.dimension();
  for (const auto& e : basis.elements()) {
    auto ex = e.nu.exponents(nv);
    for (std::size_t i = 0; i < ex.size(); ++i) out << (i ? " " : "") << ex[i];
    out << ',' << e.nu.degree() << ',' << format_rational(e.r) << ',';
    bool first = true;
    // q terms as coefficient:exponents, separated by ';'
    for (const auto& [m, c] : e.q.terms()) {
      if (!first) out << ';';
      first = false;
      out << format_rational(c) << ':';
      auto me = m.exponents(nv);
      for (std::size_t i = 0; i < me.size(); ++i) out << (i ? " " : "") << me[i];
    }
    out << '\n';
  }
}

}  // namespace dunklsb
