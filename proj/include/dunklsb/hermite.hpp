#pragma once

#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dunklsb/dunkl.hpp"

namespace dunklsb {

/// Order in which Gram-Schmidt visits the monomials of one degree. The basis
/// itself depends on it; every identity the suite checks does not.
enum class BasisOrdering { kGradedLex, kGradedReverseLex };

std::string to_string(BasisOrdering ordering);
BasisOrdering parse_basis_ordering(const std::string& text);

/// Fischer-orthogonal graded basis q_nu with exact squared norms
/// r_nu = [q_nu, q_nu]_1. The orthonormal basis is phi_nu = q_nu / sqrt(r_nu);
/// no square root is ever stored.
class OrthogonalBasis {
 public:
  struct Element {
    Monomial nu;
    Polynomial q;
    Rational r;
  };

  int max_degree() const { return max_degree_; }
  std::size_t dimension() const { return nvars_; }
  BasisOrdering ordering() const { return ordering_; }
  /// Grouped by degree, each degree in the construction order.
  const std::vector<Element>& elements() const { return elements_; }
  std::span<const Element> degree(int n) const;
  /// Throws DegreeRangeError if |nu| exceeds the built range.
  const Element& at(const Monomial& nu) const;
  /// phi_nu as sqrt(1/r_nu) * q_nu.
  SurdPolynomial phi(const Monomial& nu) const;

  friend OrthogonalBasis build_orthogonal_basis(const DunklContext& ctx, int max_degree, BasisOrdering ordering);

 private:
  int max_degree_ = 0;
  std::size_t nvars_ = 0;
  BasisOrdering ordering_ = BasisOrdering::kGradedLex;
  std::vector<Element> elements_;
  std::vector<std::size_t> degree_start_;
  std::map<Monomial, std::size_t> index_;
};

/// Gram-Schmidt over the monomials of each degree under [.,.]_1. Throws
/// DegeneracyError on a nonpositive pivot.
OrthogonalBasis build_orthogonal_basis(const DunklContext& ctx, int max_degree,
                                       BasisOrdering ordering = BasisOrdering::kGradedLex);

/// e^{-t Delta/2} q_nu, the rational core of H_{t;nu}: the full polynomial is
/// sqrt(t^{-|nu|} / r_nu) times this.
Polynomial hermite_core(const DunklContext& ctx, const OrthogonalBasis& basis, const Rational& t,
                        const Monomial& nu);

/// H_{t;nu} = e^{-t Delta/2} delta_{t^{-1/2}} phi_nu.
SurdPolynomial hermite_polynomial(const DunklContext& ctx, const OrthogonalBasis& basis, const Rational& t,
                                  const Monomial& nu);

/// The same family without the 1/sqrt(r_nu) normalization.
SurdPolynomial hermite_unnormalized(const DunklContext& ctx, const OrthogonalBasis& basis, const Rational& t,
                                    const Monomial& nu);

/// All H_{t;nu} of one t, cached as rational cores and scale factors.
class HermiteFamily {
 public:
  HermiteFamily(const DunklContext& ctx, const OrthogonalBasis& basis, Rational t);
  const Rational& t() const { return t_; }
  const OrthogonalBasis& basis() const { return *basis_; }
  const Polynomial& core(const Monomial& nu) const;
  /// sqrt(t^{-|nu|} / r_nu).
  const Surd& scale(const Monomial& nu) const;
  SurdPolynomial polynomial(const Monomial& nu) const;
  /// H_{t;nu} with the scale rounded into the coefficients.
  ComplexPolynomial numeric(const Monomial& nu) const;

 private:
  Rational t_;
  const OrthogonalBasis* basis_;
  std::map<Monomial, Polynomial> cores_;
  std::map<Monomial, Surd> scales_;
};

/// h_{t;nu}(x) = e^{-x^2/4t} H_{t;nu}(x).
long double hermite_function_eval(const DunklContext& ctx, const OrthogonalBasis& basis, const Rational& t,
                                  const Monomial& nu, std::span<const double> x);

/// One row per nu: exponents, q_nu terms and r_nu, all rationals as num/den.
void write_basis_csv(std::ostream& out, const OrthogonalBasis& basis);

}  // namespace dunklsb
