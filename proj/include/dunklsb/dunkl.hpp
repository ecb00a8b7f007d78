#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "dunklsb/coxeter.hpp"
#include "dunklsb/polynomial.hpp"

namespace dunklsb {

/// Root system, its group and a multiplicity, with the per-root data the
/// Dunkl operators need. Only roots with nonzero multiplicity get a term.
class DunklContext {
 public:
  struct Term {
    std::size_t root = 0;
    Rational mu;
    double mu_real = 0;
    /// Exact regime only.
    std::vector<Rational> direction;
    RationalMatrix reflection;
    /// x_i -> sign[i] * x_{target[i]} when the reflection is a signed permutation.
    std::optional<std::vector<std::pair<std::size_t, int>>> signed_permutation;
    std::vector<double> value;
    std::vector<double> reflection_real;
  };

  DunklContext(RootSystem rs, MultiplicityFunction mu);
  /// Builds the group, partitions orbits and attaches one value per orbit.
  static DunklContext from_spec(const RootSystemSpec& spec, const std::vector<Rational>& orbit_values);

  const RootSystem& root_system() const { return rs_; }
  const ReflectionGroup& group() const { return group_; }
  const MultiplicityFunction& multiplicity() const { return mu_; }
  const std::vector<std::vector<std::size_t>>& orbits() const { return orbits_; }
  std::size_t dimension() const { return rs_.dimension(); }
  Regime regime() const { return rs_.regime(); }
  const Rational& gamma() const { return mu_.gamma(); }
  const std::vector<Term>& terms() const { return terms_; }
  /// Throws RegimeError unless exact.
  void require_exact(const char* what) const;

 private:
  DunklContext(RootSystem rs, ReflectionGroup g, std::vector<std::vector<std::size_t>> orbits, MultiplicityFunction mu);
  void build_terms();
  RootSystem rs_;
  ReflectionGroup group_;
  std::vector<std::vector<std::size_t>> orbits_;
  MultiplicityFunction mu_;
  std::vector<Term> terms_;
};

/// T_xi p = d_xi p + sum_{alpha > 0} mu(alpha) <alpha,xi> (p - p o sigma_alpha) / <alpha,x>.
/// With block_offset the operator acts on variables [offset, offset + N) of p
/// and treats the rest as constants.
Polynomial dunkl_apply(const DunklContext& ctx, std::span<const Rational> xi, const Polynomial& p,
                       std::size_t block_offset = 0);
/// T along the i-th standard basis vector.
Polynomial dunkl_apply(const DunklContext& ctx, std::size_t i, const Polynomial& p, std::size_t block_offset = 0);
/// Floating regime variant.
RealPolynomial dunkl_apply(const DunklContext& ctx, std::span<const double> xi, const RealPolynomial& p);

/// sum_j T_{xi_j}^2 p over the rows of an orthonormal frame (standard basis if null).
Polynomial dunkl_laplacian(const DunklContext& ctx, const Polynomial& p, const RationalMatrix* frame = nullptr);

/// sum_k (tau/2)^k / k! Delta^k p; the sum is finite.
Polynomial heat_apply(const DunklContext& ctx, const Rational& tau, const Polynomial& p);

/// Componentwise on sqrt(r) * P_r.
SurdPolynomial heat_apply(const DunklContext& ctx, const Rational& tau, const SurdPolynomial& p);

/// Coefficient of x^kappa scaled by lambda^|kappa|.
SurdPolynomial dilate(const Surd& lambda, const Polynomial& p);
SurdPolynomial dilate(const Surd& lambda, const SurdPolynomial& p);
Polynomial dilate(const Rational& lambda, const Polynomial& p);

/// [p,q]_t = ((delta_{sqrt t} p)(T)(delta_{sqrt t} q))(0).
Rational fischer_pair(const DunklContext& ctx, const Polynomial& p, const Polynomial& q, const Rational& t);

/// Integral of p against m_t, i.e. (e^{t Delta/2} p)(0).
Rational gaussian_moment(const DunklContext& ctx, const Polynomial& p, const Rational& t);
/// Same, returned as a constant surd polynomial.
SurdPolynomial gaussian_moment(const DunklContext& ctx, const SurdPolynomial& p, const Rational& t);

/// <xi,x> p
Polynomial multiply_coordinate(std::span<const Rational> xi, const Polynomial& p);

/// (t/i) T_xi p, stored as -i * coefficient * polynomial.
struct MomentumImage {
  Rational coefficient;
  Polynomial polynomial;
};
MomentumImage momentum_apply(const DunklContext& ctx, std::span<const Rational> xi, const Rational& t,
                             const Polynomial& p);

/// Matrix of T_i from degree-n monomials (columns) to degree-(n-1) monomials
/// (rows), both in monomials_of_degree order.
RationalMatrix dunkl_matrix(const DunklContext& ctx, std::size_t i, int n);

/// Fischer Gram matrices [x^kappa, x^lambda]_1 for degrees 0..max_degree.
std::vector<RationalMatrix> fischer_gram(const DunklContext& ctx, int max_degree);

/// Moments of monomials against m_1, built by L(x_i g) = L(T_i g).
class MomentTable {
 public:
  MomentTable(const DunklContext& ctx, int max_degree);
  int max_degree() const { return max_degree_; }
  std::size_t dimension() const { return nvars_; }
  const Rational& at(const Monomial& m) const;
  long double at_ld(const Monomial& m) const;
  /// Integral of p against m_t.
  Rational moment(const Polynomial& p, const Rational& t) const;

 private:
  int max_degree_;
  std::size_t nvars_;
  std::map<Monomial, Rational> exact_;
  std::map<Monomial, long double> approx_;
};

}  // namespace dunklsb
