#pragma once

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dunklsb/hermite.hpp"
#include "dunklsb/kernel.hpp"

namespace dunklsb {

/// Integrals of polynomial x Gaussian against the Dunkl measures, all reduced
/// to the moments of m_1:
///   int p dm_s             = L_s(p),  L_s(x^k) = s^{|k|/2} L_1(x^k)
///   int e^{-x^2/2s} p dw_t = (s/t)^{gamma+N/2} L_s(p)
class MomentFunctional {
 public:
  MomentFunctional(const DunklContext& ctx, int max_degree);
  int max_degree() const { return table_.max_degree(); }
  const MomentTable& table() const { return table_; }
  const Rational& gamma() const { return gamma_; }
  std::size_t dimension() const { return nvars_; }

  ComplexLD m(const Rational& s, const ComplexPolynomial& p) const;
  Rational m_exact(const Rational& s, const Polynomial& p) const;
  /// Integral against e^{-x^2/2s} d omega_t.
  ComplexLD omega(const Rational& t, const Rational& s, const ComplexPolynomial& p) const;
  /// (s/t)^{gamma+N/2}
  long double measure_ratio(const Rational& t, const Rational& s) const;
  /// Moment of the single monomial k against m_s, long double.
  long double monomial(const Rational& s, const Monomial& k) const;

 private:
  void require(int degree) const;
  MomentTable table_;
  Rational gamma_;
  std::size_t nvars_;
};

/// e^{-a x^2} P(x) with a >= 0; a = 0 is a plain polynomial.
struct GaussianPolynomial {
  Rational a;
  ComplexPolynomial poly;
  ComplexLD operator()(std::span<const ComplexLD> x) const;
};

/// sum c_nu h_{t;nu}.
struct HermiteSpan {
  Rational t;
  std::vector<std::pair<Monomial, Complex>> terms;
};

/// e^{-a x^2} sum c_nu H_{t;nu} with a = 1/4t.
GaussianPolynomial to_gaussian(const HermiteFamily& family, const HermiteSpan& span);
/// sum c_nu H_{t;nu}, the same coefficients read in L^2(m_t).
ComplexPolynomial to_ground_state_polynomial(const HermiteFamily& family, const HermiteSpan& span);

/// z -> e^{-z^2/2t'} P(z). P is exact through truncation_degree (the Taylor
/// coefficients of the untruncated image); the tail is the heuristic size of
/// the top-degree part of P on the unit polydisk.
struct HolomorphicImage {
  Rational envelope_t;
  ComplexPolynomial poly;
  int truncation_degree = 0;
  double tail = 0;
  ComplexLD operator()(std::span<const ComplexLD> z) const;
  /// Taylor polynomial of the whole image through degree d.
  ComplexPolynomial expand(int d) const;
};

/// A_t psi(z) = int d omega_t(q) A_t(z,q) psi(q).
HolomorphicImage transform_A(const KernelTable& table, const MomentFunctional& mf, const GaussianPolynomial& psi,
                             const Rational& t);

/// Version B, path (i): int dm_t(q) B_t(z,q) phi(q) with the B kernel.
HolomorphicImage transform_B_direct(const KernelTable& table, const MomentFunctional& mf, const ComplexPolynomial& phi,
                                    const Rational& t);
/// Version B, path (ii): A_t V_t^{-1} phi.
HolomorphicImage transform_B_composed(const KernelTable& table, const MomentFunctional& mf,
                                      const ComplexPolynomial& phi, const Rational& t);

/// C_t psi(z) = int d omega_t(q) rho_t(z,q) psi(q).
HolomorphicImage transform_C(const KernelTable& table, const MomentFunctional& mf, const GaussianPolynomial& psi,
                             const Rational& t);
/// C_t psi through C_t(z,q) = A_t(0,q) A_t(z,q), i.e. A_t applied to A_t(0,.) psi.
HolomorphicImage transform_C_via_A(const KernelTable& table, const MomentFunctional& mf,
                                   const GaussianPolynomial& psi, const Rational& t);
/// Gf(z) = 2^{gamma/2+N/4} f(2z) / A_{2t}(2z,0).
HolomorphicImage apply_G(const HolomorphicImage& f, const Rational& gamma, std::size_t nvars, const Rational& t);

/// The Ben Said-Orsted transform int d omega~_1(y) BSO(z,y) phi(y) against the
/// unnormalized weight, with the constant c taken from table.mms().
HolomorphicImage transform_BSO(const KernelTable& table, const MomentFunctional& mf, const GaussianPolynomial& phi);

enum class GroundStateDirection { kForward, kInverse };
/// Forward V: multiply by e^{+x^2/4t}; inverse: by e^{-x^2/4t}.
GaussianPolynomial ground_state(const Rational& t, GroundStateDirection direction, const GaussianPolynomial& f);

/// delta_lambda f(x) = f(lambda x) for rational lambda > 0.
GaussianPolynomial dilate(const Rational& lambda, const GaussianPolynomial& f);
/// D_lambda on an image.
HolomorphicImage dilate(const Rational& lambda, const HolomorphicImage& f);
GaussianPolynomial scale(const GaussianPolynomial& f, Complex c);

/// F_t psi(k) = int d omega_t(x) E(-ik/sqrt t, x/sqrt t) psi(x) as a polynomial
/// in k (no envelope; exact through the truncation degree).
ComplexPolynomial dunkl_fourier_polynomial(const KernelTable& table, const MomentFunctional& mf,
                                           const GaussianPolynomial& psi, const Rational& t);
ComplexLD dunkl_fourier(const KernelTable& table, const MomentFunctional& mf, const GaussianPolynomial& psi,
                        const Rational& t, std::span<const double> k);

/// T_x sigma_t(q) from int d omega_t(k) E(k/sqrt t, iq/sqrt t) E(-ix/sqrt t, k/sqrt t) e^{-k^2/2t}.
long double translate_heat(const KernelTable& table, const MomentFunctional& mf, const Rational& t,
                           std::span<const double> x, std::span<const double> q);

/// (sigma_t * psi)(x) = int d omega_t(q) T_q sigma_t(x) psi(q), with
/// T_q sigma_t(x) = rho_t(q, x).
ComplexLD convolve_heat(const KernelTable& table, const MomentFunctional& mf, const GaussianPolynomial& psi,
                        const Rational& t, std::span<const double> x);

/// Fischer Gram matrices [x^k, x^l]_1 in long double for the B-space inner product.
class FischerGram {
 public:
  FischerGram(const DunklContext& ctx, int max_degree);
  int max_degree() const { return max_degree_; }
  std::size_t dimension() const { return nvars_; }
  /// <<f1, f2>>_t, anti-linear in f1. Throws DegreeRangeError if a polynomial
  /// exceeds the Gram degree.
  ComplexLD inner(const Rational& t, const ComplexPolynomial& f1, const ComplexPolynomial& f2) const;

 private:
  int max_degree_;
  std::size_t nvars_;
  std::vector<std::vector<Monomial>> mons_;
  std::vector<std::map<Monomial, std::size_t>> index_;
  std::vector<std::vector<long double>> gram_;
};

/// Images are expanded to their Taylor polynomial through
/// min(truncation degree, Gram degree) first.
ComplexLD bspace_inner(const FischerGram& gram, const Rational& t, const HolomorphicImage& f1,
                       const HolomorphicImage& f2);
ComplexLD bspace_inner(const FischerGram& gram, const Rational& t, const ComplexPolynomial& f1,
                       const ComplexPolynomial& f2);

/// <f1, f2>_C = <G f1, G f2>_{B, t/2} for Version C images f_i.
ComplexLD cspace_inner(const FischerGram& gram, const Rational& gamma, const Rational& t, const HolomorphicImage& f1,
                       const HolomorphicImage& f2);

/// coefficient * base^exponent with the power kept symbolic, so that measure
/// rescalings by irrational powers compare exactly.
struct ScaledValue {
  SurdPolynomial coefficient;  // constant
  Rational base;
  Rational exponent;
  friend bool operator==(const ScaledValue& a, const ScaledValue& b);
  /// Multiplies the power's base by factor.
  ScaledValue rebased(const Rational& factor) const;
  long double value() const;
};

/// <psi, psi>_{L^2(omega_s)} for psi = e^{-a x^2} Q with exact Q.
ScaledValue omega_norm_exact(const MomentFunctional& mf, const Rational& s, const Rational& a,
                             const SurdPolynomial& q);

}  // namespace dunklsb
