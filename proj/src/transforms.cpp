#include "dunklsb/transforms.hpp"

#include <cmath>
#include <functional>

#include "dunklsb/error.hpp"

namespace dunklsb {

namespace {

ComplexLD to_ld(const Complex& c) { return ComplexLD(c.real(), c.imag()); }
Complex to_d(const ComplexLD& c) { return Complex(static_cast<double>(c.real()), static_cast<double>(c.imag())); }

long double exponent_ld(const Rational& gamma, std::size_t nvars) {
  return to_long_double(gamma) + 0.5L * static_cast<long double>(nvars);
}

// s^{k/2} for even k, as long double, k = 0..max.
std::vector<long double> half_powers(const Rational& s, int max) {
  std::vector<long double> out(static_cast<std::size_t>(max) + 1, 0.0L);
  Rational p = 1;
  for (int k = 0; k <= max; k += 2) {
    out[static_cast<std::size_t>(k)] = to_long_double(p);
    p *= s;
  }
  return out;
}

std::vector<std::vector<ComplexLD>> power_table(std::span<const ComplexLD> v, int degree) {
  std::vector<std::vector<ComplexLD>> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i].assign(static_cast<std::size_t>(degree) + 1, 1);
    for (int k = 1; k <= degree; ++k)
      out[i][static_cast<std::size_t>(k)] = out[i][static_cast<std::size_t>(k) - 1] * v[i];
  }
  return out;
}

ComplexLD monomial_value(const std::vector<std::vector<ComplexLD>>& powers, const Monomial& m) {
  ComplexLD v = 1;
  for (std::size_t i = 0; i < powers.size(); ++i)
    if (m[i] != 0) v *= powers[i][static_cast<std::size_t>(m[i])];
  return v;
}

// Total Gaussian e^{-A q^2} as the scale s of e^{-q^2/2s}.
Rational scale_of(const Rational& total_a) {
  if (sgn(total_a) <= 0) throw InvalidParameterError("integrand has no decaying Gaussian factor");
  return 1 / (2 * total_a);
}

void require_truncation(const KernelTable& table, const ComplexPolynomial& q) {
  int need = std::max(q.degree(), 0) + 4;
  if (table.max_degree() < need)
    throw DegreeRangeError("kernel truncation " + std::to_string(table.max_degree()) +
                           " is too low for an input of degree " + std::to_string(q.degree()) + "; use at least " +
                           std::to_string(need));
}

// sum_n c(n) sum_{kappa, lambda} e_n[kappa][lambda] z^{slot} L_s(q^{other} Q) * ratio,
// with z in the first kernel slot unless z_second.
ComplexPolynomial kernel_pairing(const KernelTable& table, const MomentFunctional& mf, const Rational& s,
                                 ComplexLD ratio, const ComplexPolynomial& q,
                                 const std::function<ComplexLD(int)>& c, bool z_second) {
  require_truncation(table, q);
  const int top = table.max_degree();
  const std::size_t nv = table.dimension();
  if (top + std::max(q.degree(), 0) > mf.max_degree())
    throw DegreeRangeError("moment table of degree " + std::to_string(mf.max_degree()) + " is too small; need " +
                           std::to_string(top + q.degree()));
  auto sp = half_powers(s, top + std::max(q.degree(), 0));
  const MomentTable& mt = mf.table();
  ComplexPolynomial out(nv);
  for (int n = 0; n <= top; ++n) {
    const auto& mons = table.monomials(n);
    const RationalMatrix& e = table.block_matrix(n);
    // J[l] = L_s(q^{mons[l]} Q)
    std::vector<ComplexLD> j(mons.size(), 0);
    for (std::size_t l = 0; l < mons.size(); ++l)
      for (const auto& [m, coeff] : q.terms()) {
        Monomial k = mons[l] * m;
        if (k.degree() % 2) continue;
        j[l] += to_ld(coeff) * sp[static_cast<std::size_t>(k.degree())] * mt.at_ld(k);
      }
    ComplexLD cn = c(n) * ratio;
    for (std::size_t a = 0; a < mons.size(); ++a) {
      ComplexLD acc = 0;
      for (std::size_t b = 0; b < mons.size(); ++b) {
        const Rational& v = z_second ? e(b, a) : e(a, b);
        if (sgn(v) != 0) acc += to_long_double(v) * j[b];
      }
      out.add_term(mons[a], to_d(cn * acc));
    }
  }
  return out;
}

double top_tail(const ComplexPolynomial& p, int degree) {
  double s = 0;
  for (const auto& [m, c] : p.terms())
    if (m.degree() == degree) s += std::abs(c);
  return s;
}

HolomorphicImage make_image(Rational envelope_t, ComplexPolynomial poly, int degree) {
  HolomorphicImage img;
  img.envelope_t = std::move(envelope_t);
  img.tail = top_tail(poly, degree);
  img.poly = std::move(poly);
  img.truncation_degree = degree;
  return img;
}

std::function<ComplexLD(int)> inverse_powers(const Rational& t) {
  long double inv = 1 / to_long_double(t);
  return [inv](int n) { return ComplexLD(std::pow(inv, n), 0); };
}

void check_positive(const Rational& t, const char* what) {
  if (sgn(t) <= 0) throw InvalidParameterError(std::string(what) + " needs t > 0");
}

}  // namespace

// ---------------------------------------------------------------- moments

MomentFunctional::MomentFunctional(const DunklContext& ctx, int max_degree)
    : table_(ctx, max_degree), gamma_(ctx.gamma()), nvars_(ctx.dimension()) {}

void MomentFunctional::require(int degree) const {
  if (degree > table_.max_degree())
    throw DegreeRangeError("moment table of degree " + std::to_string(table_.max_degree()) + " is too small; need " +
                           std::to_string(degree));
}

long double MomentFunctional::monomial(const Rational& s, const Monomial& k) const {
  require(k.degree());
  if (k.degree() % 2) return 0;
  return to_long_double(pow(s, k.degree() / 2)) * table_.at_ld(k);
}

ComplexLD MomentFunctional::m(const Rational& s, const ComplexPolynomial& p) const {
  check_positive(s, "moment");
  require(p.degree());
  auto sp = half_powers(s, std::max(p.degree(), 0));
  ComplexLD total = 0;
  for (const auto& [k, c] : p.terms())
    if (k.degree() % 2 == 0) total += to_ld(c) * sp[static_cast<std::size_t>(k.degree())] * table_.at_ld(k);
  return total;
}

Rational MomentFunctional::m_exact(const Rational& s, const Polynomial& p) const {
  require(p.degree());
  return table_.moment(p, s);
}

long double MomentFunctional::measure_ratio(const Rational& t, const Rational& s) const {
  check_positive(t, "measure");
  check_positive(s, "measure");
  return std::pow(to_long_double(s / t), exponent_ld(gamma_, nvars_));
}

ComplexLD MomentFunctional::omega(const Rational& t, const Rational& s, const ComplexPolynomial& p) const {
  return measure_ratio(t, s) * m(s, p);
}

// ---------------------------------------------------------------- inputs

ComplexLD GaussianPolynomial::operator()(std::span<const ComplexLD> x) const {
  ComplexLD r2 = 0;
  for (const auto& v : x) r2 += v * v;
  return std::exp(-to_long_double(a) * r2) * evaluate_ld(poly, x);
}

GaussianPolynomial to_gaussian(const HermiteFamily& family, const HermiteSpan& span) {
  return GaussianPolynomial{1 / (4 * family.t()), to_ground_state_polynomial(family, span)};
}

ComplexPolynomial to_ground_state_polynomial(const HermiteFamily& family, const HermiteSpan& span) {
  if (span.t != family.t()) throw InvalidParameterError("Hermite span and family use different t");
  ComplexPolynomial out(family.basis().dimension());
  for (const auto& [nu, c] : span.terms) out += family.numeric(nu) * c;
  return out;
}

ComplexLD HolomorphicImage::operator()(std::span<const ComplexLD> z) const {
  ComplexLD z2 = 0;
  for (const auto& v : z) z2 += v * v;
  return std::exp(-z2 / (2 * to_long_double(envelope_t))) * evaluate_ld(poly, z);
}

namespace {
ComplexPolynomial truncate(const ComplexPolynomial& p, int d) {
  ComplexPolynomial out(p.num_variables());
  for (const auto& [m, c] : p.terms())
    if (m.degree() <= d) out.add_term(m, c);
  return out;
}
}  // namespace

ComplexPolynomial HolomorphicImage::expand(int d) const {
  const std::size_t nv = poly.num_variables();
  ComplexPolynomial sq(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    std::vector<int> e(nv, 0);
    e[i] = 2;
    sq.add_term(Monomial(e), Complex(1, 0));
  }
  const double b = -1.0 / (2 * to_double(envelope_t));
  ComplexPolynomial out(nv);
  ComplexPolynomial term = truncate(poly, d);
  for (int j = 0; !term.is_zero(); ++j) {
    out += term;
    term = truncate(term * sq, d) * Complex(b / (j + 1), 0);
  }
  return out;
}

// ---------------------------------------------------------------- transforms

HolomorphicImage transform_A(const KernelTable& table, const MomentFunctional& mf, const GaussianPolynomial& psi,
                             const Rational& t) {
  check_positive(t, "Version A transform");
  // A_t(z,q) = e^{-z^2/2t} e^{-q^2/4t} E(z/sqrt t, q/sqrt t) and E_n is
  // bihomogeneous, so E_n(z/sqrt t, q/sqrt t) = t^{-n} E_n(z, q).
  Rational s = scale_of(psi.a + 1 / (4 * t));
  ComplexLD ratio = mf.measure_ratio(t, s);
  auto p = kernel_pairing(table, mf, s, ratio, psi.poly, inverse_powers(t), false);
  return make_image(t, std::move(p), table.max_degree());
}

HolomorphicImage transform_B_direct(const KernelTable& table, const MomentFunctional& mf, const ComplexPolynomial& phi,
                                    const Rational& t) {
  check_positive(t, "Version B transform");
  // B_t(z,q) = rho(z,q)/rho(0,q) = e^{-z^2/2t} E(z/sqrt t, q/sqrt t) against dm_t.
  auto p = kernel_pairing(table, mf, t, 1.0L, phi, inverse_powers(t), false);
  return make_image(t, std::move(p), table.max_degree());
}

HolomorphicImage transform_B_composed(const KernelTable& table, const MomentFunctional& mf,
                                      const ComplexPolynomial& phi, const Rational& t) {
  return transform_A(table, mf, ground_state(t, GroundStateDirection::kInverse, GaussianPolynomial{0, phi}), t);
}

HolomorphicImage transform_C(const KernelTable& table, const MomentFunctional& mf, const GaussianPolynomial& psi,
                             const Rational& t) {
  check_positive(t, "Version C transform");
  // rho_t(z,q) = e^{-z^2/2t} e^{-q^2/2t} E(z/sqrt t, q/sqrt t)
  Rational s = scale_of(psi.a + 1 / (2 * t));
  ComplexLD ratio = mf.measure_ratio(t, s);
  auto p = kernel_pairing(table, mf, s, ratio, psi.poly, inverse_powers(t), false);
  return make_image(t, std::move(p), table.max_degree());
}

HolomorphicImage transform_C_via_A(const KernelTable& table, const MomentFunctional& mf,
                                   const GaussianPolynomial& psi, const Rational& t) {
  check_positive(t, "Version C transform");
  // A_t(0,q) = e^{-q^2/4t} since E(0,.) = 1.
  GaussianPolynomial weighted{psi.a + 1 / (4 * t), psi.poly};
  return transform_A(table, mf, weighted, t);
}

HolomorphicImage apply_G(const HolomorphicImage& f, const Rational& gamma, std::size_t nvars, const Rational& t) {
  check_positive(t, "G map");
  // f(2z) = e^{-2z^2/t_f} P(2z) and 1/A_{2t}(2z,0) = e^{z^2/t}.
  Rational b = 2 / f.envelope_t - 1 / t;
  if (sgn(b) <= 0) throw InvalidParameterError("G map leaves no decaying envelope");
  long double c = std::pow(2.0L, to_long_double(gamma) / 2 + static_cast<long double>(nvars) / 4);
  ComplexPolynomial p(f.poly.num_variables());
  for (const auto& [m, coeff] : f.poly.terms()) p.add_term(m, coeff * (static_cast<double>(c) * std::ldexp(1.0, m.degree())));
  HolomorphicImage out = make_image(1 / (2 * b), std::move(p), f.truncation_degree);
  return out;
}

HolomorphicImage transform_BSO(const KernelTable& table, const MomentFunctional& mf, const GaussianPolynomial& phi) {
  // d omega~_1 = c d omega_1, and E(sqrt2 y, sqrt2 z) = sum_n 2^n E_n(y, z) puts z in the second slot.
  const long double c = table.mms();
  const long double pre = std::pow(2.0L, exponent_ld(mf.gamma(), mf.dimension())) * std::sqrt(c);
  Rational s = scale_of(phi.a + 1);
  ComplexLD ratio = pre * mf.measure_ratio(1, s);
  auto p = kernel_pairing(table, mf, s, ratio, phi.poly, [](int n) { return ComplexLD(std::ldexp(1.0L, n), 0); }, true);
  return make_image(1, std::move(p), table.max_degree());
}

GaussianPolynomial ground_state(const Rational& t, GroundStateDirection direction, const GaussianPolynomial& f) {
  check_positive(t, "ground state transform");
  Rational shift = 1 / (4 * t);
  GaussianPolynomial out = f;
  out.a = direction == GroundStateDirection::kForward ? Rational(f.a - shift) : Rational(f.a + shift);
  if (sgn(out.a) < 0) throw InvalidParameterError("ground state transform of a function without the e^{-x^2/4t} factor");
  return out;
}

GaussianPolynomial dilate(const Rational& lambda, const GaussianPolynomial& f) {
  if (sgn(lambda) <= 0) throw InvalidParameterError("dilation needs lambda > 0");
  GaussianPolynomial out{f.a * lambda * lambda, ComplexPolynomial(f.poly.num_variables())};
  for (const auto& [m, c] : f.poly.terms()) out.poly.add_term(m, c * to_double(pow(lambda, m.degree())));
  return out;
}

HolomorphicImage dilate(const Rational& lambda, const HolomorphicImage& f) {
  if (sgn(lambda) <= 0) throw InvalidParameterError("dilation needs lambda > 0");
  ComplexPolynomial p(f.poly.num_variables());
  for (const auto& [m, c] : f.poly.terms()) p.add_term(m, c * to_double(pow(lambda, m.degree())));
  return make_image(f.envelope_t / (lambda * lambda), std::move(p), f.truncation_degree);
}

GaussianPolynomial scale(const GaussianPolynomial& f, Complex c) { return GaussianPolynomial{f.a, f.poly * c}; }

ComplexPolynomial dunkl_fourier_polynomial(const KernelTable& table, const MomentFunctional& mf,
                                           const GaussianPolynomial& psi, const Rational& t) {
  check_positive(t, "Dunkl transform");
  Rational s = scale_of(psi.a);
  ComplexLD ratio = mf.measure_ratio(t, s);
  long double inv = 1 / to_long_double(t);
  // E_n(-ik/sqrt t, x/sqrt t) = (-i)^n t^{-n} E_n(k, x)
  auto c = [inv](int n) {
    static const ComplexLD minus_i_powers[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    return minus_i_powers[n % 4] * std::pow(inv, n);
  };
  return kernel_pairing(table, mf, s, ratio, psi.poly, c, false);
}

ComplexLD dunkl_fourier(const KernelTable& table, const MomentFunctional& mf, const GaussianPolynomial& psi,
                        const Rational& t, std::span<const double> k) {
  auto p = dunkl_fourier_polynomial(table, mf, psi, t);
  std::vector<ComplexLD> kk(k.begin(), k.end());
  return evaluate_ld(p, kk);
}

long double translate_heat(const KernelTable& table, const MomentFunctional& mf, const Rational& t,
                           std::span<const double> x, std::span<const double> q) {
  check_positive(t, "Dunkl translation");
  const std::size_t nv = table.dimension();
  if (x.size() != nv || q.size() != nv) throw InvalidParameterError("point has wrong dimension");
  const int top = table.max_degree();
  if (2 * top > mf.max_degree())
    throw DegreeRangeError("Dunkl translation needs moments to degree " + std::to_string(2 * top));
  std::vector<ComplexLD> xv(x.begin(), x.end()), qv(q.begin(), q.end());
  auto px = power_table(xv, top), pq = power_table(qv, top);
  const long double inv = 1 / to_long_double(t);
  static const ComplexLD i_powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  // U(k) = sum_n E_n(k/sqrt t, iq/sqrt t) = sum_n i^n t^{-n} E_n(k, q)
  // V(k) = sum_n E_n(-ix/sqrt t, k/sqrt t) = sum_n (-i)^n t^{-n} E_n(x, k)
  std::vector<std::pair<Monomial, ComplexLD>> u, v;
  for (int n = 0; n <= top; ++n) {
    const auto& mons = table.monomials(n);
    const RationalMatrix& e = table.block_matrix(n);
    ComplexLD cu = i_powers[n % 4] * std::pow(inv, n);
    ComplexLD cv = std::conj(i_powers[n % 4]) * std::pow(inv, n);
    for (std::size_t a = 0; a < mons.size(); ++a) {
      ComplexLD su = 0, sv = 0;
      for (std::size_t b = 0; b < mons.size(); ++b) {
        su += to_long_double(e(a, b)) * monomial_value(pq, mons[b]);
        sv += to_long_double(e(b, a)) * monomial_value(px, mons[b]);
      }
      u.emplace_back(mons[a], cu * su);
      v.emplace_back(mons[a], cv * sv);
    }
  }
  auto sp = half_powers(t, 2 * top);
  const MomentTable& mt = mf.table();
  ComplexLD total = 0;
  for (const auto& [ma, ca] : u)
    for (const auto& [mb, cb] : v) {
      Monomial k = ma * mb;
      if (k.degree() % 2) continue;
      total += ca * cb * sp[static_cast<std::size_t>(k.degree())] * mt.at_ld(k);
    }
  return total.real();
}

ComplexLD convolve_heat(const KernelTable& table, const MomentFunctional& mf, const GaussianPolynomial& psi,
                        const Rational& t, std::span<const double> x) {
  check_positive(t, "Dunkl convolution");
  const std::size_t nv = table.dimension();
  if (x.size() != nv) throw InvalidParameterError("point has wrong dimension");
  require_truncation(table, psi.poly);
  const int top = table.max_degree();
  std::vector<ComplexLD> xv(x.begin(), x.end());
  auto px = power_table(xv, top);
  const long double inv = 1 / to_long_double(t);
  // rho_t(q, x) = e^{-q^2/2t} e^{-x^2/2t} sum_n t^{-n} E_n(q, x), q in the first slot.
  ComplexPolynomial w(nv);
  for (int n = 0; n <= top; ++n) {
    const auto& mons = table.monomials(n);
    const RationalMatrix& e = table.block_matrix(n);
    for (std::size_t a = 0; a < mons.size(); ++a) {
      ComplexLD s = 0;
      for (std::size_t b = 0; b < mons.size(); ++b) s += to_long_double(e(a, b)) * monomial_value(px, mons[b]);
      w.add_term(mons[a], to_d(s * std::pow(inv, n)));
    }
  }
  Rational s = scale_of(psi.a + 1 / (2 * t));
  long double x2 = 0;
  for (double v : x) x2 += static_cast<long double>(v) * v;
  return std::exp(-x2 / (2 * to_long_double(t))) * mf.omega(t, s, w * psi.poly);
}

// ---------------------------------------------------------------- inner products

FischerGram::FischerGram(const DunklContext& ctx, int max_degree) : max_degree_(max_degree), nvars_(ctx.dimension()) {
  auto g = fischer_gram(ctx, max_degree);
  for (int n = 0; n <= max_degree; ++n) {
    auto mons = monomials_of_degree(nvars_, n);
    std::map<Monomial, std::size_t> index;
    for (std::size_t k = 0; k < mons.size(); ++k) index[mons[k]] = k;
    const RationalMatrix& gn = g[static_cast<std::size_t>(n)];
    std::vector<long double> a(mons.size() * mons.size());
    for (std::size_t r = 0; r < mons.size(); ++r)
      for (std::size_t c = 0; c < mons.size(); ++c) a[r * mons.size() + c] = to_long_double(gn(r, c));
    mons_.push_back(std::move(mons));
    index_.push_back(std::move(index));
    gram_.push_back(std::move(a));
  }
}

ComplexLD FischerGram::inner(const Rational& t, const ComplexPolynomial& f1, const ComplexPolynomial& f2) const {
  check_positive(t, "B-space inner product");
  int need = std::max(f1.degree(), f2.degree());
  if (need > max_degree_)
    throw DegreeRangeError("B-space inner product needs a Fischer Gram of degree " + std::to_string(need) +
                           ", built to " + std::to_string(max_degree_));
  const long double tl = to_long_double(t);
  ComplexLD total = 0;
  for (int n = 0; n <= need; ++n) {
    const auto& idx = index_[static_cast<std::size_t>(n)];
    const auto& g = gram_[static_cast<std::size_t>(n)];
    const std::size_t d = mons_[static_cast<std::size_t>(n)].size();
    std::vector<std::pair<std::size_t, ComplexLD>> a, b;
    for (const auto& [m, c] : f1.terms())
      if (m.degree() == n) a.emplace_back(idx.at(m), std::conj(to_ld(c)));
    for (const auto& [m, c] : f2.terms())
      if (m.degree() == n) b.emplace_back(idx.at(m), to_ld(c));
    if (a.empty() || b.empty()) continue;
    ComplexLD s = 0;
    for (const auto& [ka, ca] : a)
      for (const auto& [kb, cb] : b) s += ca * cb * g[ka * d + kb];
    // [x^k, x^l]_t = t^n [x^k, x^l]_1 on degree n
    total += s * std::pow(tl, n);
  }
  return total;
}

ComplexLD bspace_inner(const FischerGram& gram, const Rational& t, const ComplexPolynomial& f1,
                       const ComplexPolynomial& f2) {
  return gram.inner(t, f1, f2);
}

ComplexLD bspace_inner(const FischerGram& gram, const Rational& t, const HolomorphicImage& f1,
                       const HolomorphicImage& f2) {
  auto e1 = f1.expand(std::min(f1.truncation_degree, gram.max_degree()));
  auto e2 = f2.expand(std::min(f2.truncation_degree, gram.max_degree()));
  return gram.inner(t, e1, e2);
}

ComplexLD cspace_inner(const FischerGram& gram, const Rational& gamma, const Rational& t, const HolomorphicImage& f1,
                       const HolomorphicImage& f2) {
  auto g1 = apply_G(f1, gamma, gram.dimension(), t);
  auto g2 = apply_G(f2, gamma, gram.dimension(), t);
  return bspace_inner(gram, t / 2, g1, g2);
}

// ---------------------------------------------------------------- exact norms

bool operator==(const ScaledValue& a, const ScaledValue& b) {
  if (!(a.coefficient == b.coefficient)) return false;
  if (a.coefficient.is_zero()) return true;
  return a.exponent == b.exponent && a.base == b.base;
}

ScaledValue ScaledValue::rebased(const Rational& factor) const { return ScaledValue{coefficient, base * factor, exponent}; }

long double ScaledValue::value() const {
  long double c = 0;
  for (const auto& [r, p] : coefficient.components())
    c += std::sqrt(to_long_double(r)) * to_long_double(p.coefficient(Monomial{}));
  return c * std::pow(to_long_double(base), to_long_double(exponent));
}

ScaledValue omega_norm_exact(const MomentFunctional& mf, const Rational& s, const Rational& a,
                             const SurdPolynomial& q) {
  check_positive(s, "norm");
  // |psi|^2 = e^{-2a x^2} Q^2, i.e. a Gaussian of scale sigma = 1/(4a).
  Rational sigma = scale_of(2 * a);
  SurdPolynomial sq = q * q;
  SurdPolynomial coefficient;
  for (const auto& [r, p] : sq.components())
    coefficient += SurdPolynomial(r, Polynomial::constant(mf.dimension(), mf.m_exact(sigma, p)));
  return ScaledValue{coefficient, sigma / s, mf.gamma() + make_rational(static_cast<long>(mf.dimension()), 2)};
}

}  // namespace dunklsb
