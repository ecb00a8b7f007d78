#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "dunklsb/error.hpp"
#include "dunklsb/transforms.hpp"
#include "support.hpp"

using namespace dunklsb;
using testing_support::context;
using testing_support::random_point;

namespace {

struct Fixture {
  DunklContext ctx;
  OrthogonalBasis basis;
  KernelTable table;
  MomentFunctional mf;
  Fixture(DunklContext c, int basis_degree, int truncation)
      : ctx(std::move(c)),
        basis(build_orthogonal_basis(ctx, basis_degree)),
        table(KernelTable::linear_solve(ctx, truncation)),
        mf(ctx, 2 * truncation + 2 * basis_degree) {}
};

HermiteSpan single(const Rational& t, const Monomial& nu, Complex c = Complex(1, 0)) { return HermiteSpan{t, {{nu, c}}}; }

// phi_{t;nu}(z) = t^{-|nu|/2} q_nu(z) / sqrt(r_nu)
ComplexPolynomial phi_t(const OrthogonalBasis& basis, const Rational& t, const Monomial& nu) {
  const auto& e = basis.at(nu);
  double s = std::pow(to_double(t), -0.5 * nu.degree()) / std::sqrt(to_double(e.r));
  return to_complex(e.q) * Complex(s, 0);
}

double max_diff(const HolomorphicImage& a, const HolomorphicImage& b, const std::vector<std::vector<ComplexLD>>& pts) {
  double worst = 0;
  for (const auto& z : pts) worst = std::max(worst, static_cast<double>(std::abs(a(z) - b(z))));
  return worst;
}

std::vector<std::vector<ComplexLD>> sample(std::size_t n, double radius, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<ComplexLD>> out;
  for (int i = 0; i < count; ++i) out.push_back(random_point(rng, n, radius));
  return out;
}

// Truncated E(a, k) as a polynomial in k for a fixed numeric a in the first slot.
ComplexPolynomial kernel_in_second_slot(const KernelTable& table, std::span<const ComplexLD> a) {
  ComplexPolynomial out(table.dimension());
  for (int n = 0; n <= table.max_degree(); ++n) {
    const auto& mons = table.monomials(n);
    const auto& e = table.block_matrix(n);
    for (std::size_t i = 0; i < mons.size(); ++i) {
      ComplexLD av = 1;
      for (std::size_t j = 0; j < a.size(); ++j) av *= std::pow(a[j], mons[i][j]);
      for (std::size_t k = 0; k < mons.size(); ++k) {
        ComplexLD c = av * to_long_double(e(i, k));
        out.add_term(mons[k], Complex(static_cast<double>(c.real()), static_cast<double>(c.imag())));
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("Version A maps Hermite functions to the phi basis") {
  Fixture f(context("B", 2, {"1/2", "3/2"}), 4, 24);
  for (std::string ts : {"1/2", "1", "2"}) {
    Rational t = parse_rational(ts);
    HermiteFamily family(f.ctx, f.basis, t);
    auto pts = sample(2, 1.2 * std::sqrt(to_double(t)), 20, 1);
    auto img0 = transform_A(f.table, f.mf, to_gaussian(family, single(t, Monomial{0, 0})), t);
    for (const auto& z : pts) CHECK(static_cast<double>(std::abs(img0(z) - 1.0L)) <= 1e-12);
    for (const auto& e : f.basis.elements()) {
      if (e.nu.degree() > 3) continue;
      auto img = transform_A(f.table, f.mf, to_gaussian(family, single(t, e.nu)), t);
      auto phi = phi_t(f.basis, t, e.nu);
      for (const auto& z : pts) CHECK(static_cast<double>(std::abs(img(z) - evaluate_ld(phi, z))) <= 1e-8);
    }
    // linearity on two-term spans
    HermiteSpan span{t, {{Monomial{1, 0}, Complex(0.5, -1)}, {Monomial{0, 2}, Complex(2, 0.25)}}};
    auto whole = transform_A(f.table, f.mf, to_gaussian(family, span), t);
    auto a = transform_A(f.table, f.mf, to_gaussian(family, single(t, Monomial{1, 0})), t);
    auto b = transform_A(f.table, f.mf, to_gaussian(family, single(t, Monomial{0, 2})), t);
    for (const auto& z : pts)
      CHECK(static_cast<double>(std::abs(whole(z) - ComplexLD(0.5, -1) * a(z) - ComplexLD(2, 0.25) * b(z))) <= 1e-12);
  }
}

TEST_CASE("transforms refuse too low a truncation") {
  Fixture f(context("B", 2, {"1/2", "3/2"}), 4, 6);
  HermiteFamily family(f.ctx, f.basis, 1);
  CHECK_NOTHROW(transform_A(f.table, f.mf, to_gaussian(family, single(1, Monomial{2, 0})), 1));
  CHECK_THROWS_AS(transform_A(f.table, f.mf, to_gaussian(family, single(1, Monomial{3, 0})), 1), DegreeRangeError);
  CHECK_THROWS_AS(transform_C(f.table, f.mf, to_gaussian(family, single(1, Monomial{3, 0})), 1), DegreeRangeError);
}

TEST_CASE("Version B paths") {
  Fixture f(context("A1^N", 2, {"1", "2"}), 4, 24);
  for (std::string ts : {"1/2", "2"}) {
    Rational t = parse_rational(ts);
    HermiteFamily family(f.ctx, f.basis, t);
    auto pts = sample(2, 1.2 * std::sqrt(to_double(t)), 20, 2);
    for (const auto& e : f.basis.elements()) {
      if (e.nu.degree() > 3) continue;
      auto h = family.numeric(e.nu);
      auto direct = transform_B_direct(f.table, f.mf, h, t);
      auto composed = transform_B_composed(f.table, f.mf, h, t);
      CHECK(max_diff(direct, composed, pts) <= 1e-10);
      auto phi = phi_t(f.basis, t, e.nu);
      for (const auto& z : pts) CHECK(static_cast<double>(std::abs(direct(z) - evaluate_ld(phi, z))) <= 1e-8);
      // B V psi = A psi
      auto psi = to_gaussian(family, single(t, e.nu));
      auto vpsi = ground_state(t, GroundStateDirection::kForward, psi);
      CHECK(vpsi.a == 0);
      CHECK(max_diff(transform_B_direct(f.table, f.mf, vpsi.poly, t), transform_A(f.table, f.mf, psi, t), pts) <=
            1e-10);
    }
    auto one = transform_B_direct(f.table, f.mf, ComplexPolynomial::constant(2, Complex(1, 0)), t);
    for (const auto& z : pts) CHECK(static_cast<double>(std::abs(one(z) - 1.0L)) <= 1e-12);
  }
}

TEST_CASE("ground state transform") {
  auto ctx = context("B", 2, {"1/2", "3/2"});
  auto basis = build_orthogonal_basis(ctx, 4);
  MomentFunctional mf(ctx, 8);
  for (std::string ts : {"1/2", "1", "2"}) {
    Rational t = parse_rational(ts);
    HermiteFamily family(ctx, basis, t);
    GaussianPolynomial h{0, family.numeric(Monomial{2, 1})};
    auto back = ground_state(t, GroundStateDirection::kForward, ground_state(t, GroundStateDirection::kInverse, h));
    CHECK(back.a == 0);
    CHECK(back.poly == h.poly);
    auto g = ground_state(t, GroundStateDirection::kInverse, GaussianPolynomial{0, family.numeric(Monomial{0, 0})});
    CHECK(g.a == 1 / (4 * t));
    CHECK(g.poly == ComplexPolynomial::constant(2, Complex(1, 0)));
    // |V^{-1} phi|^2 in L^2(omega_t) equals |phi|^2 in L^2(m_t), exactly
    Polynomial q = hermite_core(ctx, basis, t, Monomial{1, 1}) * make_rational(2, 3) +
                   hermite_core(ctx, basis, t, Monomial{2, 0}) * make_rational(-1, 5);
    ScaledValue lhs = omega_norm_exact(mf, t, 1 / (4 * t), SurdPolynomial(q));
    CHECK(lhs.base == 1);
    CHECK(lhs.coefficient == SurdPolynomial(Polynomial::constant(2, gaussian_moment(ctx, q * q, t))));
  }
  CHECK_THROWS_AS(ground_state(1, GroundStateDirection::kForward, GaussianPolynomial{0, ComplexPolynomial(2)}),
                  InvalidParameterError);
}

TEST_CASE("Version C") {
  Fixture f(context("B", 2, {"1/2", "3/2"}), 4, 24);
  for (std::string ts : {"1/2", "1", "2"}) {
    Rational t = parse_rational(ts);
    HermiteFamily family(f.ctx, f.basis, t);
    auto pts = sample(2, 1.2 * std::sqrt(to_double(t)), 20, 3);
    for (const auto& e : f.basis.elements()) {
      if (e.nu.degree() > 3) continue;
      auto psi = to_gaussian(family, single(t, e.nu));
      auto c = transform_C(f.table, f.mf, psi, t);
      CHECK(max_diff(c, transform_C_via_A(f.table, f.mf, psi, t), pts) <= 1e-10);
      for (const auto& z : pts) {
        std::vector<double> x{static_cast<double>(z[0].real()), static_cast<double>(z[1].real())};
        std::vector<ComplexLD> xr{x[0], x[1]};
        CHECK(static_cast<double>(std::abs(convolve_heat(f.table, f.mf, psi, t, x) - c(xr))) <= 1e-8);
      }
      // G C = 2^{-(gamma/2 + N/4)} A_{t/2}
      auto gc = apply_G(c, f.ctx.gamma(), 2, t);
      auto a_half = transform_A(f.table, f.mf, psi, t / 2);
      const long double k = std::pow(2.0L, -(to_long_double(f.ctx.gamma()) / 2 + 0.5L));
      for (const auto& z : pts) CHECK(static_cast<double>(std::abs(gc(z) - k * a_half(z))) <= 1e-8);
    }
  }
  // mu = 0, N = 1: C_t of e^{-q^2/4t} is sqrt(2/3) e^{-z^2/6t}
  Fixture g(context("A1^N", 1, {"0"}), 2, 30);
  for (std::string ts : {"1/2", "1", "2"}) {
    Rational t = parse_rational(ts);
    HermiteFamily family(g.ctx, g.basis, t);
    auto c = transform_C(g.table, g.mf, to_gaussian(family, single(t, Monomial{0})), t);
    const long double tl = to_long_double(t);
    for (double r : {-1.0, -0.3, 0.0, 0.4, 1.1}) {
      std::vector<ComplexLD> z{ComplexLD(r, 0.5 * r)};
      ComplexLD expected = std::sqrt(2.0L / 3) * std::exp(-z[0] * z[0] / (6 * tl));
      CHECK(static_cast<double>(std::abs(c(z) - expected)) <= 1e-12);
      std::vector<double> x{r};
      ComplexLD conv = convolve_heat(g.table, g.mf, to_gaussian(family, single(t, Monomial{0})), t, x);
      CHECK(static_cast<double>(std::abs(conv - std::sqrt(2.0L / 3) * std::exp(-r * r / (6 * tl)))) <= 1e-12);
    }
  }
}

TEST_CASE("Dunkl transform of the Gaussian") {
  for (auto ctx : {context("A1^N", 1, {"0"}), context("A1^N", 1, {"1/2"}), context("B", 2, {"1/2", "3/2"})}) {
    Fixture f(ctx, 2, 40);
    const std::size_t n = f.ctx.dimension();
    for (std::string ts : {"1/2", "1", "2"}) {
      Rational t = parse_rational(ts);
      GaussianPolynomial sigma{1 / (2 * t), ComplexPolynomial::constant(n, Complex(1, 0))};
      for (double r : {0.0, 0.3, 0.8, 1.3}) {
        std::vector<double> k(n, r / std::sqrt(static_cast<double>(n)));
        long double k2 = r * r;
        ComplexLD v = dunkl_fourier(f.table, f.mf, sigma, t, k);
        CHECK(static_cast<double>(std::abs(v - std::exp(-k2 / (2 * to_long_double(t))))) <= 1e-10);
      }
    }
  }
}

TEST_CASE("Dunkl transform Plancherel against a generalized Gauss-Hermite rule") {
  // At t = 1, F h_nu is e^{-k^2} times a polynomial of degree |nu|, so the
  // Gram integrand is a polynomial against |k|^{2 mu} e^{-2k^2}. Golub-Welsch
  // for |x|^{2 mu} e^{-x^2/2s}: monic recursion coefficient s (n + 2 mu [n odd]).
  const double mu = 0.5, s = 0.25;
  Fixture f(context("A1^N", 1, {"1/2"}), 3, 40);
  const int nodes = 6;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(nodes, nodes);
  for (int i = 1; i < nodes; ++i) jac(i, i - 1) = jac(i - 1, i) = std::sqrt(s * (i + (i % 2 ? 2 * mu : 0.0)));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jac);
  // total mass of e^{-2k^2} d omega_1 is s^{gamma + 1/2}
  const double mass = std::pow(s, mu + 0.5);
  Rational t = 1;
  HermiteFamily family(f.ctx, f.basis, t);
  std::vector<ComplexPolynomial> fh;
  for (const auto& e : f.basis.elements())
    fh.push_back(dunkl_fourier_polynomial(f.table, f.mf, to_gaussian(family, single(t, e.nu)), t));
  const auto d = static_cast<Eigen::Index>(fh.size());
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(d, d);
  for (int j = 0; j < nodes; ++j) {
    const double w = mass * eig.eigenvectors()(0, j) * eig.eigenvectors()(0, j);
    const double k = eig.eigenvalues()(j);
    std::vector<ComplexLD> kv{ComplexLD(k)};
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index b = 0; b < d; ++b) {
        ComplexLD v = std::conj(evaluate_ld(fh[static_cast<std::size_t>(a)], kv)) *
                      evaluate_ld(fh[static_cast<std::size_t>(b)], kv) * std::exp(2.0L * k * k);
        gram(a, b) += w * std::complex<double>(static_cast<double>(v.real()), static_cast<double>(v.imag()));
      }
  }
  CHECK((gram - Eigen::MatrixXcd::Identity(d, d)).norm() <= 1e-6);
}

TEST_CASE("Dunkl translation of the Gaussian") {
  for (std::string m : {"1/2", "1"}) {
    Fixture f(context("A1^N", 1, {m}), 2, 24);
    for (std::string ts : {"1/2", "1", "2"}) {
      Rational t = parse_rational(ts);
      const double st = std::sqrt(to_double(t));
      for (int i = -2; i <= 2; ++i) {
        std::vector<double> zero{0.0}, q{i * 0.5 * st};
        std::vector<ComplexLD> qz{q[0]};
        CHECK(static_cast<double>(std::abs(translate_heat(f.table, f.mf, t, zero, q) -
                                           one_variable_heat_kernel(t, qz).real())) <= 1e-12);
        for (int j = -2; j <= 2; ++j) {
          std::vector<double> x{j * 0.5 * st};
          std::vector<ComplexLD> xz{x[0]};
          CHECK(static_cast<double>(std::abs(translate_heat(f.table, f.mf, t, x, q) -
                                             heat_kernel(f.table, t, xz, qz).value.real())) <= 1e-8);
        }
      }
    }
  }
  Fixture g(context("B", 2, {"0", "0"}), 2, 24);
  std::vector<double> x{0.4, -0.3}, q{-0.2, 0.5};
  CHECK(static_cast<double>(std::abs(translate_heat(g.table, g.mf, 1, x, q) - std::exp(-(0.36L + 0.64L) / 2))) <= 1e-10);
}

TEST_CASE("imported product formulas as cross-checks") {
  Fixture f(context("B", 2, {"1/2", "3/2"}), 2, 24);
  std::mt19937_64 rng(21);
  for (int i = 0; i < 10; ++i) {
    auto z = random_point(rng, 2, 0.8), w = random_point(rng, 2, 0.8);
    // int d omega_1(k) E(k, z) E(k, w) e^{-k^2/2} = e^{(z^2 + w^2)/2} E(z, w)
    auto ez = kernel_in_second_slot(f.table, z), ew = kernel_in_second_slot(f.table, w);
    ComplexLD lhs = f.mf.m(1, ez * ew);
    ComplexLD rhs = std::exp((holomorphic_square(z) + holomorphic_square(w)) / 2.0L) *
                    eval_dunkl_kernel(f.table, z, w).value;
    CHECK(static_cast<double>(std::abs(lhs - rhs)) <= 1e-10);
    // int d omega_1(x) (e^{-Delta/2} p)(x) E(x, w) e^{-x^2/2} = e^{w^2/2} p(w)
    Polynomial p = Polynomial::monomial(2, Monomial{2, 1}) + Polynomial::monomial(2, Monomial{0, 2}, 3);
    ComplexLD lhs2 = f.mf.m(1, to_complex(heat_apply(f.ctx, -1, p)) * ew);
    CHECK(static_cast<double>(std::abs(lhs2 - std::exp(holomorphic_square(w) / 2.0L) * evaluate_ld(to_complex(p), w))) <=
          1e-10);
  }
}

TEST_CASE("B-space inner product") {
  Fixture f(context("B", 2, {"1/2", "3/2"}), 4, 24);
  FischerGram gram(f.ctx, 24);
  for (std::string ts : {"1/2", "2"}) {
    Rational t = parse_rational(ts);
    const auto& el = f.basis.elements();
    for (const auto& a : el)
      for (const auto& b : el) {
        ComplexLD v = bspace_inner(gram, t, phi_t(f.basis, t, a.nu), phi_t(f.basis, t, b.nu));
        CHECK(static_cast<double>(std::abs(v - (a.nu == b.nu ? 1.0L : 0.0L))) <= 1e-14);
      }
    // exact on rational polynomials
    std::mt19937_64 rng(4);
    Polynomial p = testing_support::random_polynomial(rng, 2, 4), q = testing_support::random_polynomial(rng, 2, 4);
    CHECK(static_cast<double>(std::abs(bspace_inner(gram, t, to_complex(p), to_complex(q)) -
                                       to_long_double(fischer_pair(f.ctx, p, q, t)))) <= 1e-12);
    CHECK(bspace_inner(gram, t, to_complex(p), to_complex(p)).real() > 0);
    // anti-linear first slot
    ComplexLD i1 = bspace_inner(gram, t, to_complex(p) * Complex(0, 1), to_complex(q));
    CHECK(static_cast<double>(std::abs(i1 + ComplexLD(0, 1) * bspace_inner(gram, t, to_complex(p), to_complex(q)))) <=
          1e-12);
    // reproducing property of the truncated kernel
    for (const auto& z : sample(2, 1.0, 5, 8)) {
      std::vector<ComplexLD> zc{std::conj(z[0]) / std::sqrt(to_long_double(t)), std::conj(z[1]) / std::sqrt(to_long_double(t))};
      ComplexPolynomial k = kernel_in_second_slot(f.table, zc);
      ComplexPolynomial kz(2);
      for (const auto& [m, c] : k.terms()) kz.add_term(m, c * std::pow(to_double(t), -0.5 * m.degree()));
      ComplexLD v = bspace_inner(gram, t, kz, to_complex(p));
      CHECK(static_cast<double>(std::abs(v - evaluate_ld(to_complex(p), z))) <= 1e-8);
    }
  }
  FischerGram small(f.ctx, 3);
  CHECK_THROWS_AS(small.inner(1, to_complex(f.basis.at(Monomial{4, 0}).q), to_complex(f.basis.at(Monomial{0, 0}).q)),
                  DegreeRangeError);
}

TEST_CASE("A-unitarity and Parseval") {
  Fixture f(context("B", 2, {"1/2", "3/2"}), 4, 24);
  FischerGram gram(f.ctx, 24);
  Rational t = 1;
  HermiteFamily family(f.ctx, f.basis, t);
  std::vector<HolomorphicImage> imgs;
  for (const auto& e : f.basis.elements())
    imgs.push_back(transform_A(f.table, f.mf, to_gaussian(family, single(t, e.nu)), t));
  for (std::size_t a = 0; a < imgs.size(); ++a)
    for (std::size_t b = 0; b < imgs.size(); ++b)
      CHECK(static_cast<double>(std::abs(bspace_inner(gram, t, imgs[a], imgs[b]) - (a == b ? 1.0L : 0.0L))) <= 1e-6);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 5; ++i) {
    HermiteSpan span{t, {}};
    double norm2 = 0;
    for (int j = 0; j < 3; ++j) {
      const auto& e = f.basis.elements()[static_cast<std::size_t>(i * 3 + j) % f.basis.elements().size()];
      Complex c(u(rng), u(rng));
      span.terms.push_back({e.nu, c});
      norm2 += std::norm(c);
    }
    auto img = transform_A(f.table, f.mf, to_gaussian(family, span), t);
    CHECK(static_cast<double>(std::abs(bspace_inner(gram, t, img, img) - static_cast<long double>(norm2))) <= 1e-6);
  }
}

TEST_CASE("C-space inner product and the measure scale relation") {
  Fixture f(context("A1^N", 2, {"1", "2"}), 2, 24);
  FischerGram gram(f.ctx, 24);
  for (std::string ts : {"1/2", "1", "2"}) {
    Rational t = parse_rational(ts);
    HermiteFamily family(f.ctx, f.basis, t);
    for (const auto& e : f.basis.elements()) {
      auto c = transform_C(f.table, f.mf, to_gaussian(family, single(t, e.nu)), t);
      ComplexLD v = cspace_inner(gram, f.ctx.gamma(), t, c, c);
      CHECK(v.real() >= 0);
      CHECK(static_cast<double>(std::abs(v - 1.0L)) <= 1e-6);
    }
    // <psi, psi>_{omega_{t/2}} = 2^{gamma + N/2} <psi, psi>_{omega_t}, with the
    // t/2 side from the semigroup route
    Polynomial q = hermite_core(f.ctx, f.basis, t, Monomial{1, 1}) + hermite_core(f.ctx, f.basis, t, Monomial{2, 0});
    const Rational a = 1 / (4 * t), sigma = 1 / (4 * a);
    ScaledValue half = omega_norm_exact(f.mf, t / 2, a, SurdPolynomial(q));
    ScaledValue full = omega_norm_exact(f.mf, t, a, SurdPolynomial(q));
    ScaledValue semigroup{SurdPolynomial(Polynomial::constant(2, gaussian_moment(f.ctx, q * q, sigma))), sigma / t,
                          full.exponent};
    CHECK(half == full.rebased(2));
    CHECK(half == semigroup.rebased(2));
    CHECK(full.exponent == f.ctx.gamma() + 1);
  }
}
