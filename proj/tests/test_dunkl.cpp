#include <random>

#include "doctest.h"
#include "dunklsb/dunkl.hpp"
#include "dunklsb/error.hpp"
#include "support.hpp"

using namespace dunklsb;
using testing_support::context;
using testing_support::monomials_up_to;
using testing_support::random_polynomial;

namespace {

std::vector<Rational> basis_vector(std::size_t n, std::size_t i) {
  std::vector<Rational> v(n, Rational(0));
  v[i] = 1;
  return v;
}

// Classical directional derivative, written out independently.
Polynomial derivative(const Polynomial& p, const std::vector<Rational>& xi) {
  Polynomial out(p.num_variables());
  for (const auto& [m, c] : p.terms())
    for (std::size_t i = 0; i < xi.size(); ++i)
      if (m[i] > 0) out.add_term(m.lowered(i), c * m[i] * xi[i]);
  return out;
}

SurdPolynomial heat_surd(const DunklContext& ctx, const Rational& tau, const SurdPolynomial& p) {
  SurdPolynomial out;
  for (const auto& [r, q] : p.components()) out += SurdPolynomial(r, heat_apply(ctx, tau, q));
  return out;
}

}  // namespace

TEST_CASE("trivial multiplicity reduces to derivatives") {
  for (auto ctx : {context("B", 2, {"0", "0"}), context("A1^N", 2, {"0", "0"}), context("A", 3, {"0"})}) {
    const std::size_t n = ctx.dimension();
    std::vector<Rational> xi(n);
    for (std::size_t i = 0; i < n; ++i) xi[i] = make_rational(static_cast<long>(2 * i + 1), 3);
    for (const auto& m : monomials_up_to(n, 6)) {
      Polynomial p = Polynomial::monomial(n, m);
      CHECK(dunkl_apply(ctx, xi, p) == derivative(p, xi));
      Polynomial lap(n);
      for (std::size_t i = 0; i < n; ++i) lap += p.partial(i).partial(i);
      CHECK(dunkl_laplacian(ctx, p) == lap);
    }
  }
  auto ctx = context("A1^N", 2, {"0", "0"});
  Polynomial x1 = Polynomial::variable(2, 0), x2 = Polynomial::variable(2, 1);
  CHECK(dunkl_apply(ctx, 0, x1 * x1) == x1 * Rational(2));
  CHECK(dunkl_laplacian(ctx, x1 * x1 * x2) == x2 * Rational(2));
}

TEST_CASE("Z2 Dunkl operator matches the one-dimensional recursion") {
  for (std::string m : {"1/2", "1", "7/3"}) {
    auto ctx = context("A1^N", 1, {m});
    Rational mu = parse_rational(m);
    Polynomial x = Polynomial::variable(1, 0);
    CHECK(dunkl_apply(ctx, 0, x) == Polynomial::constant(1, 1 + 2 * mu));
    CHECK(dunkl_apply(ctx, 0, x * x) == x * Rational(2));
    for (int n = 1; n <= 12; ++n) {
      Polynomial xn = Polynomial::monomial(1, Monomial{n});
      Rational factor = n + (n % 2 == 1 ? 2 * mu : Rational(0));
      CHECK(dunkl_apply(ctx, 0, xn) == Polynomial::monomial(1, Monomial{n - 1}, factor));
    }
  }
}

TEST_CASE("Dunkl operators commute exactly") {
  std::vector<DunklContext> ctxs = {context("B", 2, {"1/2", "3/2"}), context("A1^N", 2, {"1", "2"}),
                                    context("I2", 2, {"2/3", "1/5"}, 4)};
  for (const auto& ctx : ctxs) {
    CAPTURE(ctx.root_system().label());
    for (const auto& m : monomials_up_to(2, 6)) {
      Polynomial p = Polynomial::monomial(2, m);
      Polynomial a = dunkl_apply(ctx, 0, dunkl_apply(ctx, 1, p));
      Polynomial b = dunkl_apply(ctx, 1, dunkl_apply(ctx, 0, p));
      CHECK((a - b).is_zero());
    }
  }
  auto a2 = context("A", 3, {"3/4"});
  for (const auto& m : monomials_up_to(3, 5))
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j) {
        Polynomial p = Polynomial::monomial(3, m);
        CHECK(dunkl_apply(a2, i, dunkl_apply(a2, j, p)) == dunkl_apply(a2, j, dunkl_apply(a2, i, p)));
      }
}

TEST_CASE("explicit rational roots take the general composition path") {
  // B2 rotated by the rational rotation (3/5, 4/5): reflections are no longer
  // signed permutations.
  RootSystemSpec spec;
  spec.family = "explicit";
  spec.n = 2;
  auto rot = [](int a, int b) {
    Rational x(a), y(b);
    return std::vector<std::string>{format_rational(make_rational(3, 5) * x - make_rational(4, 5) * y),
                                    format_rational(make_rational(4, 5) * x + make_rational(3, 5) * y)};
  };
  for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 0}, {0, 1}, {1, 1}, {1, -1}}) {
    spec.rational_roots.push_back(rot(a, b));
    spec.rational_roots.push_back(rot(-a, -b));
  }
  auto ctx = DunklContext::from_spec(spec, {make_rational(1, 2), make_rational(3, 2)});
  bool any_general = false;
  for (const auto& t : ctx.terms()) any_general = any_general || !t.signed_permutation;
  CHECK(any_general);
  for (const auto& m : monomials_up_to(2, 5)) {
    Polynomial p = Polynomial::monomial(2, m);
    CHECK(dunkl_apply(ctx, 0, dunkl_apply(ctx, 1, p)) == dunkl_apply(ctx, 1, dunkl_apply(ctx, 0, p)));
  }
  // Laplacian of |x|^2 is a rotation invariant.
  Polynomial r2 = Polynomial::variable(2, 0) * Polynomial::variable(2, 0) +
                  Polynomial::variable(2, 1) * Polynomial::variable(2, 1);
  CHECK(dunkl_laplacian(ctx, r2) == Polynomial::constant(2, 4 + 4 * ctx.gamma()));
}

TEST_CASE("floating regime Dunkl operator") {
  auto ctx = context("I2", 2, {"1/2"}, 3);
  REQUIRE(ctx.regime() == Regime::kFloating);
  CHECK_THROWS_AS(dunkl_apply(ctx, 0, Polynomial::variable(2, 0)), RegimeError);
  RealPolynomial x = RealPolynomial::variable(2, 0), y = RealPolynomial::variable(2, 1);
  RealPolynomial r2 = x * x + y * y;
  std::vector<double> e1 = {1, 0}, e2 = {0, 1};
  RealPolynomial lap = dunkl_apply(ctx, e1, dunkl_apply(ctx, e1, r2)) + dunkl_apply(ctx, e2, dunkl_apply(ctx, e2, r2));
  // 2N + 4 gamma with gamma = 3/2.
  REQUIRE(lap.size() == 1);
  CHECK(lap.coefficient(Monomial{0, 0}) == doctest::Approx(4 + 6).epsilon(1e-12));
  RealPolynomial p = x * x * x * y + y * y * x;
  RealPolynomial ab = dunkl_apply(ctx, e1, dunkl_apply(ctx, e2, p)) - dunkl_apply(ctx, e2, dunkl_apply(ctx, e1, p));
  for (const auto& [m, c] : ab.terms()) CHECK(std::abs(c) < 1e-12);
}

TEST_CASE("Dunkl Laplacian") {
  for (auto ctx : {context("B", 2, {"1/2", "3/2"}), context("A1^N", 2, {"1", "2"}), context("A", 3, {"1/3"})}) {
    const std::size_t n = ctx.dimension();
    Polynomial r2(n);
    for (std::size_t i = 0; i < n; ++i) r2 += Polynomial::variable(n, i) * Polynomial::variable(n, i);
    CHECK(dunkl_laplacian(ctx, r2) == Polynomial::constant(n, Rational(static_cast<long>(2 * n)) + 4 * ctx.gamma()));
    for (std::size_t i = 0; i < n; ++i) CHECK(dunkl_laplacian(ctx, Polynomial::variable(n, i)).is_zero());
  }
  auto ctx = context("B", 2, {"1/2", "3/2"});
  RationalMatrix frame(2, 2);
  frame(0, 0) = make_rational(3, 5);
  frame(0, 1) = make_rational(4, 5);
  frame(1, 0) = make_rational(-4, 5);
  frame(1, 1) = make_rational(3, 5);
  for (const auto& m : monomials_up_to(2, 4)) {
    Polynomial p = Polynomial::monomial(2, m);
    CHECK(dunkl_laplacian(ctx, p, &frame) == dunkl_laplacian(ctx, p));
  }
}

TEST_CASE("heat semigroup") {
  auto trivial = context("A1^N", 1, {"0"});
  Polynomial x = Polynomial::variable(1, 0);
  CHECK(heat_apply(trivial, Rational(-1), x * x) == x * x - Polynomial::constant(1, 1));
  auto ctx = context("B", 2, {"1/2", "3/2"});
  CHECK(heat_apply(ctx, Rational(3), Polynomial::constant(2, 1)) == Polynomial::constant(2, 1));
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 6; ++trial) {
    Polynomial p = random_polynomial(rng, 2, 6);
    Rational a = make_rational(trial - 3, 4), b = make_rational(5, 3);
    CHECK(heat_apply(ctx, a, heat_apply(ctx, b, p)) == heat_apply(ctx, a + b, p));
    CHECK(heat_apply(ctx, -a, heat_apply(ctx, a, p)) == p);
  }
  // A degree-4 input produces exactly the k = 0, 1, 2 terms.
  Polynomial q = Polynomial::monomial(2, Monomial{4, 0});
  Polynomial lap = dunkl_laplacian(ctx, q);
  Polynomial lap2 = dunkl_laplacian(ctx, lap);
  CHECK(!lap2.is_zero());
  CHECK(dunkl_laplacian(ctx, lap2).is_zero());
  CHECK(heat_apply(ctx, Rational(2), q) == q + lap + lap2 * make_rational(1, 2));
}

TEST_CASE("dilation") {
  auto ctx = context("B", 2, {"1/2", "3/2"});
  Polynomial m = Polynomial::monomial(2, Monomial{2, 1});
  CHECK(dilate(Rational(3), m) == m * Rational(27));
  CHECK(dilate(Rational(1), m) == m);
  CHECK_THROWS_AS(dilate(Rational(-1), m), InvalidParameterError);
  for (std::string ts : {"1/2", "2", "3"}) {
    Rational t = parse_rational(ts);
    Surd lam = Surd::sqrt(1 / t);
    for (const auto& mono : monomials_up_to(2, 6)) {
      Polynomial p = Polynomial::monomial(2, mono);
      SurdPolynomial lhs = heat_surd(ctx, -t, dilate(lam, p));
      SurdPolynomial rhs = dilate(lam, heat_apply(ctx, Rational(-1), p));
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("Fischer pairing") {
  auto ctx = context("B", 2, {"1/2", "3/2"});
  Polynomial one = Polynomial::constant(2, 1);
  CHECK(fischer_pair(ctx, one, one, Rational(1)) == 1);
  CHECK(fischer_pair(ctx, Polynomial::monomial(2, Monomial{2, 0}), Polynomial::monomial(2, Monomial{1, 0}),
                     Rational(1)) == 0);
  for (std::string m : {"1/2", "1"}) {
    auto z2 = context("A1^N", 1, {m});
    Polynomial x = Polynomial::variable(1, 0);
    CHECK(fischer_pair(z2, x, x, Rational(1)) == 1 + 2 * parse_rational(m));
  }
  CHECK_THROWS_AS(fischer_pair(ctx, one, one, Rational(0)), InvalidParameterError);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 4; ++trial) {
    Polynomial p = random_polynomial(rng, 2, 6), q = random_polynomial(rng, 2, 6);
    for (std::string ts : {"1/2", "1", "2"}) {
      Rational t = parse_rational(ts);
      Rational pq = fischer_pair(ctx, p, q, t);
      CHECK(pq == fischer_pair(ctx, q, p, t));
      // [p,q]_t = <e^{-t Delta/2} p, e^{-t Delta/2} q> in L^2(m_t).
      Polynomial hp = heat_apply(ctx, -t, p), hq = heat_apply(ctx, -t, q);
      CHECK(pq == gaussian_moment(ctx, hp * hq, t));
    }
  }
}

TEST_CASE("Gaussian moments") {
  auto trivial = context("A1^N", 1, {"0"});
  Polynomial x = Polynomial::variable(1, 0);
  CHECK(gaussian_moment(trivial, x * x, Rational(1)) == 1);
  for (std::string m : {"1/2", "1"}) {
    auto z2 = context("A1^N", 1, {m});
    CHECK(gaussian_moment(z2, x * x, Rational(1)) == 1 + 2 * parse_rational(m));
  }
  auto ctx = context("B", 2, {"1/2", "3/2"});
  for (std::string ts : {"1/2", "1", "2"})
    CHECK(gaussian_moment(ctx, Polynomial::constant(2, 1), parse_rational(ts)) == 1);
  CHECK_THROWS_AS(gaussian_moment(ctx, x, Rational(-1)), InvalidParameterError);
}

TEST_CASE("moment table agrees with the heat route") {
  for (auto ctx : {context("B", 2, {"1/2", "3/2"}), context("A1^N", 2, {"1", "2"}), context("A", 3, {"2/5"})}) {
    const std::size_t n = ctx.dimension();
    MomentTable table(ctx, 8);
    for (const auto& m : monomials_up_to(n, 8)) {
      Polynomial p = Polynomial::monomial(n, m);
      CHECK(table.at(m) == gaussian_moment(ctx, p, Rational(1)));
      CHECK(table.moment(p, make_rational(1, 2)) == gaussian_moment(ctx, p, make_rational(1, 2)));
    }
    CHECK_THROWS_AS(table.at(Monomial{10}), DegreeRangeError);
  }
}

TEST_CASE("Fischer Gram recursion agrees with the direct pairing") {
  auto ctx = context("B", 2, {"1/2", "3/2"});
  auto gram = fischer_gram(ctx, 6);
  for (int n = 0; n <= 6; ++n) {
    auto mons = monomials_of_degree(2, n);
    for (std::size_t a = 0; a < mons.size(); ++a)
      for (std::size_t b = 0; b < mons.size(); ++b)
        CHECK(gram[static_cast<std::size_t>(n)](a, b) ==
              fischer_pair(ctx, Polynomial::monomial(2, mons[a]), Polynomial::monomial(2, mons[b]), Rational(1)));
  }
}

TEST_CASE("block operators act on one variable block") {
  auto ctx = context("B", 2, {"1/2", "3/2"});
  std::mt19937_64 rng(9);
  Polynomial p = random_polynomial(rng, 2, 5);
  Polynomial y = Polynomial::monomial(4, Monomial{0, 0, 2, 1}, make_rational(2, 7));
  Polynomial lifted = p.embedded(4, 0) * y;
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(dunkl_apply(ctx, i, lifted, 0) == dunkl_apply(ctx, i, p).embedded(4, 0) * y);
    Polynomial swapped = p.embedded(4, 2);
    CHECK(dunkl_apply(ctx, i, swapped, 2) == dunkl_apply(ctx, i, p).embedded(4, 2));
  }
}

TEST_CASE("coordinate multiplication and momentum") {
  auto ctx = context("B", 2, {"1/2", "3/2"});
  std::vector<Rational> e1 = basis_vector(2, 0);
  Polynomial one = Polynomial::constant(2, 1);
  CHECK(multiply_coordinate(e1, one) == Polynomial::variable(2, 0));
  CHECK(momentum_apply(ctx, e1, Rational(2), one).polynomial.is_zero());
  std::mt19937_64 rng(13);
  std::vector<Rational> xi = {make_rational(1, 2), make_rational(-3, 4)};
  for (int trial = 0; trial < 5; ++trial) {
    Polynomial a = random_polynomial(rng, 2, 4), b = random_polynomial(rng, 2, 4);
    CHECK(multiply_coordinate(xi, a + b) == multiply_coordinate(xi, a) + multiply_coordinate(xi, b));
  }
}
