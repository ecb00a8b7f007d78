#include <cmath>

#include "doctest.h"
#include "dunklsb/error.hpp"
#include "dunklsb/polynomial.hpp"

using namespace dunklsb;

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rational("3/6") == make_rational(1, 2));
  CHECK(parse_rational("-0.125") == make_rational(-1, 8));
  CHECK(parse_rational("1.5e-2") == make_rational(3, 200));
  CHECK(parse_rational(" 7 ") == Rational(7));
  CHECK(format_rational(Rational(2)) == "2/1");
  CHECK(format_rational(make_rational(-3, 9)) == "-1/3");
  CHECK_THROWS_AS(parse_rational("1/0"), InvalidParameterError);
  CHECK_THROWS_AS(parse_rational("abc"), InvalidParameterError);
  CHECK_THROWS_AS(parse_rational(""), InvalidParameterError);
}

TEST_CASE("long double conversion keeps the residue") {
  Rational third = make_rational(1, 3);
  long double x = to_long_double(third);
  CHECK(std::abs(x - 1.0L / 3.0L) < 1e-18L);
}

TEST_CASE("surds") {
  Surd a = Surd::sqrt(Rational(8));
  CHECK(a.coefficient() == 2);
  CHECK(a.radicand() == 2);
  Surd b = Surd::sqrt(make_rational(1, 2));
  CHECK(b == Surd(make_rational(1, 2), Rational(2)));
  CHECK((a * b).is_rational());
  CHECK((a * b).coefficient() == 2);
  CHECK(a.inverse() * a == Surd(Rational(1), Rational(1)));
  CHECK(std::abs(Surd::sqrt(Rational(3)).to_double() - std::sqrt(3.0)) < 1e-15);
}

TEST_CASE("exact solve") {
  RationalMatrix a(3, 2);
  a(0, 0) = 1;
  a(0, 1) = 2;
  a(1, 0) = 3;
  a(1, 1) = 4;
  a(2, 0) = 5;
  a(2, 1) = 6;
  RationalMatrix x(2, 1);
  x(0, 0) = make_rational(1, 3);
  x(1, 0) = -2;
  RationalMatrix b = a * x;
  CHECK(solve_exact(a, b) == x);
  b(2, 0) += 1;
  CHECK_THROWS_AS(solve_exact(a, b), InternalConsistencyError);
  RationalMatrix sq(2, 2);
  sq(0, 0) = 2;
  sq(0, 1) = 1;
  sq(1, 0) = 1;
  sq(1, 1) = 1;
  CHECK(inverse(sq) * sq == RationalMatrix::identity(2));
  RationalMatrix singular(2, 2);
  CHECK_THROWS_AS(inverse(singular), DegeneracyError);
}

TEST_CASE("monomial order is graded lexicographic") {
  auto m = monomials_of_degree(2, 2);
  REQUIRE(m.size() == 3);
  CHECK(m[0] == Monomial{2, 0});
  CHECK(m[1] == Monomial{1, 1});
  CHECK(m[2] == Monomial{0, 2});
  CHECK(m[0] < m[1]);
  CHECK(Monomial{0, 3} > Monomial{2, 0});
  CHECK(monomials_of_degree(3, 4).size() == 15);
}

TEST_CASE("polynomial arithmetic") {
  Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
  Polynomial p = x * x + y * Rational(3);
  CHECK(p.degree() == 2);
  CHECK((p - p).is_zero());
  CHECK(p.partial(0) == x * Rational(2));
  std::vector<Rational> pt = {Rational(2), make_rational(1, 3)};
  CHECK(evaluate(p, pt) == 5);
  Polynomial e = p.embedded(4, 2);
  CHECK(e.coefficient(Monomial{0, 0, 2, 0}) == 1);
  CHECK(e.coefficient(Monomial{0, 0, 0, 1}) == 3);
  CHECK(p.homogeneous_part(1) == y * Rational(3));
}

TEST_CASE("surd polynomials merge square classes") {
  Polynomial x = Polynomial::variable(1, 0);
  SurdPolynomial a(Rational(2), x);
  SurdPolynomial b(Rational(8), x);  // 2 sqrt 2 x
  SurdPolynomial sum = a + b;
  REQUIRE(sum.components().size() == 1);
  CHECK(sum.components()[0].second == x * Rational(3));
  CHECK((a * a).is_rational());
  CHECK((a * a).rational_part() == x * x * Rational(2));
  CHECK((a - a).is_zero());
}
