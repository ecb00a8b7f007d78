#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "dunklsb/dunkl.hpp"
#include "dunklsb/kernel.hpp"

namespace testing_support {

inline dunklsb::DunklContext context(const std::string& family, int n, const std::vector<std::string>& mu, int m = 0) {
  dunklsb::RootSystemSpec spec;
  spec.family = family;
  spec.n = n;
  spec.m = m;
  std::vector<dunklsb::Rational> values;
  for (const auto& s : mu) values.push_back(dunklsb::parse_rational(s));
  return dunklsb::DunklContext::from_spec(spec, values);
}

inline std::vector<dunklsb::Monomial> monomials_up_to(std::size_t nvars, int degree) {
  std::vector<dunklsb::Monomial> out;
  for (int d = 0; d <= degree; ++d)
    for (const auto& m : dunklsb::monomials_of_degree(nvars, d)) out.push_back(m);
  return out;
}

/// Small random rational polynomial of the given degree.
inline dunklsb::Polynomial random_polynomial(std::mt19937_64& rng, std::size_t nvars, int degree) {
  dunklsb::Polynomial p(nvars);
  std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
  for (const auto& m : monomials_up_to(nvars, degree)) p.add_term(m, dunklsb::make_rational(num(rng), den(rng)));
  return p;
}

/// Complex point with uniform direction and |v| <= radius.
inline std::vector<dunklsb::ComplexLD> random_point(std::mt19937_64& rng, std::size_t n, double radius) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<dunklsb::ComplexLD> v(n);
  for (auto& c : v) c = dunklsb::ComplexLD(u(rng), u(rng));
  long double norm = 0;
  for (const auto& c : v) norm += std::norm(c);
  const long double scale = radius * std::abs(u(rng)) / std::sqrt(norm);
  for (auto& c : v) c *= scale;
  return v;
}

}  // namespace testing_support
