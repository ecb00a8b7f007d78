#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "dunklsb/error.hpp"
#include "dunklsb/kernel.hpp"
#include "dunklsb/oracles.hpp"
#include "support.hpp"

using namespace dunklsb;
using testing_support::context;
using testing_support::random_point;

namespace {

long double norm(std::span<const ComplexLD> v) {
  long double s = 0;
  for (const auto& c : v) s += std::norm(c);
  return std::sqrt(s);
}

std::vector<ComplexLD> act(const std::vector<double>& g, std::span<const ComplexLD> v) {
  const std::size_t n = v.size();
  std::vector<ComplexLD> out(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i] += static_cast<long double>(g[i * n + j]) * v[j];
  return out;
}

}  // namespace

TEST_CASE("kernel blocks: first degrees and classical case") {
  auto ctx = context("B", 2, {"1/2", "3/2"});
  auto table = KernelTable::linear_solve(ctx, 6);
  CHECK(table.block(0) == Polynomial::constant(4, 1));
  CHECK(table.method() == KernelConstruction::kLinearSolve);
  for (auto zero : {context("B", 2, {"0", "0"}), context("A1^N", 2, {"0", "0"})}) {
    auto t0 = KernelTable::linear_solve(zero, 8);
    Polynomial xy = Polynomial::variable(4, 0) * Polynomial::variable(4, 2) +
                    Polynomial::variable(4, 1) * Polynomial::variable(4, 3);
    Polynomial power = Polynomial::constant(4, 1);
    Rational factorial = 1;
    for (int n = 0; n <= 8; ++n) {
      if (n > 0) {
        power = power * xy;
        factorial *= n;
      }
      CHECK(t0.block(n) == power * Rational(1 / factorial));
    }
  }
}

TEST_CASE("kernel block recursion and symmetry are exact") {
  for (auto ctx : {context("B", 2, {"1/2", "3/2"}), context("A1^N", 2, {"1", "2"}), context("A", 3, {"1/2"})}) {
    CAPTURE(ctx.root_system().label());
    const std::size_t n = ctx.dimension();
    const int d = n == 3 ? 6 : 10;
    auto table = KernelTable::linear_solve(ctx, d);
    for (int k = 1; k <= d; ++k) {
      Polynomial e = table.block(k);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(dunkl_apply(ctx, i, e) == Polynomial::variable(2 * n, n + i) * table.block(k - 1));
      // E_n(x, y) = E_n(y, x)
      Polynomial swapped(2 * n);
      for (const auto& [m, c] : e.terms()) swapped.add_term(m.block(n, n) * m.block(0, n).shifted(n), c);
      CHECK(swapped == e);
    }
  }
}

TEST_CASE("linear solve and basis sum constructions agree") {
  for (auto ctx : {context("B", 2, {"1/2", "3/2"}), context("A1^N", 1, {"1/2"}), context("I2", 2, {"1/2", "1"}, 4)}) {
    auto basis = build_orthogonal_basis(ctx, 10);
    auto a = KernelTable::linear_solve(ctx, 10);
    auto b = KernelTable::basis_sum(ctx, basis, 10);
    CHECK(b.method() == KernelConstruction::kBasisSum);
    for (int k = 0; k <= 10; ++k) CHECK(a.block(k) == b.block(k));
    CHECK_THROWS_AS(KernelTable::basis_sum(ctx, basis, 11), DegreeRangeError);
  }
}

TEST_CASE("rank one kernel matches the coefficient recursion") {
  auto ctx = context("A1^N", 1, {"1"});
  auto table = KernelTable::linear_solve(ctx, 40);
  std::vector<ComplexLD> one{ComplexLD(1)};
  CHECK(static_cast<double>(eval_dunkl_kernel(table, one, one).value.real()) == doctest::Approx(1.543081).epsilon(1e-6));
  for (std::string m : {"1/2", "1", "3"}) {
    auto c = context("A1^N", 1, {m});
    auto t = KernelTable::linear_solve(c, 40);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
      auto z = random_point(rng, 1, 2.0), w = random_point(rng, 1, 2.0);
      ComplexLD expected = z2_kernel_series(parse_rational(m), z[0], w[0], 80);
      ComplexLD got = eval_dunkl_kernel(t, z, w).value;
      CHECK(static_cast<double>(std::abs(got - expected) / std::abs(expected)) <= 1e-12);
    }
  }
}

TEST_CASE("kernel evaluation properties") {
  auto ctx = context("B", 2, {"1/2", "3/2"});
  auto table = KernelTable::linear_solve(ctx, 24);
  std::mt19937_64 rng(11);
  std::vector<ComplexLD> zero(2, 0);
  for (int i = 0; i < 100; ++i) {
    auto z = random_point(rng, 2, 2.0), w = random_point(rng, 2, 2.0);
    auto e = eval_dunkl_kernel(table, z, w);
    CHECK(std::abs(e.value) <= std::exp(norm(z) * norm(w)) + e.tail);
    CHECK(std::abs(eval_dunkl_kernel(table, zero, w).value - 1.0L) == 0);
    CHECK(static_cast<double>(std::abs(eval_dunkl_kernel(table, w, z).value - e.value)) <= 1e-12);
    if (i < 50)
      for (std::size_t g = 0; g < ctx.group().order(); ++g) {
        const auto& m = ctx.group().element_real(g);
        auto ge = eval_dunkl_kernel(table, act(m, z), act(m, w));
        CHECK(static_cast<double>(std::abs(ge.value - e.value)) <= 1e-12);
      }
    for (long double lambda : {0.5L, 2.0L}) {
      std::vector<ComplexLD> lz = z, lw = w;
      for (auto& c : lz) c *= lambda;
      for (auto& c : lw) c *= lambda;
      auto a = eval_dunkl_kernel(table, lz, w), b = eval_dunkl_kernel(table, z, lw);
      CHECK(std::abs(a.value - b.value) <= a.tail + b.tail + 1e-12L);
    }
  }
  EvalOptions strict;
  strict.tolerance = 1e-30;
  std::vector<ComplexLD> big{ComplexLD(3), ComplexLD(3)};
  CHECK_THROWS_AS(eval_dunkl_kernel(table, big, big, strict), PrecisionFailure);
  CHECK(kernel_tail(0, 24) == 0);
}

TEST_CASE("heat kernel and Segal-Bargmann kernels") {
  auto ctx = context("B", 2, {"1/2", "3/2"});
  auto table = KernelTable::linear_solve(ctx, 24);
  std::mt19937_64 rng(5);
  for (std::string ts : {"1/2", "1", "2"}) {
    Rational t = parse_rational(ts);
    const long double tl = to_long_double(t);
    for (int i = 0; i < 30; ++i) {
      auto z = random_point(rng, 2, 1.5), q = random_point(rng, 2, 1.5);
      for (auto& c : q) c = c.real();
      std::vector<ComplexLD> zero(2, 0);
      auto rho0 = heat_kernel(table, t, zero, q).value;
      CHECK(std::abs(rho0 - one_variable_heat_kernel(t, q)) <= 1e-15L);
      CHECK(std::abs(rho0 - std::exp(-holomorphic_square(q) / (2 * tl))) <= 1e-15L);
      auto rho = heat_kernel(table, t, z, q).value;
      CHECK(static_cast<double>(std::abs(rho - heat_kernel(table, t, q, z).value)) <= 1e-12);
      auto a = sb_kernel(table, KernelVersion::kA, t, z, q).value;
      auto b = sb_kernel(table, KernelVersion::kB, t, z, q).value;
      auto c = sb_kernel(table, KernelVersion::kC, t, z, q).value;
      CHECK(static_cast<double>(std::abs(a * std::sqrt(rho0) - rho)) <= 1e-12);
      CHECK(static_cast<double>(std::abs(b * rho0 - rho)) <= 1e-12);
      CHECK(static_cast<double>(std::abs(c - rho)) <= 1e-12);
      CHECK(std::abs(sb_kernel(table, KernelVersion::kA, t, z, zero).value -
                     std::exp(-holomorphic_square(z) / (2 * tl))) <= 1e-15L);
      CHECK(std::abs(sb_kernel(table, KernelVersion::kA, t, zero, q).value -
                     std::exp(-holomorphic_square(q) / (4 * tl))) <= 1e-15L);
    }
  }
  // classical forms
  auto zero_ctx = context("B", 2, {"0", "0"});
  auto t0 = KernelTable::linear_solve(zero_ctx, 30);
  std::vector<ComplexLD> z{ComplexLD(0.3, 0.4), ComplexLD(-0.2, 0.1)}, q{ComplexLD(0.7), ComplexLD(-0.5)};
  std::vector<ComplexLD> x{ComplexLD(0.3), ComplexLD(-0.2)};
  ComplexLD zq = z[0] * q[0] + z[1] * q[1];
  auto a = sb_kernel(t0, KernelVersion::kA, 1, z, q).value;
  CHECK(static_cast<double>(std::abs(a - std::exp(-holomorphic_square(z) / 2.0L - holomorphic_square(q) / 4.0L + zq))) <=
        1e-14);
  long double d2 = std::norm(x[0] - q[0]) + std::norm(x[1] - q[1]);
  CHECK(static_cast<double>(std::abs(heat_kernel(t0, 2, x, q).value - std::exp(-d2 / 4.0L))) <= 1e-14);
  CHECK(parse_kernel_version("BSO") == KernelVersion::kBSO);
  CHECK(to_string(parse_kernel_version("rho")) == "rho");
  CHECK_THROWS_AS(parse_kernel_version("D"), InvalidParameterError);
}

TEST_CASE("reproducing kernel is Hermitian and positive definite") {
  auto ctx = context("A1^N", 2, {"1", "2"});
  auto table = KernelTable::linear_solve(ctx, 24);
  std::mt19937_64 rng(3);
  for (std::string ts : {"1/2", "1", "2"}) {
    Rational t = parse_rational(ts);
    std::vector<std::vector<ComplexLD>> pts;
    for (int i = 0; i < 8; ++i) pts.push_back(random_point(rng, 2, 1.0));
    Eigen::MatrixXcd g(8, 8);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        ComplexLD k = reproducing_kernel(table, t, pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]).value;
        g(i, j) = std::complex<double>(static_cast<double>(k.real()), static_cast<double>(k.imag()));
      }
    CHECK((g - g.adjoint()).norm() <= 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(g);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
    std::vector<ComplexLD> zero(2, 0);
    CHECK(std::abs(reproducing_kernel(table, t, zero, pts[0]).value - 1.0L) == 0);
  }
}

TEST_CASE("dilation of reproducing kernels") {
  auto ctx = context("B", 2, {"1/2", "3/2"});
  auto table = KernelTable::linear_solve(ctx, 24);
  std::mt19937_64 rng(9);
  const Rational s = make_rational(1, 2), t = 2;
  const long double lambda = std::sqrt(to_long_double(t / s));
  for (int i = 0; i < 20; ++i) {
    auto z = random_point(rng, 2, 1.0), w = random_point(rng, 2, 1.0);
    std::vector<ComplexLD> lw = w, sz = z;
    for (auto& c : lw) c *= lambda;
    for (auto& c : sz) c /= lambda;
    auto lhs = reproducing_kernel(table, t, z, lw).value;
    auto rhs = reproducing_kernel(table, s, sz, w).value;
    CHECK(static_cast<double>(std::abs(lhs - rhs)) <= 1e-12);
  }
}
