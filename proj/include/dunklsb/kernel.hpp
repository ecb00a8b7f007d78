#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dunklsb/dunkl.hpp"
#include "dunklsb/hermite.hpp"

namespace dunklsb {

using ComplexLD = std::complex<long double>;

enum class KernelConstruction { kLinearSolve, kBasisSum };
std::string to_string(KernelConstruction method);

/// Homogeneous pieces E_0..E_D of the Dunkl kernel. E_n is stored as the
/// matrix e_n[kappa][lambda] of x^kappa y^lambda over degree-n monomials in
/// monomials_of_degree order. Copies and truncated views share the blocks.
class KernelTable {
 public:
  /// Solves T^x_i E_n = y_i E_{n-1} degree by degree.
  static KernelTable linear_solve(const DunklContext& ctx, int max_degree);
  /// E_n = sum_{|nu| = n} q_nu(x) q_nu(y) / r_nu, the bidegree-(n, n) part of
  /// e^{y^2/2} sum_nu H_{1;nu}(x) phi_nu(y). Needs basis.max_degree() >= max_degree.
  static KernelTable basis_sum(const DunklContext& ctx, const OrthogonalBasis& basis, int max_degree);

  int max_degree() const { return degree_; }
  std::size_t dimension() const;
  KernelConstruction method() const;
  const DunklContext& context() const;
  const RationalMatrix& block_matrix(int n) const;
  const std::vector<Monomial>& monomials(int n) const;
  /// E_n as a polynomial in 2N variables, x first.
  Polynomial block(int n) const;
  /// sum_{n <= max_degree} E_n.
  Polynomial partial_sum() const;
  /// Same blocks, evaluation stops at degree d.
  KernelTable truncated(int d) const;
  /// Macdonald-Mehta-Selberg constant, computed once per table family.
  double mms() const;

  /// sum_kappa z^kappa sum_lambda e_n[kappa][lambda] w^lambda, long double.
  ComplexLD block_value(int n, std::span<const ComplexLD> z, std::span<const ComplexLD> w) const;

 private:
  struct Data;
  KernelTable(std::shared_ptr<Data> data, int degree) : data_(std::move(data)), degree_(degree) {}
  std::shared_ptr<Data> data_;
  int degree_;
};

/// Value of a truncated kernel sum with the heuristic tail
/// sum_{n > D} (|z||w|)^n / n!, scaled by any prefactor.
struct KernelEval {
  ComplexLD value;
  int degree = 0;
  long double tail = 0;
};

struct EvalOptions {
  /// Refuse with PrecisionFailure when the tail estimate exceeds this.
  std::optional<double> tolerance;
};

long double kernel_tail(long double a, int degree);

KernelEval eval_dunkl_kernel(const KernelTable& table, std::span<const ComplexLD> z, std::span<const ComplexLD> w,
                             const EvalOptions& opts = {});

/// rho_t(z,q) = e^{-(z^2+q^2)/2t} E(z/sqrt t, q/sqrt t).
KernelEval heat_kernel(const KernelTable& table, const Rational& t, std::span<const ComplexLD> z,
                       std::span<const ComplexLD> q, const EvalOptions& opts = {});

/// sigma_t(q) = rho_t(0, q) = e^{-q^2/2t}.
ComplexLD one_variable_heat_kernel(const Rational& t, std::span<const ComplexLD> q);

enum class KernelVersion { kA, kB, kC, kBSO, kE, kRho };
KernelVersion parse_kernel_version(const std::string& text);
std::string to_string(KernelVersion v);

/// Segal-Bargmann kernels, each from its own formula:
///   A   = e^{-z^2/2t - q^2/4t} E(z/sqrt t, q/sqrt t)
///   B   = rho(z,q) / rho(0,q)
///   C   = rho(z,q)
///   BSO = 2^{gamma+N/2} c^{-1/2} e^{-z^2/2 - q^2} E(sqrt2 q, sqrt2 z), t ignored
/// E and Rho are passed through for the CLI.
KernelEval sb_kernel(const KernelTable& table, KernelVersion version, const Rational& t,
                     std::span<const ComplexLD> z, std::span<const ComplexLD> q, const EvalOptions& opts = {});

/// K_t(z,w) = E(z*/sqrt t, w/sqrt t).
KernelEval reproducing_kernel(const KernelTable& table, const Rational& t, std::span<const ComplexLD> z,
                              std::span<const ComplexLD> w, const EvalOptions& opts = {});

/// z^2 = sum z_j^2, no conjugation.
ComplexLD holomorphic_square(std::span<const ComplexLD> z);

}  // namespace dunklsb
