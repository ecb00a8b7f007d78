#pragma once

#include <complex>

#include "dunklsb/rational.hpp"

namespace dunklsb {

/// Rank-one Dunkl kernel from its coefficient recursion
///   E(z, w) = sum_n c_n (zw)^n,  c_0 = 1,  c_n = c_{n-1} / (n + mu (1 - (-1)^n)),
/// which follows from T(x^n) = (n + mu (1 - (-1)^n)) x^{n-1}. Independent of the
/// kernel tables.
std::complex<long double> z2_kernel_series(const Rational& mu, std::complex<long double> z,
                                           std::complex<long double> w, int degree);

}  // namespace dunklsb
