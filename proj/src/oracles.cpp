#include "dunklsb/oracles.hpp"

namespace dunklsb {

std::complex<long double> z2_kernel_series(const Rational& mu, std::complex<long double> z,
                                           std::complex<long double> w, int degree) {
  const long double m = to_long_double(mu);
  const std::complex<long double> zw = z * w;
  std::complex<long double> term = 1, sum = 1;
  for (int n = 1; n <= degree; ++n) {
    term *= zw / (n + (n % 2 ? 2 * m : 0.0L));
    sum += term;
  }
  return sum;
}

}  // namespace dunklsb
