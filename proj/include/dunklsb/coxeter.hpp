#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dunklsb/rational.hpp"

namespace dunklsb {

enum class Regime { kExact, kFloating };

const char* to_string(Regime r);

/// A root of squared norm 2. In the exact regime the root is
/// scale * direction with a rational direction and scale = sqrt(2 / |direction|^2).
struct Root {
  std::optional<std::vector<Rational>> direction;
  std::vector<double> value;
};

/// Built-in families or an explicit root list.
struct RootSystemSpec {
  std::string family;  // "A1^N", "A", "B", "D", "I2" or "explicit"
  int n = 0;
  int m = 0;
  /// For "explicit": entries parsed as rationals (exact regime).
  std::vector<std::vector<std::string>> rational_roots;
  /// For "explicit": numeric roots (floating regime).
  std::vector<std::vector<double>> real_roots;
};

class RootSystem {
 public:
  /// Exact regime. Directions need not be normalized.
  static RootSystem from_directions(std::size_t dimension, const std::vector<std::vector<Rational>>& directions,
                                    std::string label = "explicit");
  /// Floating regime. Vectors are rescaled to squared norm 2.
  static RootSystem from_vectors(std::size_t dimension, const std::vector<std::vector<double>>& vectors,
                                 std::string label = "explicit");

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return roots_.size(); }
  const std::vector<Root>& roots() const { return roots_; }
  const Root& root(std::size_t i) const { return roots_.at(i); }
  Regime regime() const { return regime_; }
  const std::string& label() const { return label_; }

  /// Index of -root(i).
  std::size_t negative_of(std::size_t i) const { return negatives_.at(i); }
  /// One root from each {alpha, -alpha} pair, first in list order.
  const std::vector<std::size_t>& positive_indices() const { return positives_; }
  /// Every root lies on a coordinate axis.
  bool is_product_type() const;

  /// Root index of the given vector, if present.
  std::optional<std::size_t> find(const std::vector<double>& v) const;
  std::optional<std::size_t> find_direction(const std::vector<Rational>& d) const;

  /// Reflection matrix of root(i); exact regime only.
  RationalMatrix reflection_matrix(std::size_t i) const;
  /// Row-major N x N.
  std::vector<double> reflection_matrix_real(std::size_t i) const;

 private:
  void finish();
  std::size_t dimension_ = 0;
  std::vector<Root> roots_;
  std::vector<std::size_t> negatives_;
  std::vector<std::size_t> positives_;
  Regime regime_ = Regime::kExact;
  std::string label_;
};

/// Integer primitive representative of a rational direction, sign preserved.
std::vector<Rational> canonical_direction(const std::vector<Rational>& d);

/// x - (2<alpha,x>/|alpha|^2) alpha. Throws InvalidRootError for alpha = 0.
std::vector<double> reflect(const std::vector<double>& alpha, const std::vector<double>& x);
std::vector<Rational> reflect(const std::vector<Rational>& alpha, const std::vector<Rational>& x);

/// Validates closure; throws NotARootSystemError with the reflected root as witness.
RootSystem build_root_system(const RootSystemSpec& spec);

class ReflectionGroup {
 public:
  Regime regime() const { return regime_; }
  std::size_t order() const { return real_.size(); }
  std::size_t dimension() const { return dimension_; }
  /// Exact regime only.
  const RationalMatrix& element(std::size_t g) const { return exact_.at(g); }
  /// Row-major N x N, always available.
  const std::vector<double>& element_real(std::size_t g) const { return real_.at(g); }
  /// Element indices of the generating reflections, parallel to positive_indices().
  const std::vector<std::size_t>& generators() const { return generators_; }
  /// root_permutation(g)[i] = index of g * root(i).
  const std::vector<std::size_t>& root_permutation(std::size_t g) const { return permutations_.at(g); }
  std::size_t identity_index() const { return 0; }

 private:
  friend ReflectionGroup generate_group(const RootSystem& rs, std::size_t cap);
  Regime regime_ = Regime::kExact;
  std::size_t dimension_ = 0;
  std::vector<RationalMatrix> exact_;
  std::vector<std::vector<double>> real_;
  std::vector<std::size_t> generators_;
  std::vector<std::vector<std::size_t>> permutations_;
};

inline constexpr std::size_t kDefaultGroupCap = 1000000;

/// Breadth-first closure under the root reflections; throws RunawayClosureError past cap.
ReflectionGroup generate_group(const RootSystem& rs, std::size_t cap = kDefaultGroupCap);

/// Orbits ordered by their first root in list order; each orbit sorted.
std::vector<std::vector<std::size_t>> orbit_partition(const RootSystem& rs, const ReflectionGroup& g);

class MultiplicityFunction {
 public:
  std::size_t num_orbits() const { return values_.size(); }
  const Rational& orbit_value(std::size_t o) const { return values_.at(o); }
  const std::vector<Rational>& orbit_values() const { return values_; }
  const Rational& of_root(std::size_t i) const { return values_.at(orbit_of_root_.at(i)); }
  std::size_t orbit_of_root(std::size_t i) const { return orbit_of_root_.at(i); }
  /// Half the sum over all roots.
  const Rational& gamma() const { return gamma_; }
  bool is_zero() const;

 private:
  friend MultiplicityFunction make_multiplicity(const std::vector<std::vector<std::size_t>>& orbits,
                                                std::vector<Rational> values);
  std::vector<std::size_t> orbit_of_root_;
  std::vector<Rational> values_;
  Rational gamma_;
};

/// Throws UnsupportedMultiplicityError for negative values or a count mismatch.
MultiplicityFunction make_multiplicity(const std::vector<std::vector<std::size_t>>& orbits,
                                       std::vector<Rational> values);

struct WeightSpec {
  double c_mu = 0;
  Rational t = 1;
  /// gamma + N/2
  Rational exponent;
};

/// c^{-1} t^{-(gamma+N/2)} prod_{alpha in R} |<alpha,x>|^{mu(alpha)}.
double weight_eval(const WeightSpec& w, const MultiplicityFunction& mu, const RootSystem& rs,
                   const std::vector<double>& x);

struct QuadratureOptions {
  double relative_tolerance = 1e-8;
  /// Time parameter of the Gaussian; the constant must not depend on it.
  double t = 1.0;
};

/// Integral of prod |<alpha,x>|^mu(alpha) e^{-x^2/2} dx. Tensorized 1-D
/// quadrature for product-type systems, polar decomposition with adaptive
/// angular quadrature otherwise. Throws PrecisionFailure if the error
/// estimate misses the target.
double mms_constant(const MultiplicityFunction& mu, const RootSystem& rs, const QuadratureOptions& opts = {});

WeightSpec make_weight_spec(const MultiplicityFunction& mu, const RootSystem& rs, const Rational& t);

}  // namespace dunklsb
