#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>

#include "dunklsb/coxeter.hpp"
#include "dunklsb/error.hpp"

namespace dunklsb {

namespace {

using boost::math::quadrature::exp_sinh;
using boost::math::quadrature::tanh_sinh;

constexpr double kPieceTolerance = 1e-12;
constexpr double kZeroCoefficient = 1e-12;

// |<c,x>|^power
struct LinearForm {
  std::vector<double> c;
  double power;
};

struct Accumulated {
  double value = 0;
  double error = 0;
};

// Integrates f over the real line split at the sorted breakpoints. Each piece
// is integrated by a double-exponential rule, which tolerates the algebraic
// endpoint singularities |x - b|^p that sit at the breakpoints.
// Nested calls must not share an integrator (their tables grow lazily), hence
// one pair per nesting depth.
Accumulated integrate_line(const std::function<double(double)>& f, std::vector<double> breaks, std::size_t depth) {
  static thread_local std::vector<std::unique_ptr<tanh_sinh<double>>> finite_rules;
  static thread_local std::vector<std::unique_ptr<exp_sinh<double>>> half_rules;
  while (finite_rules.size() <= depth) {
    finite_rules.push_back(std::make_unique<tanh_sinh<double>>());
    half_rules.push_back(std::make_unique<exp_sinh<double>>());
  }
  auto& finite = *finite_rules[depth];
  auto& half = *half_rules[depth];
  std::sort(breaks.begin(), breaks.end());
  std::vector<double> pts;
  for (double b : breaks)
    if (pts.empty() || std::abs(b - pts.back()) > 1e-14 * std::max(1.0, std::abs(b))) pts.push_back(b);
  if (pts.empty()) pts.push_back(0.0);
  Accumulated acc;
  const double inf = std::numeric_limits<double>::infinity();
  double err = 0;
  double left = pts.front();
  acc.value += half.integrate([&](double u) { return f(left - u); }, 0.0, inf, kPieceTolerance, &err);
  acc.error += err;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    acc.value += finite.integrate(f, pts[k], pts[k + 1], kPieceTolerance, &err);
    acc.error += err;
  }
  double right = pts.back();
  acc.value += half.integrate([&](double u) { return f(right + u); }, 0.0, inf, kPieceTolerance, &err);
  acc.error += err;
  return acc;
}

class NestedIntegrator {
 public:
  NestedIntegrator(std::size_t n, std::vector<LinearForm> forms, double t) : n_(n), t_(t), root_forms_(forms) {
    levels_.resize(n + 1);
    levels_[n] = prune(std::move(forms), n);
    for (std::size_t k = n; k > 1; --k) {
      std::vector<LinearForm> next;
      const auto& cur = levels_[k];
      for (const auto& f : cur)
        if (f.c[k - 1] == 0.0) next.push_back(f);
      for (std::size_t i = 0; i < cur.size(); ++i)
        for (std::size_t j = i + 1; j < cur.size(); ++j) {
          double a = cur[i].c[k - 1], b = cur[j].c[k - 1];
          if (a == 0.0 || b == 0.0) continue;
          LinearForm g{std::vector<double>(n, 0.0), 1.0};
          for (std::size_t q = 0; q + 1 < k; ++q) {
            g.c[q] = b * cur[i].c[q] - a * cur[j].c[q];
            if (std::abs(g.c[q]) < kZeroCoefficient) g.c[q] = 0.0;
          }
          next.push_back(std::move(g));
        }
      levels_[k - 1] = prune(std::move(next), k - 1);
    }
  }

  Accumulated run() {
    std::vector<double> x(n_, 0.0);
    max_inner_rel_ = 0;
    Accumulated outer = level(1, x);
    outer.error += max_inner_rel_ * std::abs(outer.value);
    return outer;
  }

 private:
  // Drops forms that vanish on the first k coordinates, and duplicates up to scale.
  static std::vector<LinearForm> prune(std::vector<LinearForm> forms, std::size_t k) {
    std::vector<LinearForm> out;
    for (auto& f : forms) {
      double norm = 0;
      for (std::size_t q = 0; q < k; ++q) norm = std::max(norm, std::abs(f.c[q]));
      if (norm < kZeroCoefficient) continue;
      for (std::size_t q = 0; q < f.c.size(); ++q) f.c[q] = q < k ? f.c[q] / norm : 0.0;
      bool dup = false;
      for (const auto& g : out) {
        double d1 = 0, d2 = 0;
        for (std::size_t q = 0; q < k; ++q) {
          d1 = std::max(d1, std::abs(f.c[q] - g.c[q]));
          d2 = std::max(d2, std::abs(f.c[q] + g.c[q]));
        }
        if (std::min(d1, d2) < 1e-13) dup = true;
      }
      if (!dup) out.push_back(std::move(f));
    }
    return out;
  }

  double integrand(const std::vector<double>& x) const {
    double r2 = 0;
    for (double v : x) r2 += v * v;
    // Log form: far out in the tails the power and the Gaussian would
    // overflow and underflow separately.
    double log_w = -r2 / (2 * t_);
    for (const auto& f : root_forms_) {
      double s = 0;
      for (std::size_t q = 0; q < n_; ++q) s += f.c[q] * x[q];
      if (s == 0.0) return 0.0;
      log_w += f.power * std::log(std::abs(s));
    }
    return std::exp(log_w);
  }

  Accumulated level(std::size_t k, std::vector<double>& x) {
    std::vector<double> breaks;
    for (const auto& f : levels_[k]) {
      double a = f.c[k - 1];
      if (a == 0.0) continue;
      double s = 0;
      for (std::size_t q = 0; q + 1 < k; ++q) s += f.c[q] * x[q];
      breaks.push_back(-s / a);
    }
    auto f = [&](double v) {
      x[k - 1] = v;
      if (k == n_) return integrand(x);
      Accumulated inner = level(k + 1, x);
      x[k - 1] = v;
      if (inner.value != 0.0) max_inner_rel_ = std::max(max_inner_rel_, inner.error / std::abs(inner.value));
      return inner.value;
    };
    return integrate_line(f, breaks, k);
  }

  std::size_t n_;
  double t_;
  std::vector<LinearForm> root_forms_;
  std::vector<std::vector<LinearForm>> levels_;
  double max_inner_rel_ = 0;
};

}  // namespace

double mms_constant(const MultiplicityFunction& mu, const RootSystem& rs, const QuadratureOptions& opts) {
  if (!(opts.t > 0)) throw InvalidParameterError("quadrature needs t > 0");
  const std::size_t n = rs.dimension();
  const double t = opts.t;
  double gamma = to_double(mu.gamma());
  if (mu.is_zero() || rs.size() == 0) return std::pow(2 * std::acos(-1.0), 0.5 * static_cast<double>(n));

  // Each +- pair contributes |<alpha,x>|^{2 mu}.
  std::vector<LinearForm> forms;
  for (std::size_t i : rs.positive_indices()) {
    double m = to_double(mu.of_root(i));
    if (m != 0.0) forms.push_back({rs.root(i).value, 2 * m});
  }

  double value = 0, error = 0;
  if (rs.is_product_type()) {
    value = 1;
    double rel = 0;
    for (std::size_t axis = 0; axis < n; ++axis) {
      double scale = 1, power = 0;
      for (const auto& f : forms)
        if (std::abs(f.c[axis]) > 0.5) {
          scale *= std::pow(std::abs(f.c[axis]), f.power);
          power += f.power;
        }
      // t^{-(power/2 + 1/2)} * 2 * int_0^inf scale |x|^power e^{-x^2/2t}
      auto g = [&](double x) {
        if (x == 0.0) return power > 0 ? 0.0 : scale;
        return scale * std::exp(power * std::log(x) - x * x / (2 * t));
      };
      Accumulated a = integrate_line([&](double x) { return g(std::abs(x)); }, {0.0}, 0);
      double norm = std::pow(t, -(power / 2 + 0.5));
      value *= a.value * norm;
      rel += a.error / std::abs(a.value);
    }
    error = rel * value;
  } else {
    // TODO: rank 3 (B3 at 1e-8) runs for many minutes here; integrating over one Weyl
    // chamber and multiplying by the group order would cut the work by |W|.
    // Directions orthogonal to every root only contribute a Gaussian factor,
    // so integrate over the span of the roots in orthonormal coordinates.
    std::vector<std::vector<double>> basis;
    for (const auto& f : forms) {
      std::vector<double> v = f.c;
      for (const auto& b : basis) {
        double d = 0;
        for (std::size_t q = 0; q < n; ++q) d += v[q] * b[q];
        for (std::size_t q = 0; q < n; ++q) v[q] -= d * b[q];
      }
      double norm = 0;
      for (double x : v) norm += x * x;
      norm = std::sqrt(norm);
      if (norm < 1e-9) continue;
      for (auto& x : v) x /= norm;
      basis.push_back(std::move(v));
    }
    const std::size_t rank = basis.size();
    std::vector<LinearForm> reduced;
    for (const auto& f : forms) {
      LinearForm g{std::vector<double>(rank, 0.0), f.power};
      for (std::size_t k = 0; k < rank; ++k)
        for (std::size_t q = 0; q < n; ++q) g.c[k] += f.c[q] * basis[k][q];
      // Rounding leaves ~1e-17 where the exact coordinate is zero; left alone
      // these become spurious far-away breakpoints.
      for (auto& c : g.c)
        if (std::abs(c) < kZeroCoefficient) c = 0.0;
      reduced.push_back(std::move(g));
    }
    NestedIntegrator integ(rank, reduced, t);
    Accumulated a = integ.run();
    double norm = std::pow(t, -(gamma + 0.5 * static_cast<double>(rank))) *
                  std::pow(2 * std::acos(-1.0), 0.5 * static_cast<double>(n - rank));
    value = a.value * norm;
    error = a.error * norm;
  }
  if (!(value > 0) || !std::isfinite(value) || error > opts.relative_tolerance * value)
    throw PrecisionFailure("Macdonald-Mehta-Selberg quadrature missed its error target", value, error);
  return value;
}

}  // namespace dunklsb
