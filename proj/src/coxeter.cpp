#include "dunklsb/coxeter.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include "dunklsb/error.hpp"

namespace dunklsb {

namespace {

constexpr double kMatchTolerance = 1e-9;

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<Rational> negate(std::vector<Rational> v) {
  for (auto& x : v) x = -x;
  return v;
}

std::vector<double> normalized_value(const std::vector<Rational>& d) {
  long double scale = std::sqrt(2.0L / to_long_double(dot(d, d)));
  std::vector<double> v(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) v[i] = static_cast<double>(to_long_double(d[i]) * scale);
  return v;
}

std::vector<Rational> unit(std::size_t n, std::size_t i, int sign = 1) {
  std::vector<Rational> v(n, Rational(0));
  v.at(i) = sign;
  return v;
}

std::vector<Rational> pair(std::size_t n, std::size_t i, int si, std::size_t j, int sj) {
  std::vector<Rational> v(n, Rational(0));
  v.at(i) = si;
  v.at(j) = sj;
  return v;
}

// Each root followed by its negative.
void push_pm(std::vector<std::vector<Rational>>& out, const std::vector<Rational>& d) {
  out.push_back(d);
  out.push_back(negate(d));
}

}  // namespace

const char* to_string(Regime r) { return r == Regime::kExact ? "exact-rational" : "floating"; }

std::vector<Rational> canonical_direction(const std::vector<Rational>& d) {
  Integer lcm = 1;
  for (const auto& x : d) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
  std::vector<Integer> ints;
  Integer g = 0;
  for (const auto& x : d) {
    Integer v = x.get_num() * (lcm / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    ints.push_back(v);
  }
  if (g == 0) throw InvalidRootError("zero root");
  std::vector<Rational> out;
  for (const auto& v : ints) out.emplace_back(v / g);
  return out;
}

std::vector<double> reflect(const std::vector<double>& alpha, const std::vector<double>& x) {
  double aa = dot(alpha, alpha);
  if (aa == 0.0) throw InvalidRootError("zero root");
  if (alpha.size() != x.size()) throw InvalidRootError("dimension mismatch");
  double f = 2.0 * dot(alpha, x) / aa;
  std::vector<double> out(x);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] -= f * alpha[i];
  return out;
}

std::vector<Rational> reflect(const std::vector<Rational>& alpha, const std::vector<Rational>& x) {
  Rational aa = dot(alpha, alpha);
  if (sgn(aa) == 0) throw InvalidRootError("zero root");
  if (alpha.size() != x.size()) throw InvalidRootError("dimension mismatch");
  Rational f = 2 * dot(alpha, x) / aa;
  std::vector<Rational> out(x);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] -= f * alpha[i];
  return out;
}

RootSystem RootSystem::from_directions(std::size_t dimension, const std::vector<std::vector<Rational>>& directions,
                                       std::string label) {
  RootSystem rs;
  rs.dimension_ = dimension;
  rs.regime_ = Regime::kExact;
  rs.label_ = std::move(label);
  for (const auto& d : directions) {
    if (d.size() != dimension) throw InvalidRootError("root has wrong dimension");
    auto c = canonical_direction(d);
    if (rs.find_direction(c)) throw InvalidRootError("duplicate root after normalization");
    rs.roots_.push_back(Root{c, normalized_value(c)});
  }
  rs.finish();
  return rs;
}

RootSystem RootSystem::from_vectors(std::size_t dimension, const std::vector<std::vector<double>>& vectors,
                                    std::string label) {
  RootSystem rs;
  rs.dimension_ = dimension;
  rs.regime_ = Regime::kFloating;
  rs.label_ = std::move(label);
  for (const auto& v : vectors) {
    if (v.size() != dimension) throw InvalidRootError("root has wrong dimension");
    double n2 = dot(v, v);
    if (!(n2 > 0.0) || !std::isfinite(n2)) throw InvalidRootError("zero or non-finite root");
    std::vector<double> w(v);
    double s = std::sqrt(2.0 / n2);
    for (auto& x : w) x *= s;
    if (rs.find(w)) throw InvalidRootError("duplicate root after normalization");
    rs.roots_.push_back(Root{std::nullopt, w});
  }
  rs.finish();
  return rs;
}

std::optional<std::size_t> RootSystem::find(const std::vector<double>& v) const {
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    double err = 0;
    for (std::size_t k = 0; k < dimension_; ++k) err = std::max(err, std::abs(roots_[i].value[k] - v[k]));
    if (err < kMatchTolerance) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> RootSystem::find_direction(const std::vector<Rational>& d) const {
  auto c = canonical_direction(d);
  for (std::size_t i = 0; i < roots_.size(); ++i)
    if (roots_[i].direction && *roots_[i].direction == c) return i;
  return std::nullopt;
}

void RootSystem::finish() {
  const std::size_t n = roots_.size();
  negatives_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::optional<std::size_t> j;
    std::vector<double> neg(roots_[i].value);
    for (auto& x : neg) x = -x;
    if (regime_ == Regime::kExact)
      j = find_direction(negate(*roots_[i].direction));
    else
      j = find(neg);
    if (!j) throw NotARootSystemError("root set is not closed under negation", neg);
    negatives_[i] = *j;
  }
  positives_.clear();
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i]) continue;
    seen[i] = seen[negatives_[i]] = true;
    positives_.push_back(i);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (regime_ == Regime::kExact) {
        auto image = reflect(*roots_[i].direction, *roots_[j].direction);
        if (!find_direction(image))
          throw NotARootSystemError("root set is not closed under reflections", normalized_value(image));
      } else {
        auto image = reflect(roots_[i].value, roots_[j].value);
        if (!find(image)) throw NotARootSystemError("root set is not closed under reflections", image);
      }
    }
}

bool RootSystem::is_product_type() const {
  for (const auto& r : roots_) {
    int nonzero = 0;
    for (double x : r.value)
      if (std::abs(x) > kMatchTolerance) ++nonzero;
    if (nonzero != 1) return false;
  }
  return true;
}

RationalMatrix RootSystem::reflection_matrix(std::size_t i) const {
  if (regime_ != Regime::kExact) throw RegimeError("exact reflection matrix requested in floating regime");
  const auto& d = *roots_.at(i).direction;
  Rational dd = dot(d, d);
  RationalMatrix m = RationalMatrix::identity(dimension_);
  for (std::size_t r = 0; r < dimension_; ++r)
    for (std::size_t c = 0; c < dimension_; ++c) m(r, c) -= 2 * d[r] * d[c] / dd;
  return m;
}

std::vector<double> RootSystem::reflection_matrix_real(std::size_t i) const {
  std::vector<double> m(dimension_ * dimension_, 0.0);
  if (regime_ == Regime::kExact) {
    RationalMatrix e = reflection_matrix(i);
    for (std::size_t r = 0; r < dimension_; ++r)
      for (std::size_t c = 0; c < dimension_; ++c) m[r * dimension_ + c] = to_double(e(r, c));
    return m;
  }
  const auto& a = roots_.at(i).value;
  for (std::size_t r = 0; r < dimension_; ++r)
    for (std::size_t c = 0; c < dimension_; ++c) m[r * dimension_ + c] = (r == c ? 1.0 : 0.0) - a[r] * a[c];
  return m;
}

RootSystem build_root_system(const RootSystemSpec& spec) {
  const std::string& f = spec.family;
  if (f == "explicit") {
    if (!spec.real_roots.empty()) {
      std::size_t n = spec.n > 0 ? static_cast<std::size_t>(spec.n) : spec.real_roots.front().size();
      return RootSystem::from_vectors(n, spec.real_roots);
    }
    std::vector<std::vector<Rational>> dirs;
    for (const auto& r : spec.rational_roots) {
      std::vector<Rational> d;
      for (const auto& s : r) d.push_back(parse_rational(s));
      dirs.push_back(std::move(d));
    }
    std::size_t n = spec.n > 0 ? static_cast<std::size_t>(spec.n) : (dirs.empty() ? 1 : dirs.front().size());
    return RootSystem::from_directions(n, dirs);
  }
  if (spec.n <= 0 && f != "I2") throw InvalidParameterError("root system dimension must be positive");
  const auto n = static_cast<std::size_t>(spec.n);
  std::vector<std::vector<Rational>> dirs;
  if (f == "A1^N" || f == "A1") {
    for (std::size_t i = 0; i < n; ++i) push_pm(dirs, unit(n, i));
    return RootSystem::from_directions(n, dirs, "A1^" + std::to_string(n));
  }
  if (f == "A") {
    if (n < 2) throw InvalidParameterError("family A needs N >= 2 coordinates");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) push_pm(dirs, pair(n, i, 1, j, -1));
    return RootSystem::from_directions(n, dirs, "A" + std::to_string(n - 1));
  }
  if (f == "B") {
    for (std::size_t i = 0; i < n; ++i) push_pm(dirs, unit(n, i));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        push_pm(dirs, pair(n, i, 1, j, -1));
        push_pm(dirs, pair(n, i, 1, j, 1));
      }
    return RootSystem::from_directions(n, dirs, "B" + std::to_string(n));
  }
  if (f == "D") {
    if (n < 2) throw InvalidParameterError("family D needs N >= 2");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        push_pm(dirs, pair(n, i, 1, j, -1));
        push_pm(dirs, pair(n, i, 1, j, 1));
      }
    return RootSystem::from_directions(n, dirs, "D" + std::to_string(n));
  }
  if (f == "I2") {
    if (spec.n != 0 && spec.n != 2) throw InvalidParameterError("I2 lives in dimension 2");
    const int m = spec.m;
    if (m < 1) throw InvalidParameterError("I2 needs m >= 1");
    const std::string label = "I2(" + std::to_string(m) + ")";
    if (m == 1 || m == 2 || m == 4) {
      std::vector<std::vector<Rational>> base = {{1, 0}};
      if (m == 2) base = {{1, 0}, {0, 1}};
      if (m == 4) base = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}};
      for (const auto& d : base) push_pm(dirs, d);
      return RootSystem::from_directions(2, dirs, label);
    }
    std::vector<std::vector<double>> vecs;
    const double pi = std::acos(-1.0);
    for (int k = 0; k < m; ++k) {
      double a = pi * k / m;
      vecs.push_back({std::cos(a), std::sin(a)});
      vecs.push_back({-std::cos(a), -std::sin(a)});
    }
    return RootSystem::from_vectors(2, vecs, label);
  }
  throw InvalidParameterError("unknown root system family: " + f);
}

namespace {

std::vector<Rational> flatten(const RationalMatrix& m) {
  std::vector<Rational> out;
  out.reserve(m.rows() * m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  return out;
}

std::vector<long long> real_key(const std::vector<double>& m) {
  std::vector<long long> k(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) k[i] = std::llround(m[i] * 1e8);
  return k;
}

std::vector<double> matmul_real(const std::vector<double>& a, const std::vector<double>& b, std::size_t n) {
  std::vector<double> c(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] += a[i * n + k] * b[k * n + j];
  return c;
}

std::vector<double> apply_real(const std::vector<double>& g, const std::vector<double>& v, std::size_t n) {
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i] += g[i * n + j] * v[j];
  return out;
}

}  // namespace

ReflectionGroup generate_group(const RootSystem& rs, std::size_t cap) {
  ReflectionGroup g;
  const std::size_t n = rs.dimension();
  g.regime_ = rs.regime();
  g.dimension_ = n;
  const bool exact = rs.regime() == Regime::kExact;

  std::vector<RationalMatrix> gens_exact;
  std::vector<std::vector<double>> gens_real;
  for (std::size_t i : rs.positive_indices()) {
    if (exact) gens_exact.push_back(rs.reflection_matrix(i));
    gens_real.push_back(rs.reflection_matrix_real(i));
  }

  std::map<std::vector<Rational>, std::size_t> exact_index;
  std::map<std::vector<long long>, std::size_t> real_index;
  auto insert = [&](RationalMatrix* em, std::vector<double> rm) -> std::size_t {
    if (exact) {
      auto key = flatten(*em);
      auto it = exact_index.find(key);
      if (it != exact_index.end()) return it->second;
      exact_index.emplace(std::move(key), g.real_.size());
      g.exact_.push_back(*em);
    } else {
      auto key = real_key(rm);
      auto it = real_index.find(key);
      if (it != real_index.end()) return it->second;
      real_index.emplace(std::move(key), g.real_.size());
    }
    if (g.real_.size() >= cap)
      throw RunawayClosureError("reflection group closure exceeded " + std::to_string(cap) + " elements");
    g.real_.push_back(std::move(rm));
    return g.real_.size() - 1;
  };

  RationalMatrix id = RationalMatrix::identity(n);
  std::vector<double> id_real(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) id_real[i * n + i] = 1.0;
  insert(&id, id_real);
  for (std::size_t k = 0; k < gens_real.size(); ++k) {
    RationalMatrix em = exact ? gens_exact[k] : RationalMatrix();
    g.generators_.push_back(insert(&em, gens_real[k]));
  }
  for (std::size_t head = 0; head < g.real_.size(); ++head) {
    for (std::size_t k = 0; k < gens_real.size(); ++k) {
      if (exact) {
        RationalMatrix prod = gens_exact[k] * g.exact_[head];
        std::vector<double> pr(n * n);
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t c = 0; c < n; ++c) pr[r * n + c] = to_double(prod(r, c));
        insert(&prod, std::move(pr));
      } else {
        insert(nullptr, matmul_real(gens_real[k], g.real_[head], n));
      }
    }
  }

  g.permutations_.resize(g.real_.size());
  for (std::size_t e = 0; e < g.real_.size(); ++e) {
    auto& perm = g.permutations_[e];
    perm.resize(rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) {
      std::optional<std::size_t> j;
      if (exact)
        j = rs.find_direction(g.exact_[e] * *rs.root(i).direction);
      else
        j = rs.find(apply_real(g.real_[e], rs.root(i).value, n));
      if (!j) throw InternalConsistencyError("group element does not permute the roots");
      perm[i] = *j;
    }
  }
  return g;
}

std::vector<std::vector<std::size_t>> orbit_partition(const RootSystem& rs, const ReflectionGroup& g) {
  std::vector<std::size_t> parent(rs.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto root_of = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t gen : g.generators()) {
    const auto& perm = g.root_permutation(gen);
    for (std::size_t i = 0; i < rs.size(); ++i) {
      std::size_t a = root_of(i), b = root_of(perm[i]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::map<std::size_t, std::size_t> slot;
  std::vector<std::vector<std::size_t>> orbits;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    std::size_t r = root_of(i);
    auto [it, inserted] = slot.try_emplace(r, orbits.size());
    if (inserted) orbits.emplace_back();
    orbits[it->second].push_back(i);
  }
  return orbits;
}

MultiplicityFunction make_multiplicity(const std::vector<std::vector<std::size_t>>& orbits,
                                       std::vector<Rational> values) {
  if (values.size() != orbits.size())
    throw UnsupportedMultiplicityError("expected " + std::to_string(orbits.size()) + " multiplicity values, got " +
                                       std::to_string(values.size()));
  MultiplicityFunction mu;
  std::size_t nroots = 0;
  for (const auto& o : orbits) nroots += o.size();
  mu.orbit_of_root_.assign(nroots, 0);
  mu.gamma_ = 0;
  for (std::size_t k = 0; k < orbits.size(); ++k) {
    if (sgn(values[k]) < 0) throw UnsupportedMultiplicityError("multiplicity values must be nonnegative");
    for (std::size_t i : orbits[k]) {
      if (i >= nroots) throw UnsupportedMultiplicityError("orbit table does not cover the roots");
      mu.orbit_of_root_[i] = k;
      mu.gamma_ += values[k];
    }
  }
  mu.gamma_ /= 2;
  mu.values_ = std::move(values);
  return mu;
}

bool MultiplicityFunction::is_zero() const {
  for (const auto& v : values_)
    if (sgn(v) != 0) return false;
  return true;
}

double weight_eval(const WeightSpec& w, const MultiplicityFunction& mu, const RootSystem& rs,
                   const std::vector<double>& x) {
  if (sgn(w.t) <= 0) throw InvalidParameterError("weight needs t > 0");
  double prod = 1.0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    double m = to_double(mu.of_root(i));
    if (m == 0.0) continue;
    prod *= std::pow(std::abs(dot(rs.root(i).value, x)), m);
  }
  return prod / w.c_mu * std::pow(to_double(w.t), -to_double(w.exponent));
}

WeightSpec make_weight_spec(const MultiplicityFunction& mu, const RootSystem& rs, const Rational& t) {
  if (sgn(t) <= 0) throw InvalidParameterError("weight needs t > 0");
  WeightSpec w;
  w.t = t;
  w.exponent = mu.gamma() + make_rational(static_cast<long>(rs.dimension()), 2);
  w.c_mu = mms_constant(mu, rs);
  return w;
}

}  // namespace dunklsb
