#include "dunklsb/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <memory>
#include <random>
#include <sstream>
#include <thread>

#include <Eigen/Dense>
#include <boost/version.hpp>
#include <gmp.h>

#include "dunklsb/dunkl.hpp"
#include "dunklsb/error.hpp"
#include "dunklsb/kernel.hpp"
#include "dunklsb/oracles.hpp"
#include "dunklsb/transforms.hpp"

namespace dunklsb {

using nlohmann::json;

// ---------------------------------------------------------------- config

namespace {

template <class T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

Rational rational_field(const json& v, const std::string& where) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_number()) return from_double(v.get<double>());
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ": expected a rational string or a number");
}

}  // namespace

SuiteConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> known = {"root_system", "mu", "t", "basis_degree", "kernel_truncation",
                                                 "ordering", "tolerances", "samples", "seed", "output"};
  for (const auto& [k, v] : j.items())
    if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError("unknown config field '" + k + "'");
  SuiteConfig cfg;
  if (!j.contains("root_system")) throw ConfigError("missing field 'root_system'");
  const json& rs = j.at("root_system");
  if (!rs.is_object()) throw ConfigError("'root_system' must be an object");
  cfg.root_system.family = field<std::string>(rs, "family", "");
  cfg.root_system.n = field<int>(rs, "n", 0);
  cfg.root_system.m = field<int>(rs, "m", 0);
  if (rs.contains("roots")) {
    for (const auto& row : rs.at("roots")) {
      std::vector<std::string> r;
      for (const auto& x : row) r.push_back(x.is_string() ? x.get<std::string>() : x.dump());
      cfg.root_system.rational_roots.push_back(std::move(r));
    }
  }
  if (rs.contains("real_roots")) cfg.root_system.real_roots = rs.at("real_roots").get<std::vector<std::vector<double>>>();

  if (!j.contains("mu") || !j.at("mu").is_array()) throw ConfigError("'mu' must be a list with one value per orbit");
  for (const auto& v : j.at("mu")) {
    rational_field(v, "mu");
    cfg.mu.push_back(v.is_string() ? v.get<std::string>() : format_rational(rational_field(v, "mu")));
  }
  if (j.contains("t")) {
    if (!j.at("t").is_array()) throw ConfigError("'t' must be a list");
    for (const auto& v : j.at("t")) cfg.t_values.push_back(rational_field(v, "t"));
  } else {
    cfg.t_values = {make_rational(1, 2), Rational(1), Rational(2)};
  }
  cfg.basis_degree = field<int>(j, "basis_degree", cfg.basis_degree);
  cfg.kernel_truncation = field<int>(j, "kernel_truncation", cfg.kernel_truncation);
  cfg.ordering = parse_basis_ordering(field<std::string>(j, "ordering", to_string(cfg.ordering)));
  if (j.contains("tolerances")) {
    const json& tol = j.at("tolerances");
    if (!tol.is_object()) throw ConfigError("'tolerances' must be an object keyed by check id");
    for (const auto& [k, v] : tol.items()) {
      if (!v.is_number()) throw ConfigError("tolerance for '" + k + "' must be a number");
      cfg.tolerances[k] = v.get<double>();
    }
  }
  cfg.samples = field<int>(j, "samples", cfg.samples);
  cfg.seed = field<std::uint64_t>(j, "seed", cfg.seed);
  cfg.output = field<std::string>(j, "output", "");
  validate(cfg);
  return cfg;
}

SuiteConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json config_to_json(const SuiteConfig& cfg) {
  json rs = {{"family", cfg.root_system.family}};
  if (cfg.root_system.n) rs["n"] = cfg.root_system.n;
  if (cfg.root_system.m) rs["m"] = cfg.root_system.m;
  if (!cfg.root_system.rational_roots.empty()) rs["roots"] = cfg.root_system.rational_roots;
  if (!cfg.root_system.real_roots.empty()) rs["real_roots"] = cfg.root_system.real_roots;
  json t = json::array();
  for (const auto& v : cfg.t_values) t.push_back(format_rational(v));
  json tol = json::object();
  for (const auto& [k, v] : cfg.tolerances) tol[k] = v;
  return {{"root_system", rs},
          {"mu", cfg.mu},
          {"t", t},
          {"basis_degree", cfg.basis_degree},
          {"kernel_truncation", cfg.kernel_truncation},
          {"ordering", to_string(cfg.ordering)},
          {"tolerances", tol},
          {"samples", cfg.samples},
          {"seed", cfg.seed},
          {"output", cfg.output}};
}

void validate(const SuiteConfig& cfg) {
  for (const auto& m : cfg.mu) {
    Rational v;
    try {
      v = parse_rational(m);
    } catch (const Error& e) {
      throw ConfigError("mu: " + std::string(e.what()));
    }
    if (sgn(v) < 0) throw ConfigError("mu must be nonnegative, got " + m);
  }
  if (cfg.t_values.empty()) throw ConfigError("at least one t value is required");
  for (const auto& t : cfg.t_values)
    if (sgn(t) <= 0) throw ConfigError("t values must be positive, got " + format_rational(t));
  if (cfg.basis_degree < 2) throw ConfigError("basis_degree must be at least 2");
  if (cfg.kernel_truncation < cfg.basis_degree + 4) throw ConfigError("kernel_truncation must be at least basis_degree + 4");
  if (cfg.samples <= 0) throw ConfigError("samples must be positive");
  for (const auto& [id, v] : cfg.tolerances) {
    const auto& cat = check_catalog();
    if (std::none_of(cat.begin(), cat.end(), [&](const CatalogEntry& e) { return e.id == id; }))
      throw ConfigError("tolerance given for unknown check '" + id + "'");
    if (!(v >= 0)) throw ConfigError("tolerance for '" + id + "' must be nonnegative");
  }
  std::vector<Rational> values;
  for (const auto& m : cfg.mu) values.push_back(parse_rational(m));
  try {
    DunklContext::from_spec(cfg.root_system, values);
  } catch (const Error& e) {
    throw ConfigError(std::string("root_system/mu: ") + e.what());
  }
}

// ---------------------------------------------------------------- report basics

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass:
      return "pass";
    case CheckStatus::kFail:
      return "fail";
    case CheckStatus::kSkipped:
      return "skipped";
    case CheckStatus::kError:
      return "error";
  }
  return "error";
}

int Report::count(CheckStatus s) const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [&](const CheckResult& c) { return c.status == s; }));
}

bool Report::passed() const { return count(CheckStatus::kFail) == 0 && count(CheckStatus::kError) == 0; }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

const std::vector<CatalogEntry>& check_catalog() {
  static const std::vector<CatalogEntry> catalog = {
      {"coxeter.group", "generated group is closed, orthogonal and permutes the roots", "finite reflection group", 0},
      {"coxeter.multiplicity", "multiplicity is nonnegative, even in alpha and constant on orbits",
       "the multiplicity function is non-negative", 0},
      {"dunkl.commutativity", "T_i T_j = T_j T_i on all monomials of degree <= 6", "Dunkl operators commute", 0},
      {"dunkl.trivial_reduction", "mu = 0 gives partial derivatives and the classical Laplacian",
       "reduces to the usual partial derivative", 0},
      {"hermite.fischer_orthogonality", "Fischer Gram of q_nu is diag(r_nu) up to the basis degree",
       "the Fischer type formula", 0},
      {"hermite.moment_orthogonality", "ground state moments of unnormalized H_{t;nu} H_{t;kappa} are r_nu delta",
       "orthonormal basis of the ground state space", 0},
      {"measure.normalization", "gaussian_moment(1, t) = 1", "probability measure normalization", 0},
      {"kernel.block_recursion", "T^x_i E_n = y_i E_{n-1} for every block through the truncation",
       "the Dunkl kernel eigenfunction equation", 0},
      {"kernel.construction_agreement", "linear solve and basis sum kernel tables are identical",
       "the Dunkl kernel as a sum over an orthonormal basis", 0},
      {"kernel.rank_one_oracle", "rank one truncated kernel against the coefficient recursion (relative)",
       "the rank one Dunkl kernel", 1e-12},
      {"kernel.heat_identity", "A(z,q) rho(0,q)^{1/2} = rho(z,q)", "Version A kernel and the heat kernel", 1e-12},
      {"kernel.version_c_relations", "C_t = A_{2t}(z,0) A_{t/2}(z/2,q) and C_t = A_t(0,q) A_t(z,q)",
       "Version C kernel relations", 1e-12},
      {"kernel.positive_definite", "reproducing kernel Gram matrix has no negative eigenvalue beyond tolerance",
       "reproducing kernel Hilbert space", 1e-10},
      {"kernel.dilation_identity", "K_t(z, lambda w) = K_s(z / lambda, w) with lambda = sqrt(t/s)",
       "dilation of reproducing kernels", 1e-12},
      {"transform.a_basis", "A_t h_{t;nu} = phi_{t;nu} pointwise, |nu| <= 3", "Version A maps h to phi", 1e-8},
      {"transform.a_gram", "B-space Gram of A_t h_{t;nu} is the identity, |nu| <= 3", "unitarity of Version A", 1e-6},
      {"transform.b_paths", "Version B directly and as A V^{-1} agree; B V psi = A psi", "Version B", 1e-8},
      {"transform.dilation_diagram", "D_2 A_t psi = A_s delta_2 psi with s = 1/2, t = 2", "the dilation diagram commutes",
       1e-8},
      {"transform.bso_relation", "BSO transform equals A_1 delta_{1/2} R", "relation to the Ben Said-Orsted transform",
       1e-8},
      {"transform.translation", "Dunkl translate of the heat kernel equals rho on a 5x5 grid",
       "translation of the heat kernel", 1e-8},
      {"transform.convolution", "sigma_t * psi equals C_t psi at real points", "Version C as a heat convolution", 1e-8},
      {"transform.c_unitarity", "<C psi, C psi>_C = |psi|^2 on basis spans, |nu| <= 3 (relative)", "unitarity of Version C", 1e-6},
      {"transform.c_scale_relation", "|psi|^2 in omega_{t/2} is 2^{gamma+N/2} |psi|^2 in omega_t, exactly",
       "rescaling of the measure", 0},
  };
  return catalog;
}

// ---------------------------------------------------------------- running

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Skip {
  std::string reason;
};

/// A shared table whose construction failed.
struct SetupFailure {
  std::string what;
};

/// What one check hands back before the status is assigned.
struct Outcome {
  bool exact = false;
  Rational exact_residual = 0;
  double residual = 0;
  int samples = 0;
  std::string note;
  /// Replaces a catalog tolerance of 0 when an exact check had to run numerically.
  std::optional<double> numeric_tolerance;
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Rational abs_r(const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; }

Rational max_abs(const Polynomial& p) {
  Rational m = 0;
  for (const auto& [k, c] : p.terms()) m = std::max(m, abs_r(c));
  return m;
}

Rational max_abs(const SurdPolynomial& p) {
  Rational m = 0;
  for (const auto& [r, q] : p.components()) m = std::max(m, max_abs(q));
  return m;
}

double dist(ComplexLD a, ComplexLD b) { return static_cast<double>(std::abs(a - b)); }

std::vector<ComplexLD> random_point(std::mt19937_64& rng, std::size_t n, double radius, bool real = false) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<ComplexLD> v(n);
  for (auto& c : v) c = ComplexLD(u(rng), real ? 0.0 : u(rng));
  long double norm = 0;
  for (const auto& c : v) norm += std::norm(c);
  if (norm == 0) return v;
  const long double scale = radius * std::abs(u(rng)) / std::sqrt(norm);
  for (auto& c : v) c *= scale;
  return v;
}

std::vector<std::vector<ComplexLD>> sample(std::mt19937_64& rng, std::size_t n, double radius, int count) {
  std::vector<std::vector<ComplexLD>> out;
  for (int i = 0; i < count; ++i) out.push_back(random_point(rng, n, radius));
  return out;
}

double max_diff(const HolomorphicImage& a, const HolomorphicImage& b, const std::vector<std::vector<ComplexLD>>& pts) {
  double worst = 0;
  for (const auto& z : pts) worst = std::max(worst, dist(a(z), b(z)));
  return worst;
}

HermiteSpan single(const Rational& t, const Monomial& nu) { return HermiteSpan{t, {{nu, Complex(1, 0)}}}; }

// phi_{t;nu}(z) = t^{-|nu|/2} q_nu(z) / sqrt(r_nu)
ComplexPolynomial phi_t(const OrthogonalBasis& basis, const Rational& t, const Monomial& nu) {
  const auto& e = basis.at(nu);
  const double s = std::pow(to_double(t), -0.5 * nu.degree()) / std::sqrt(to_double(e.r));
  return to_complex(e.q) * Complex(s, 0);
}

constexpr int kTransformDegree = 3;
constexpr int kKernelPoints = 100;

/// Shared tables, built once before the checks fan out. Any piece may be
/// missing with the reason recorded.
class Setup {
 public:
  explicit Setup(const SuiteConfig& c) : cfg(c) {}

  const SuiteConfig& cfg;
  std::optional<DunklContext> ctx;
  std::optional<DunklContext> zero_ctx;
  std::optional<OrthogonalBasis> basis;
  std::optional<KernelTable> table;
  std::optional<MomentFunctional> mf;
  std::optional<FischerGram> gram;
  std::map<Rational, HermiteFamily> families;
  std::string failure;

  const DunklContext& context() const { return need(ctx); }
  bool exact() const { return context().regime() == Regime::kExact; }
  std::size_t n() const { return context().dimension(); }
  const OrthogonalBasis& b() const { return need(basis); }
  const KernelTable& k() const { return need(table); }
  const MomentFunctional& m() const { return need(mf); }
  const FischerGram& g() const { return need(gram); }
  const HermiteFamily& family(const Rational& t) const {
    auto it = families.find(t);
    if (it == families.end()) throw SetupFailure{failure.empty() ? "Hermite family missing" : failure};
    return it->second;
  }
  void require_exact() const {
    if (!exact()) throw Skip{"needs the exact regime; the configured root system is floating"};
  }
  /// Basis elements with |nu| <= the transform degree.
  std::vector<Monomial> low_indices() const {
    std::vector<Monomial> out;
    for (const auto& e : b().elements())
      if (e.nu.degree() <= std::min(kTransformDegree, b().max_degree())) out.push_back(e.nu);
    return out;
  }

 private:
  template <class T>
  const T& need(const std::optional<T>& x) const {
    if (!x) throw SetupFailure{failure.empty() ? "shared table missing" : failure};
    return *x;
  }
};

void build_setup(Setup& s) {
  const SuiteConfig& cfg = s.cfg;
  auto attempt = [&](const char* what, auto&& fn) {
    if (!s.failure.empty()) return;
    try {
      fn();
    } catch (const std::exception& e) {
      s.failure = std::string(what) + ": " + e.what();
    }
  };
  std::vector<Rational> values, zeros;
  for (const auto& m : cfg.mu) {
    values.push_back(parse_rational(m));
    zeros.push_back(0);
  }
  attempt("context", [&] {
    s.ctx.emplace(DunklContext::from_spec(cfg.root_system, values));
    s.zero_ctx.emplace(DunklContext::from_spec(cfg.root_system, zeros));
  });
  if (!s.ctx || s.ctx->regime() != Regime::kExact) return;
  attempt("orthogonal basis", [&] { s.basis.emplace(build_orthogonal_basis(*s.ctx, cfg.basis_degree, cfg.ordering)); });
  attempt("kernel table", [&] { s.table.emplace(KernelTable::linear_solve(*s.ctx, cfg.kernel_truncation)); });
  attempt("moment table", [&] { s.mf.emplace(*s.ctx, 2 * cfg.kernel_truncation + 2 * cfg.basis_degree); });
  attempt("Fischer Gram", [&] { s.gram.emplace(*s.ctx, cfg.kernel_truncation); });
  attempt("Hermite families", [&] {
    for (const auto& t : cfg.t_values) s.families.emplace(t, HermiteFamily(*s.ctx, *s.basis, t));
    for (const auto& t : {Rational(1), Rational(2)}) s.families.emplace(t, HermiteFamily(*s.ctx, *s.basis, t));
  });
}

Outcome exact_outcome(const Rational& residual, int samples, std::string note = {}) {
  Outcome o;
  o.exact = true;
  o.exact_residual = residual;
  o.samples = samples;
  o.note = std::move(note);
  return o;
}

Outcome float_outcome(double residual, int samples, std::string note = {}) {
  Outcome o;
  o.residual = residual;
  o.samples = samples;
  o.note = std::move(note);
  return o;
}

// ---- coxeter

Outcome check_group(const Setup& s, std::mt19937_64&) {
  const auto& ctx = s.context();
  const auto& g = ctx.group();
  const auto& rs = ctx.root_system();
  const std::size_t n = ctx.dimension();
  if (!s.exact()) {
    // floating regime: orthogonality and root permutation with a numeric residual
    double worst = 0;
    for (std::size_t k = 0; k < g.order(); ++k) {
      const auto& m = g.element_real(k);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          double dot = 0;
          for (std::size_t l = 0; l < n; ++l) dot += m[i * n + l] * m[j * n + l];
          worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
        }
      const auto& perm = g.root_permutation(k);
      for (std::size_t r = 0; r < rs.size(); ++r) {
        const auto& a = rs.root(r).value;
        const auto& b = rs.root(perm[r]).value;
        for (std::size_t i = 0; i < n; ++i) {
          double v = 0;
          for (std::size_t l = 0; l < n; ++l) v += m[i * n + l] * a[l];
          worst = std::max(worst, std::abs(v - b[i]));
        }
      }
    }
    Outcome o = float_outcome(worst, static_cast<int>(g.order()), "floating regime, numeric residual");
    o.numeric_tolerance = 1e-12;
    return o;
  }
  // Count of violated relations: orthogonality, roots mapped to roots, closure,
  // generators are reflections.
  long violations = 0;
  std::vector<RationalMatrix> els;
  for (std::size_t k = 0; k < g.order(); ++k) els.push_back(g.element(k));
  const RationalMatrix id = RationalMatrix::identity(n);
  std::map<std::vector<Rational>, std::size_t> index;
  auto key = [&](const RationalMatrix& a) {
    std::vector<Rational> v;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) v.push_back(a(i, j));
    return v;
  };
  for (std::size_t k = 0; k < els.size(); ++k) index[key(els[k])] = k;
  if (index.size() != els.size()) ++violations;
  for (std::size_t k = 0; k < els.size(); ++k) {
    if (!(els[k] * els[k].transpose() == id)) ++violations;
    const auto& perm = g.root_permutation(k);
    std::vector<bool> hit(rs.size(), false);
    for (std::size_t r = 0; r < rs.size(); ++r) {
      if (perm[r] >= rs.size() || hit[perm[r]]) {
        ++violations;
        continue;
      }
      hit[perm[r]] = true;
      const auto& a = *rs.root(r).direction;
      const auto& b = *rs.root(perm[r]).direction;
      std::vector<Rational> image(n, Rational(0));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < n; ++l) image[i] += els[k](i, l) * a[l];
      if (!(canonical_direction(image) == canonical_direction(b))) ++violations;
    }
    for (std::size_t l = 0; l < els.size(); ++l)
      if (!index.count(key(els[k] * els[l]))) ++violations;
  }
  for (std::size_t gen : g.generators()) {
    const auto& r = els[gen];
    Rational trace = 0;
    for (std::size_t i = 0; i < n; ++i) trace += r(i, i);
    if (!(r * r == id) || trace != Rational(static_cast<long>(n) - 2)) ++violations;
  }
  return exact_outcome(Rational(violations), static_cast<int>(els.size()), "residual counts violated relations");
}

Outcome check_multiplicity(const Setup& s, std::mt19937_64&) {
  const auto& ctx = s.context();
  const auto& mu = ctx.multiplicity();
  const auto& rs = ctx.root_system();
  const auto& g = ctx.group();
  long violations = 0;
  Rational gamma = 0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (sgn(mu.of_root(i)) < 0) ++violations;
    if (mu.of_root(rs.negative_of(i)) != mu.of_root(i)) ++violations;
    for (std::size_t k = 0; k < g.order(); ++k)
      if (mu.of_root(g.root_permutation(k)[i]) != mu.of_root(i)) ++violations;
  }
  for (std::size_t i : rs.positive_indices()) gamma += mu.of_root(i);
  if (gamma != mu.gamma()) ++violations;
  return exact_outcome(Rational(violations), static_cast<int>(rs.size()), "residual counts violated relations");
}

// ---- dunkl

constexpr int kOperatorDegree = 6;

std::vector<Polynomial> monomial_battery(std::size_t n) {
  std::vector<Polynomial> out;
  for (int d = 0; d <= kOperatorDegree; ++d)
    for (const auto& m : monomials_of_degree(n, d)) out.push_back(Polynomial::monomial(n, m));
  return out;
}

Outcome check_commutativity(const Setup& s, std::mt19937_64&) {
  s.require_exact();
  const auto& ctx = s.context();
  const std::size_t n = ctx.dimension();
  Rational worst = 0;
  int count = 0;
  for (const auto& p : monomial_battery(n)) {
    std::vector<Polynomial> first;
    for (std::size_t i = 0; i < n; ++i) first.push_back(dunkl_apply(ctx, i, p));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        worst = std::max(worst, max_abs(dunkl_apply(ctx, i, first[j]) - dunkl_apply(ctx, j, first[i])));
        ++count;
      }
  }
  return exact_outcome(worst, count);
}

Outcome check_trivial_reduction(const Setup& s, std::mt19937_64&) {
  s.require_exact();
  const auto& zero = *s.zero_ctx;
  const std::size_t n = zero.dimension();
  Rational worst = 0;
  int count = 0;
  for (const auto& p : monomial_battery(n)) {
    Polynomial lap(n);
    for (std::size_t i = 0; i < n; ++i) {
      Polynomial d = p.partial(i);
      worst = std::max(worst, max_abs(dunkl_apply(zero, i, p) - d));
      lap += d.partial(i);
    }
    worst = std::max(worst, max_abs(dunkl_laplacian(zero, p) - lap));
    ++count;
  }
  return exact_outcome(worst, count);
}

// ---- hermite and measure

Outcome check_fischer(const Setup& s, std::mt19937_64&) {
  s.require_exact();
  const auto& el = s.b().elements();
  Rational worst = 0;
  int count = 0;
  for (std::size_t i = 0; i < el.size(); ++i)
    for (std::size_t j = i; j < el.size(); ++j) {
      Rational v = fischer_pair(s.context(), el[i].q, el[j].q, 1);
      worst = std::max(worst, abs_r(i == j ? Rational(v - el[i].r) : v));
      ++count;
    }
  return exact_outcome(worst, count);
}

Outcome check_moment(const Setup& s, std::mt19937_64&) {
  s.require_exact();
  const auto& ctx = s.context();
  const auto& el = s.b().elements();
  Rational worst = 0;
  int count = 0;
  for (const auto& t : s.cfg.t_values) {
    std::vector<SurdPolynomial> h;
    for (const auto& e : el) h.push_back(hermite_unnormalized(ctx, s.b(), t, e.nu));
    for (std::size_t i = 0; i < el.size(); ++i)
      for (std::size_t j = i; j < el.size(); ++j) {
        SurdPolynomial m = gaussian_moment(ctx, h[i] * h[j], t);
        Rational expected = i == j ? el[i].r : Rational(0);
        SurdPolynomial diff = m;
        diff += SurdPolynomial(Polynomial::constant(ctx.dimension(), -expected));
        worst = std::max(worst, max_abs(diff));
        ++count;
      }
  }
  return exact_outcome(worst, count);
}

Outcome check_normalization(const Setup& s, std::mt19937_64&) {
  s.require_exact();
  Rational worst = 0;
  const Polynomial one = Polynomial::constant(s.n(), 1);
  for (const auto& t : s.cfg.t_values) {
    worst = std::max(worst, abs_r(gaussian_moment(s.context(), one, t) - 1));
    worst = std::max(worst, abs_r(s.m().m_exact(t, one) - 1));
  }
  return exact_outcome(worst, static_cast<int>(s.cfg.t_values.size()));
}

// ---- kernel

Outcome check_block_recursion(const Setup& s, std::mt19937_64&) {
  s.require_exact();
  const auto& ctx = s.context();
  const auto& table = s.k();
  const std::size_t n = ctx.dimension();
  Rational worst = 0;
  int count = 0;
  Polynomial previous = table.block(0);
  worst = std::max(worst, max_abs(previous - Polynomial::constant(2 * n, 1)));
  for (int d = 1; d <= table.max_degree(); ++d) {
    Polynomial e = table.block(d);
    for (std::size_t i = 0; i < n; ++i) {
      worst = std::max(worst, max_abs(dunkl_apply(ctx, i, e) - Polynomial::variable(2 * n, n + i) * previous));
      ++count;
    }
    previous = std::move(e);
  }
  return exact_outcome(worst, count);
}

Outcome check_construction(const Setup& s, std::mt19937_64&) {
  s.require_exact();
  const int d = s.cfg.kernel_truncation;
  auto basis = build_orthogonal_basis(s.context(), d, s.cfg.ordering);
  auto other = KernelTable::basis_sum(s.context(), basis, d);
  Rational worst = 0;
  for (int k = 0; k <= d; ++k) worst = std::max(worst, max_abs(s.k().block(k) - other.block(k)));
  return exact_outcome(worst, d + 1);
}

Outcome check_rank_one(const Setup& s, std::mt19937_64& rng) {
  s.require_exact();
  if (s.n() != 1) throw Skip{"needs a rank one root system"};
  constexpr int kDegree = 40;
  const Rational mu = s.context().multiplicity().orbit_value(0);
  auto table = KernelTable::linear_solve(s.context(), kDegree);
  double worst = 0;
  for (int i = 0; i < kKernelPoints; ++i) {
    auto z = random_point(rng, 1, 2.0), w = random_point(rng, 1, 2.0);
    ComplexLD expected = z2_kernel_series(mu, z[0], w[0], 3 * kDegree);
    ComplexLD got = eval_dunkl_kernel(table, z, w).value;
    worst = std::max(worst, static_cast<double>(std::abs(got - expected) / std::abs(expected)));
  }
  return float_outcome(worst, kKernelPoints, "truncation 40, |z|, |w| <= 2");
}

Outcome check_heat_identity(const Setup& s, std::mt19937_64& rng) {
  s.require_exact();
  const auto& table = s.k();
  const std::size_t n = s.n();
  std::vector<ComplexLD> zero(n, 0);
  double worst = 0;
  int count = 0;
  for (const auto& t : s.cfg.t_values)
    for (int i = 0; i < kKernelPoints; ++i) {
      auto z = random_point(rng, n, 2.0), q = random_point(rng, n, 2.0, true);
      ComplexLD a = sb_kernel(table, KernelVersion::kA, t, z, q).value;
      ComplexLD rho0 = heat_kernel(table, t, zero, q).value;
      ComplexLD rho = heat_kernel(table, t, z, q).value;
      worst = std::max(worst, dist(a * std::sqrt(rho0), rho));
      ++count;
    }
  return float_outcome(worst, count);
}

Outcome check_version_c(const Setup& s, std::mt19937_64& rng) {
  s.require_exact();
  const auto& table = s.k();
  const std::size_t n = s.n();
  std::vector<ComplexLD> zero(n, 0);
  double worst = 0;
  int count = 0;
  for (const auto& t : s.cfg.t_values)
    for (int i = 0; i < kKernelPoints; ++i) {
      auto z = random_point(rng, n, 2.0), q = random_point(rng, n, 2.0, true);
      std::vector<ComplexLD> half = z;
      for (auto& c : half) c /= 2;
      ComplexLD c = sb_kernel(table, KernelVersion::kC, t, z, q).value;
      ComplexLD a1 = sb_kernel(table, KernelVersion::kA, 2 * t, z, zero).value *
                     sb_kernel(table, KernelVersion::kA, t / 2, half, q).value;
      ComplexLD a2 = sb_kernel(table, KernelVersion::kA, t, zero, q).value *
                     sb_kernel(table, KernelVersion::kA, t, z, q).value;
      worst = std::max({worst, dist(c, a1), dist(c, a2)});
      count += 2;
    }
  return float_outcome(worst, count);
}

Outcome check_positive_definite(const Setup& s, std::mt19937_64& rng) {
  s.require_exact();
  constexpr int kPoints = 8;
  double worst = 0, min_eig = std::numeric_limits<double>::infinity();
  for (const auto& t : s.cfg.t_values) {
    std::vector<std::vector<ComplexLD>> pts;
    for (int i = 0; i < kPoints; ++i) pts.push_back(random_point(rng, s.n(), std::sqrt(to_double(t))));
    Eigen::MatrixXcd g(kPoints, kPoints);
    for (int i = 0; i < kPoints; ++i)
      for (int j = 0; j < kPoints; ++j) {
        ComplexLD k = reproducing_kernel(s.k(), t, pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]).value;
        g(i, j) = std::complex<double>(static_cast<double>(k.real()), static_cast<double>(k.imag()));
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(g);
    const double lo = eig.eigenvalues().minCoeff();
    min_eig = std::min(min_eig, lo);
    worst = std::max(worst, -lo);
  }
  return float_outcome(std::max(worst, 0.0), kPoints * static_cast<int>(s.cfg.t_values.size()),
                       "residual is max(0, -min eigenvalue); min eigenvalue " + format_double(min_eig));
}

Outcome check_dilation_identity(const Setup& s, std::mt19937_64& rng) {
  s.require_exact();
  double worst = 0;
  int count = 0;
  for (const auto& t : s.cfg.t_values) {
    const Rational sv = t / 4;
    const long double lambda = 2;
    for (int i = 0; i < s.cfg.samples; ++i) {
      auto z = random_point(rng, s.n(), std::sqrt(to_double(t))), w = random_point(rng, s.n(), std::sqrt(to_double(sv)));
      std::vector<ComplexLD> lw = w, sz = z;
      for (auto& c : lw) c *= lambda;
      for (auto& c : sz) c /= lambda;
      worst = std::max(worst, dist(reproducing_kernel(s.k(), t, z, lw).value, reproducing_kernel(s.k(), sv, sz, w).value));
      ++count;
    }
  }
  return float_outcome(worst, count, "s = t/4, lambda = 2");
}

// ---- transforms

double transform_radius(const Rational& t) { return 1.2 * std::sqrt(to_double(t)); }

Outcome check_a_basis(const Setup& s, std::mt19937_64& rng) {
  s.require_exact();
  double worst = 0;
  int count = 0;
  for (const auto& t : s.cfg.t_values) {
    const auto& family = s.family(t);
    auto pts = sample(rng, s.n(), transform_radius(t), s.cfg.samples);
    for (const auto& nu : s.low_indices()) {
      auto img = transform_A(s.k(), s.m(), to_gaussian(family, single(t, nu)), t);
      auto phi = phi_t(s.b(), t, nu);
      for (const auto& z : pts) worst = std::max(worst, dist(img(z), evaluate_ld(phi, z)));
      count += static_cast<int>(pts.size());
    }
  }
  return float_outcome(worst, count, "sample radius 1.2 sqrt(t)");
}

Outcome check_a_gram(const Setup& s, std::mt19937_64&) {
  s.require_exact();
  double worst = 0;
  int count = 0;
  for (const auto& t : s.cfg.t_values) {
    const auto& family = s.family(t);
    std::vector<HolomorphicImage> imgs;
    for (const auto& nu : s.low_indices()) imgs.push_back(transform_A(s.k(), s.m(), to_gaussian(family, single(t, nu)), t));
    for (std::size_t a = 0; a < imgs.size(); ++a)
      for (std::size_t b = 0; b < imgs.size(); ++b) {
        worst = std::max(worst, dist(bspace_inner(s.g(), t, imgs[a], imgs[b]), a == b ? 1.0L : 0.0L));
        ++count;
      }
  }
  return float_outcome(worst, count);
}

Outcome check_b_paths(const Setup& s, std::mt19937_64& rng) {
  s.require_exact();
  double worst = 0;
  int count = 0;
  for (const auto& t : s.cfg.t_values) {
    const auto& family = s.family(t);
    auto pts = sample(rng, s.n(), transform_radius(t), s.cfg.samples);
    for (const auto& nu : s.low_indices()) {
      auto h = family.numeric(nu);
      worst = std::max(worst, max_diff(transform_B_direct(s.k(), s.m(), h, t), transform_B_composed(s.k(), s.m(), h, t), pts));
      auto psi = to_gaussian(family, single(t, nu));
      auto vpsi = ground_state(t, GroundStateDirection::kForward, psi);
      worst = std::max(worst, max_diff(transform_B_direct(s.k(), s.m(), vpsi.poly, t), transform_A(s.k(), s.m(), psi, t), pts));
      count += 2 * static_cast<int>(pts.size());
    }
  }
  return float_outcome(worst, count);
}

Outcome check_dilation_diagram(const Setup& s, std::mt19937_64& rng) {
  s.require_exact();
  const Rational t = 2, sv = make_rational(1, 2), lambda = 2;
  const auto& family = s.family(t);
  auto pts = sample(rng, s.n(), 0.9, s.cfg.samples);
  double worst = 0;
  int count = 0;
  for (const auto& nu : s.low_indices()) {
    auto psi = to_gaussian(family, single(t, nu));
    auto left = dilate(lambda, transform_A(s.k(), s.m(), psi, t));
    auto right = transform_A(s.k(), s.m(), dilate(lambda, psi), sv);
    worst = std::max(worst, max_diff(left, right, pts));
    count += static_cast<int>(pts.size());
  }
  return float_outcome(worst, count, "|z| <= 0.9");
}

Outcome check_bso(const Setup& s, std::mt19937_64& rng) {
  s.require_exact();
  const Rational one = 1;
  const auto& family = s.family(one);
  const double c = s.k().mms();
  const double r = std::sqrt(c) * std::pow(2.0, -(to_double(s.context().gamma()) + 0.5 * static_cast<double>(s.n())));
  auto pts = sample(rng, s.n(), transform_radius(one), s.cfg.samples);
  double worst = 0;
  int count = 0;
  for (const auto& nu : s.low_indices()) {
    auto phi = to_gaussian(family, single(one, nu));
    auto bso = transform_BSO(s.k(), s.m(), phi);
    auto composed = transform_A(s.k(), s.m(), dilate(make_rational(1, 2), scale(phi, Complex(r, 0))), one);
    worst = std::max(worst, max_diff(bso, composed, pts));
    count += static_cast<int>(pts.size());
  }
  return float_outcome(worst, count, "c = " + format_double(c));
}

Outcome check_translation(const Setup& s, std::mt19937_64&) {
  s.require_exact();
  const std::size_t n = s.n();
  double worst = 0;
  int count = 0;
  for (const auto& t : s.cfg.t_values) {
    const double st = std::sqrt(to_double(t));
    // 5 x 5 grid over (x, q) along the first coordinate axis
    for (int i = -2; i <= 2; ++i)
      for (int j = -2; j <= 2; ++j) {
        std::vector<double> x(n, 0.0), q(n, 0.0);
        x[0] = i * 0.5 * st;
        q[0] = j * 0.5 * st;
        if (n > 1) {
          x[1] = 0.25 * j * st;
          q[1] = -0.25 * i * st;
        }
        std::vector<ComplexLD> xz(x.begin(), x.end()), qz(q.begin(), q.end());
        long double th = translate_heat(s.k(), s.m(), t, x, q);
        worst = std::max(worst, static_cast<double>(std::abs(th - heat_kernel(s.k(), t, xz, qz).value.real())));
        ++count;
      }
  }
  return float_outcome(worst, count);
}

Outcome check_convolution(const Setup& s, std::mt19937_64& rng) {
  s.require_exact();
  double worst = 0;
  int count = 0;
  for (const auto& t : s.cfg.t_values) {
    const auto& family = s.family(t);
    std::vector<std::vector<double>> xs;
    for (int i = 0; i < s.cfg.samples; ++i) {
      auto p = random_point(rng, s.n(), transform_radius(t), true);
      std::vector<double> x;
      for (const auto& c : p) x.push_back(static_cast<double>(c.real()));
      xs.push_back(std::move(x));
    }
    for (const auto& nu : s.low_indices()) {
      auto psi = to_gaussian(family, single(t, nu));
      auto c = transform_C(s.k(), s.m(), psi, t);
      for (const auto& x : xs) {
        std::vector<ComplexLD> xz(x.begin(), x.end());
        worst = std::max(worst, dist(convolve_heat(s.k(), s.m(), psi, t, x), c(xz)));
        ++count;
      }
    }
  }
  return float_outcome(worst, count);
}

/// Basis elements with |nu| <= 3 and a few rational spans of them.
std::vector<std::vector<std::pair<Monomial, Rational>>> norm_spans(const Setup& s, std::mt19937_64& rng) {
  std::vector<std::vector<std::pair<Monomial, Rational>>> out;
  auto idx = s.low_indices();
  for (const auto& nu : idx) out.push_back({{nu, Rational(1)}});
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
  std::uniform_int_distribution<std::size_t> pick(0, idx.size() - 1);
  for (int k = 0; k < 3; ++k) {
    std::map<Monomial, Rational> terms;
    for (int j = 0; j < 3; ++j) terms[idx[pick(rng)]] += make_rational(num(rng), den(rng));
    std::vector<std::pair<Monomial, Rational>> span(terms.begin(), terms.end());
    out.push_back(std::move(span));
  }
  return out;
}

Outcome check_c_unitarity(const Setup& s, std::mt19937_64& rng) {
  s.require_exact();
  double worst = 0;
  int count = 0;
  for (const auto& t : s.cfg.t_values) {
    const auto& family = s.family(t);
    for (const auto& terms : norm_spans(s, rng)) {
      HermiteSpan span{t, {}};
      SurdPolynomial q;
      for (const auto& [nu, c] : terms) {
        span.terms.push_back({nu, Complex(to_double(c), 0)});
        SurdPolynomial h = family.polynomial(nu);
        for (const auto& [r, p] : h.components()) q += SurdPolynomial(r, p * c);
      }
      auto img = transform_C(s.k(), s.m(), to_gaussian(family, span), t);
      // relative, so that span coefficients do not scale the residual
      const long double norm2 = omega_norm_exact(s.m(), t, 1 / (4 * t), q).value();
      worst = std::max(worst, dist(cspace_inner(s.g(), s.context().gamma(), t, img, img), norm2) /
                                  static_cast<double>(norm2));
      ++count;
    }
  }
  return float_outcome(worst, count);
}

Outcome check_c_scale(const Setup& s, std::mt19937_64& rng) {
  s.require_exact();
  long mismatches = 0;
  int count = 0;
  for (const auto& t : s.cfg.t_values) {
    const Rational a = 1 / (4 * t), sigma = 1 / (4 * a);
    for (const auto& terms : norm_spans(s, rng)) {
      Polynomial q(s.n());
      for (const auto& [nu, c] : terms) q += hermite_core(s.context(), s.b(), t, nu) * c;
      ScaledValue half = omega_norm_exact(s.m(), t / 2, a, SurdPolynomial(q));
      ScaledValue full = omega_norm_exact(s.m(), t, a, SurdPolynomial(q));
      // the t/2 side again through the semigroup moment at sigma = 1/4a
      ScaledValue semigroup{SurdPolynomial(Polynomial::constant(s.n(), gaussian_moment(s.context(), q * q, sigma))),
                            sigma / t, full.exponent};
      if (!(half == full.rebased(2))) ++mismatches;
      if (!(half == semigroup.rebased(2))) ++mismatches;
      if (full.exponent != s.context().gamma() + make_rational(static_cast<long>(s.n()), 2)) ++mismatches;
      count += 3;
    }
  }
  return exact_outcome(Rational(mismatches), count, "residual counts mismatched exact values");
}

using CheckFn = Outcome (*)(const Setup&, std::mt19937_64&);

CheckFn lookup(const std::string& id) {
  static const std::map<std::string, CheckFn> fns = {
      {"coxeter.group", check_group},
      {"coxeter.multiplicity", check_multiplicity},
      {"dunkl.commutativity", check_commutativity},
      {"dunkl.trivial_reduction", check_trivial_reduction},
      {"hermite.fischer_orthogonality", check_fischer},
      {"hermite.moment_orthogonality", check_moment},
      {"measure.normalization", check_normalization},
      {"kernel.block_recursion", check_block_recursion},
      {"kernel.construction_agreement", check_construction},
      {"kernel.rank_one_oracle", check_rank_one},
      {"kernel.heat_identity", check_heat_identity},
      {"kernel.version_c_relations", check_version_c},
      {"kernel.positive_definite", check_positive_definite},
      {"kernel.dilation_identity", check_dilation_identity},
      {"transform.a_basis", check_a_basis},
      {"transform.a_gram", check_a_gram},
      {"transform.b_paths", check_b_paths},
      {"transform.dilation_diagram", check_dilation_diagram},
      {"transform.bso_relation", check_bso},
      {"transform.translation", check_translation},
      {"transform.convolution", check_convolution},
      {"transform.c_unitarity", check_c_unitarity},
      {"transform.c_scale_relation", check_c_scale},
  };
  return fns.at(id);
}

CheckResult run_one(const Setup& s, const CatalogEntry& entry) {
  CheckResult r;
  r.id = entry.id;
  r.description = entry.description;
  r.anchor = entry.anchor;
  auto tol = s.cfg.tolerances.find(entry.id);
  const bool overridden = tol != s.cfg.tolerances.end();
  r.tolerance = overridden ? tol->second : entry.default_tolerance;
  r.exact = entry.default_tolerance == 0;
  std::mt19937_64 rng(s.cfg.seed + fnv1a(entry.id));
  const auto start = Clock::now();
  try {
    Outcome o = lookup(entry.id)(s, rng);
    r.exact = o.exact;
    r.samples = o.samples;
    r.note = o.note;
    if (o.exact) {
      r.exact_residual = o.exact_residual;
      r.residual = to_double(o.exact_residual);
      r.status = sgn(o.exact_residual) == 0 ? CheckStatus::kPass : CheckStatus::kFail;
    } else {
      if (o.numeric_tolerance && !overridden && r.tolerance == 0) r.tolerance = *o.numeric_tolerance;
      r.residual = o.residual;
      r.status = o.residual <= r.tolerance ? CheckStatus::kPass : CheckStatus::kFail;
    }
  } catch (const Skip& skip) {
    r.status = CheckStatus::kSkipped;
    r.note = skip.reason;
  } catch (const SetupFailure& f) {
    r.status = CheckStatus::kError;
    r.note = "setup failed: " + f.what;
  } catch (const std::exception& e) {
    r.status = CheckStatus::kError;
    r.note = e.what();
  }
  r.wall_seconds = seconds_since(start);
  return r;
}

unsigned thread_count(const RunOptions& opts) {
  if (opts.threads) return opts.threads;
  if (const char* env = std::getenv("DUNKLSB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// The 𝓕 eigenvalue of h_{t;nu} is not fixed by the theory in this
/// normalization; its residual against (-i)^{|nu|} is reported only.
json fourier_observation(const Setup& s) {
  json out = json::object();
  if (!s.ctx || !s.exact() || !s.table || !s.mf || !s.basis) return out;
  try {
    for (const auto& t : s.cfg.t_values) {
      const auto& family = s.family(t);
      double worst = 0;
      for (const auto& nu : s.low_indices()) {
        auto psi = to_gaussian(family, single(t, nu));
        for (double r : {0.0, 0.5, 1.0}) {
          std::vector<double> k(s.n(), r * std::sqrt(to_double(t) / static_cast<double>(s.n())));
          std::vector<ComplexLD> kz(k.begin(), k.end());
          ComplexLD phase = std::pow(ComplexLD(0, -1), nu.degree());
          worst = std::max(worst, dist(dunkl_fourier(s.k(), s.m(), psi, t, k), phase * psi(kz)));
        }
      }
      out[format_rational(t)] = format_double(worst);
    }
  } catch (const std::exception& e) {
    out["error"] = e.what();
  }
  return out;
}

}  // namespace

Report run_verification(const SuiteConfig& cfg, const RunOptions& opts) {
  validate(cfg);
  Report report;
  report.config = config_to_json(cfg);
  report.seed = cfg.seed;
  const auto start = Clock::now();
  Setup setup(cfg);
  build_setup(setup);
  report.setup_seconds = seconds_since(start);

  const auto& catalog = check_catalog();
  report.checks.resize(catalog.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < catalog.size(); i = next++) report.checks[i] = run_one(setup, catalog[i]);
  };
  const unsigned threads = std::min<unsigned>(thread_count(opts), static_cast<unsigned>(catalog.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  report.observations["fourier_eigen_residual"] = fourier_observation(setup);
  return report;
}

// ---------------------------------------------------------------- emission

ReportFormat parse_report_format(const std::string& text) {
  if (text == "json") return ReportFormat::kJson;
  if (text == "csv") return ReportFormat::kCsv;
  if (text == "text") return ReportFormat::kText;
  throw ConfigError("unknown report format '" + text + "'");
}

namespace {

std::string residual_text(const CheckResult& c) {
  if (c.status == CheckStatus::kSkipped || c.status == CheckStatus::kError) return "";
  if (c.exact && c.exact_residual) return sgn(*c.exact_residual) == 0 ? "0 (exact)" : format_rational(*c.exact_residual);
  return format_double(c.residual);
}

std::string tolerance_text(const CheckResult& c) { return c.exact ? "0 (exact)" : format_double(c.tolerance); }

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json versions() {
  return {{"dunklsb", kVersion},
          {"gmp", gmp_version},
          {"boost", BOOST_LIB_VERSION},
          {"compiler", __VERSION__},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

}  // namespace

json report_to_json(const Report& r) {
  json checks = json::array();
  json timings = json::object();
  for (const auto& c : r.checks) {
    checks.push_back({{"id", c.id},
                      {"description", c.description},
                      {"anchor", c.anchor},
                      {"status", to_string(c.status)},
                      {"pass", c.status == CheckStatus::kPass},
                      {"exact", c.exact},
                      {"residual", residual_text(c)},
                      {"tolerance", tolerance_text(c)},
                      {"samples", c.samples},
                      {"note", c.note}});
    timings[c.id] = format_double(c.wall_seconds);
  }
  json meta = {{"config", r.config},
               {"versions", versions()},
               {"seed", r.seed},
               {"timings", {{"setup", format_double(r.setup_seconds)}, {"checks", timings}}},
               {"observations", r.observations}};
  return {{"meta", meta},
          {"checks", checks},
          {"summary",
           {{"pass", r.count(CheckStatus::kPass)},
            {"fail", r.count(CheckStatus::kFail) + r.count(CheckStatus::kError)},
            {"skipped", r.count(CheckStatus::kSkipped)}}}};
}

std::string render_report(const Report& r, ReportFormat format) {
  std::ostringstream out;
  switch (format) {
    case ReportFormat::kJson:
      out << report_to_json(r).dump(2) << '\n';
      break;
    case ReportFormat::kCsv:
      out << "id,status,residual,tolerance,samples,wall_seconds,description,anchor,note\n";
      for (const auto& c : r.checks)
        out << csv_cell(c.id) << ',' << to_string(c.status) << ',' << csv_cell(residual_text(c)) << ','
            << csv_cell(tolerance_text(c)) << ',' << c.samples << ',' << format_double(c.wall_seconds) << ','
            << csv_cell(c.description) << ',' << csv_cell(c.anchor) << ',' << csv_cell(c.note) << '\n';
      break;
    case ReportFormat::kText: {
      out << std::left << std::setw(32) << "check" << std::setw(9) << "status" << std::setw(26) << "residual"
          << "tolerance\n";
      for (const auto& c : r.checks) {
        out << std::setw(32) << c.id << std::setw(9) << to_string(c.status) << std::setw(26) << residual_text(c)
            << tolerance_text(c) << '\n';
        if (!c.note.empty() && (c.status == CheckStatus::kSkipped || c.status == CheckStatus::kError))
          out << "    " << c.note << '\n';
      }
      out << "pass " << r.count(CheckStatus::kPass) << ", fail "
          << r.count(CheckStatus::kFail) + r.count(CheckStatus::kError) << ", skipped "
          << r.count(CheckStatus::kSkipped) << '\n';
      break;
    }
  }
  return out.str();
}

void emit_report(const Report& r, ReportFormat format, const std::string& path) {
  namespace fs = std::filesystem;
  const std::string body = render_report(r, format);
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()) % 100000);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write report to '" + path + "'");
    out << body;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("failed while writing report to '" + path + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError("cannot move report into place at '" + path + "': " + ec.message());
  }
}

}  // namespace dunklsb
