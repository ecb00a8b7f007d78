#include "dunklsb/kernel.hpp"

#include <cmath>
#include <mutex>

#include "dunklsb/error.hpp"

namespace dunklsb {

struct KernelTable::Data {
  std::shared_ptr<const DunklContext> ctx;
  std::size_t nvars = 0;
  KernelConstruction method = KernelConstruction::kLinearSolve;
  std::vector<std::vector<Monomial>> mons;
  std::vector<RationalMatrix> blocks;
  std::vector<std::vector<long double>> approx;  // row-major copies of blocks
  std::once_flag mms_once;
  double mms_value = 0;

  void finish() {
    for (const auto& b : blocks) {
      std::vector<long double> a(b.rows() * b.cols());
      for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) a[r * b.cols() + c] = to_long_double(b(r, c));
      approx.push_back(std::move(a));
    }
  }
};

std::string to_string(KernelConstruction method) {
  return method == KernelConstruction::kLinearSolve ? "linear-solve" : "basis-sum";
}

KernelTable KernelTable::linear_solve(const DunklContext& ctx, int max_degree) {
  ctx.require_exact("kernel blocks");
  if (max_degree < 0) throw InvalidParameterError("kernel degree must be nonnegative");
  auto data = std::make_shared<Data>();
  data->ctx = std::make_shared<const DunklContext>(ctx);
  const std::size_t nv = ctx.dimension();
  data->nvars = nv;
  data->method = KernelConstruction::kLinearSolve;
  data->mons.push_back(monomials_of_degree(nv, 0));
  data->blocks.push_back(RationalMatrix::identity(1));
  for (int n = 1; n <= max_degree; ++n) {
    auto mons = monomials_of_degree(nv, n);
    const auto& lower = data->mons.back();
    const RationalMatrix& prev = data->blocks.back();
    std::map<Monomial, std::size_t> lower_index;
    for (std::size_t r = 0; r < lower.size(); ++r) lower_index[lower[r]] = r;
    const std::size_t d = mons.size(), dl = lower.size();
    // Stack T_1..T_N; column lambda of the right side holds the coefficient
    // of y^lambda in y_i E_{n-1}, i.e. E_{n-1}[., lambda - e_i].
    RationalMatrix a(nv * dl, d), b(nv * dl, d);
    for (std::size_t i = 0; i < nv; ++i) {
      RationalMatrix ti = dunkl_matrix(ctx, i, n);
      for (std::size_t r = 0; r < dl; ++r)
        for (std::size_t c = 0; c < d; ++c) a(i * dl + r, c) = ti(r, c);
      for (std::size_t c = 0; c < d; ++c) {
        if (mons[c][i] == 0) continue;
        std::size_t src = lower_index.at(mons[c].lowered(i));
        for (std::size_t r = 0; r < dl; ++r) b(i * dl + r, c) = prev(r, src);
      }
    }
    // Unique since no nonconstant homogeneous polynomial is killed by every T_i.
    data->blocks.push_back(solve_exact(std::move(a), std::move(b)));
    data->mons.push_back(std::move(mons));
  }
  data->finish();
  return KernelTable(std::move(data), max_degree);
}

KernelTable KernelTable::basis_sum(const DunklContext& ctx, const OrthogonalBasis& basis, int max_degree) {
  if (basis.max_degree() < max_degree)
    throw DegreeRangeError("basis-sum kernel needs an orthogonal basis of degree " + std::to_string(max_degree));
  auto data = std::make_shared<Data>();
  data->ctx = std::make_shared<const DunklContext>(ctx);
  const std::size_t nv = ctx.dimension();
  data->nvars = nv;
  data->method = KernelConstruction::kBasisSum;
  // Bidegree (n, n) of e^{y^2/2} sum H_{1;nu}(x) phi_nu(y): H_{1;nu} has x-degree
  // |nu| - 2k and e^{y^2/2} raises the y-degree by 2j, so only k = j = 0 and
  // |nu| = n contribute.
  for (int n = 0; n <= max_degree; ++n) {
    auto mons = monomials_of_degree(nv, n);
    std::map<Monomial, std::size_t> index;
    for (std::size_t r = 0; r < mons.size(); ++r) index[mons[r]] = r;
    RationalMatrix e(mons.size(), mons.size());
    for (const auto& el : basis.degree(n)) {
      std::vector<std::pair<std::size_t, Rational>> coords;
      for (const auto& [m, c] : el.q.terms()) coords.emplace_back(index.at(m), c);
      Rational inv = 1 / el.r;
      for (const auto& [ka, ca] : coords)
        for (const auto& [kb, cb] : coords) e(ka, kb) += ca * cb * inv;
    }
    data->blocks.push_back(std::move(e));
    data->mons.push_back(std::move(mons));
  }
  data->finish();
  return KernelTable(std::move(data), max_degree);
}

std::size_t KernelTable::dimension() const { return data_->nvars; }
KernelConstruction KernelTable::method() const { return data_->method; }
const DunklContext& KernelTable::context() const { return *data_->ctx; }

const RationalMatrix& KernelTable::block_matrix(int n) const {
  if (n < 0 || n > degree_) throw DegreeRangeError("kernel table truncated at degree " + std::to_string(degree_));
  return data_->blocks[static_cast<std::size_t>(n)];
}

const std::vector<Monomial>& KernelTable::monomials(int n) const {
  if (n < 0 || n > degree_) throw DegreeRangeError("kernel table truncated at degree " + std::to_string(degree_));
  return data_->mons[static_cast<std::size_t>(n)];
}

Polynomial KernelTable::block(int n) const {
  const auto& m = monomials(n);
  const RationalMatrix& e = block_matrix(n);
  const std::size_t nv = dimension();
  Polynomial out(2 * nv);
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = 0; b < m.size(); ++b)
      if (sgn(e(a, b)) != 0) out.add_term(m[a] * m[b].shifted(nv), e(a, b));
  return out;
}

Polynomial KernelTable::partial_sum() const {
  Polynomial out(2 * dimension());
  for (int n = 0; n <= degree_; ++n) out += block(n);
  return out;
}

KernelTable KernelTable::truncated(int d) const {
  if (d < 0 || d > degree_) throw DegreeRangeError("cannot truncate beyond the built degree");
  return KernelTable(data_, d);
}

double KernelTable::mms() const {
  std::call_once(data_->mms_once, [&] {
    data_->mms_value = mms_constant(data_->ctx->multiplicity(), data_->ctx->root_system());
  });
  return data_->mms_value;
}

namespace {

// powers[i][k] = v_i^k
std::vector<std::vector<ComplexLD>> power_table(std::span<const ComplexLD> v, int degree) {
  std::vector<std::vector<ComplexLD>> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i].resize(static_cast<std::size_t>(degree) + 1);
    out[i][0] = 1;
    for (int k = 1; k <= degree; ++k) out[i][static_cast<std::size_t>(k)] = out[i][static_cast<std::size_t>(k) - 1] * v[i];
  }
  return out;
}

ComplexLD monomial_value(const std::vector<std::vector<ComplexLD>>& powers, const Monomial& m) {
  ComplexLD v = 1;
  for (std::size_t i = 0; i < powers.size(); ++i)
    if (m[i] != 0) v *= powers[i][static_cast<std::size_t>(m[i])];
  return v;
}

long double norm2(std::span<const ComplexLD> v) {
  long double s = 0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

void check_dim(const KernelTable& table, std::span<const ComplexLD> v) {
  if (v.size() != table.dimension()) throw InvalidParameterError("kernel argument has wrong dimension");
}

std::vector<ComplexLD> scaled(std::span<const ComplexLD> v, long double s) {
  std::vector<ComplexLD> out(v.begin(), v.end());
  for (auto& x : out) x *= s;
  return out;
}

long double to_ld_positive(const Rational& t, const char* what) {
  if (sgn(t) <= 0) throw InvalidParameterError(std::string(what) + " needs t > 0");
  return to_long_double(t);
}

KernelEval with_prefactor(KernelEval e, ComplexLD prefactor) {
  e.value *= prefactor;
  e.tail *= std::abs(prefactor);
  return e;
}

void enforce(const KernelEval& e, const EvalOptions& opts, const char* what) {
  if (opts.tolerance && e.tail > *opts.tolerance)
    throw PrecisionFailure(std::string(what) + ": heuristic tail above tolerance",
                           std::complex<double>(static_cast<double>(e.value.real()), static_cast<double>(e.value.imag())),
                           static_cast<double>(e.tail));
}

}  // namespace

ComplexLD KernelTable::block_value(int n, std::span<const ComplexLD> z, std::span<const ComplexLD> w) const {
  auto pz = power_table(z, n), pw = power_table(w, n);
  const auto& m = monomials(n);
  const auto& a = data_->approx[static_cast<std::size_t>(n)];
  const std::size_t d = m.size();
  std::vector<ComplexLD> wv(d);
  for (std::size_t b = 0; b < d; ++b) wv[b] = monomial_value(pw, m[b]);
  ComplexLD total = 0;
  for (std::size_t k = 0; k < d; ++k) {
    ComplexLD row = 0;
    for (std::size_t b = 0; b < d; ++b) row += a[k * d + b] * wv[b];
    total += monomial_value(pz, m[k]) * row;
  }
  return total;
}

long double kernel_tail(long double a, int degree) {
  if (a == 0) return 0;
  long double term = 1;
  for (int n = 1; n <= degree + 1; ++n) term *= a / n;
  long double sum = 0;
  for (int n = degree + 1; n < degree + 2000; ++n) {
    sum += term;
    if (term < 1e-30L * sum && n > a) break;
    term *= a / (n + 1);
  }
  return sum;
}

ComplexLD holomorphic_square(std::span<const ComplexLD> z) {
  ComplexLD s = 0;
  for (const auto& x : z) s += x * x;
  return s;
}

KernelEval eval_dunkl_kernel(const KernelTable& table, std::span<const ComplexLD> z, std::span<const ComplexLD> w,
                             const EvalOptions& opts) {
  check_dim(table, z);
  check_dim(table, w);
  KernelEval out;
  out.degree = table.max_degree();
  for (int n = 0; n <= out.degree; ++n) out.value += table.block_value(n, z, w);
  out.tail = kernel_tail(norm2(z) * norm2(w), out.degree);
  enforce(out, opts, "Dunkl kernel");
  return out;
}

KernelEval heat_kernel(const KernelTable& table, const Rational& t, std::span<const ComplexLD> z,
                       std::span<const ComplexLD> q, const EvalOptions& opts) {
  long double tl = to_ld_positive(t, "heat kernel");
  long double s = 1 / std::sqrt(tl);
  auto zs = scaled(z, s), qs = scaled(q, s);
  KernelEval e = eval_dunkl_kernel(table, zs, qs);
  e = with_prefactor(e, std::exp(-(holomorphic_square(z) + holomorphic_square(q)) / (2 * tl)));
  enforce(e, opts, "heat kernel");
  return e;
}

ComplexLD one_variable_heat_kernel(const Rational& t, std::span<const ComplexLD> q) {
  long double tl = to_ld_positive(t, "heat kernel");
  return std::exp(-holomorphic_square(q) / (2 * tl));
}

KernelVersion parse_kernel_version(const std::string& text) {
  if (text == "A") return KernelVersion::kA;
  if (text == "B") return KernelVersion::kB;
  if (text == "C") return KernelVersion::kC;
  if (text == "BSO") return KernelVersion::kBSO;
  if (text == "E") return KernelVersion::kE;
  if (text == "rho") return KernelVersion::kRho;
  throw InvalidParameterError("unknown kernel version '" + text + "'");
}

std::string to_string(KernelVersion v) {
  switch (v) {
    case KernelVersion::kA: return "A";
    case KernelVersion::kB: return "B";
    case KernelVersion::kC: return "C";
    case KernelVersion::kBSO: return "BSO";
    case KernelVersion::kE: return "E";
    case KernelVersion::kRho: return "rho";
  }
  return "?";
}

KernelEval sb_kernel(const KernelTable& table, KernelVersion version, const Rational& t, std::span<const ComplexLD> z,
                     std::span<const ComplexLD> q, const EvalOptions& opts) {
  long double tl = to_ld_positive(t, "Segal-Bargmann kernel");
  KernelEval e;
  switch (version) {
    case KernelVersion::kA: {
      long double s = 1 / std::sqrt(tl);
      e = eval_dunkl_kernel(table, scaled(z, s), scaled(q, s));
      e = with_prefactor(e, std::exp(-holomorphic_square(z) / (2 * tl) - holomorphic_square(q) / (4 * tl)));
      break;
    }
    case KernelVersion::kB: {
      KernelEval num = heat_kernel(table, t, z, q);
      std::vector<ComplexLD> zero(z.size(), 0);
      KernelEval den = heat_kernel(table, t, zero, q);
      e = with_prefactor(num, 1.0L / den.value);
      break;
    }
    case KernelVersion::kC:
    case KernelVersion::kRho:
      e = heat_kernel(table, t, z, q);
      break;
    case KernelVersion::kBSO: {
      const auto& ctx = table.context();
      long double expo = to_long_double(ctx.gamma()) + 0.5L * static_cast<long double>(ctx.dimension());
      long double root2 = std::sqrt(2.0L);
      e = eval_dunkl_kernel(table, scaled(q, root2), scaled(z, root2));
      ComplexLD pre = std::pow(2.0L, expo) / std::sqrt(static_cast<long double>(table.mms())) *
                      std::exp(-holomorphic_square(z) / 2.0L - holomorphic_square(q));
      e = with_prefactor(e, pre);
      break;
    }
    case KernelVersion::kE:
      e = eval_dunkl_kernel(table, z, q);
      break;
  }
  enforce(e, opts, "Segal-Bargmann kernel");
  return e;
}

KernelEval reproducing_kernel(const KernelTable& table, const Rational& t, std::span<const ComplexLD> z,
                              std::span<const ComplexLD> w, const EvalOptions& opts) {
  long double tl = to_ld_positive(t, "reproducing kernel");
  long double s = 1 / std::sqrt(tl);
  std::vector<ComplexLD> zc(z.begin(), z.end());
  for (auto& x : zc) x = std::conj(x) * s;
  KernelEval e = eval_dunkl_kernel(table, zc, scaled(w, s));
  enforce(e, opts, "reproducing kernel");
  return e;
}

}  // namespace dunklsb
