#include "dunklsb/dunkl.hpp"

#include <cmath>

#include "dunklsb/error.hpp"

namespace dunklsb {

DunklContext::DunklContext(RootSystem rs, MultiplicityFunction mu)
    : rs_(std::move(rs)), group_(generate_group(rs_)), orbits_(orbit_partition(rs_, group_)), mu_(std::move(mu)) {
  if (mu_.num_orbits() != orbits_.size()) throw UnsupportedMultiplicityError("multiplicity does not match orbits");
  for (std::size_t o = 0; o < orbits_.size(); ++o)
    for (std::size_t i : orbits_[o])
      if (mu_.orbit_of_root(i) != o) throw UnsupportedMultiplicityError("multiplicity is not constant on orbits");
  build_terms();
}

DunklContext::DunklContext(RootSystem rs, ReflectionGroup g, std::vector<std::vector<std::size_t>> orbits,
                           MultiplicityFunction mu)
    : rs_(std::move(rs)), group_(std::move(g)), orbits_(std::move(orbits)), mu_(std::move(mu)) {
  build_terms();
}

DunklContext DunklContext::from_spec(const RootSystemSpec& spec, const std::vector<Rational>& orbit_values) {
  RootSystem rs = build_root_system(spec);
  ReflectionGroup g = generate_group(rs);
  auto orbits = orbit_partition(rs, g);
  MultiplicityFunction mu = make_multiplicity(orbits, orbit_values);
  return DunklContext(std::move(rs), std::move(g), std::move(orbits), std::move(mu));
}

void DunklContext::require_exact(const char* what) const {
  if (regime() != Regime::kExact) throw RegimeError(std::string(what) + " requires the exact regime");
}

void DunklContext::build_terms() {
  terms_.clear();
  const std::size_t n = rs_.dimension();
  for (std::size_t i : rs_.positive_indices()) {
    const Rational& m = mu_.of_root(i);
    if (sgn(m) == 0) continue;
    Term term;
    term.root = i;
    term.mu = m;
    term.mu_real = to_double(m);
    term.value = rs_.root(i).value;
    term.reflection_real = rs_.reflection_matrix_real(i);
    if (regime() == Regime::kExact) {
      term.direction = *rs_.root(i).direction;
      term.reflection = rs_.reflection_matrix(i);
    }
    std::vector<std::pair<std::size_t, int>> perm;
    for (std::size_t r = 0; r < n; ++r) {
      std::size_t nonzero = 0, col = 0;
      int sign = 0;
      for (std::size_t c = 0; c < n; ++c) {
        double v = term.reflection_real[r * n + c];
        if (std::abs(v) > 1e-12) {
          ++nonzero;
          col = c;
          sign = v > 0 ? 1 : -1;
          if (std::abs(std::abs(v) - 1.0) > 1e-12) nonzero = 2;
        }
      }
      if (nonzero != 1) break;
      perm.emplace_back(col, sign);
    }
    if (perm.size() == n) term.signed_permutation = std::move(perm);
    terms_.push_back(std::move(term));
  }
}

namespace {

template <class C>
struct LinearData {
  std::vector<C> direction;
  std::vector<C> matrix;  // row-major
};

LinearData<Rational> linear_data(const DunklContext::Term& t, const Rational*) {
  LinearData<Rational> d;
  d.direction = t.direction;
  const std::size_t n = t.direction.size();
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) d.matrix.push_back(t.reflection(r, c));
  return d;
}

LinearData<double> linear_data(const DunklContext::Term& t, const double*) {
  return LinearData<double>{t.value, t.reflection_real};
}

const Rational& multiplicity(const DunklContext::Term& t, const Rational*) { return t.mu; }
double multiplicity(const DunklContext::Term& t, const double*) { return t.mu_real; }

// p(sigma x) on variables [offset, offset + n).
template <class C>
BasicPolynomial<C> compose(const DunklContext::Term& term, const LinearData<C>& lin, const BasicPolynomial<C>& p,
                           std::size_t offset, std::size_t n) {
  const std::size_t nv = p.num_variables();
  BasicPolynomial<C> out(nv);
  if (term.signed_permutation) {
    const auto& perm = *term.signed_permutation;
    for (const auto& [m, c] : p.terms()) {
      std::vector<int> e = m.exponents(nv);
      int sign = 1;
      for (std::size_t i = 0; i < n; ++i) {
        int k = m[offset + i];
        e[offset + i] = 0;
        if (perm[i].second < 0 && (k % 2) == 1) sign = -sign;
      }
      for (std::size_t i = 0; i < n; ++i) e[offset + perm[i].first] += m[offset + i];
      out.add_term(Monomial(e), sign > 0 ? c : C(-c));
    }
    return out;
  }
  // (sigma x)_i as linear forms, with cached powers.
  std::vector<std::vector<BasicPolynomial<C>>> powers(n);
  for (std::size_t i = 0; i < n; ++i) {
    BasicPolynomial<C> form(nv);
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<int> e(nv, 0);
      e[offset + j] = 1;
      form.add_term(Monomial(e), lin.matrix[i * n + j]);
    }
    powers[i].push_back(BasicPolynomial<C>::constant(nv, C(1)));
    powers[i].push_back(form);
  }
  for (const auto& [m, c] : p.terms()) {
    std::vector<int> rest = m.exponents(nv);
    for (std::size_t i = 0; i < n; ++i) rest[offset + i] = 0;
    BasicPolynomial<C> term_poly = BasicPolynomial<C>::monomial(nv, Monomial(rest), c);
    for (std::size_t i = 0; i < n; ++i) {
      int k = m[offset + i];
      while (static_cast<int>(powers[i].size()) <= k) powers[i].push_back(powers[i].back() * powers[i][1]);
      if (k > 0) term_poly = term_poly * powers[i][k];
    }
    out += term_poly;
  }
  return out;
}

double remainder_scale(const BasicPolynomial<double>& p) {
  double s = 0;
  for (const auto& [m, c] : p.terms()) s = std::max(s, std::abs(c));
  return s;
}
double remainder_scale(const BasicPolynomial<Rational>&) { return 0; }

bool remainder_ok(const Rational& r, double) { return sgn(r) == 0; }
bool remainder_ok(double r, double scale) { return std::abs(r) <= 1e-9 * std::max(scale, 1.0); }

// Exact division by l(x) = sum_j d_j x_{offset+j}, eliminating the pivot
// variable one x_pivot-degree level at a time. A nonzero remainder means the
// reflection data is broken.
template <class C>
BasicPolynomial<C> divide_linear(const BasicPolynomial<C>& p, const std::vector<C>& d, std::size_t offset) {
  const std::size_t n = d.size();
  std::size_t pivot = n;
  for (std::size_t j = 0; j < n; ++j)
    if (!detail::is_zero(d[j])) {
      pivot = j;
      break;
    }
  if (pivot == n) throw InvalidRootError("division by the zero form");
  const std::size_t pv = offset + pivot;
  const std::size_t nv = p.num_variables();
  int top = 0;
  for (const auto& [m, c] : p.terms()) top = std::max(top, m[pv]);
  std::vector<std::map<Monomial, C>> levels(static_cast<std::size_t>(top) + 1);
  for (const auto& [m, c] : p.terms()) levels[static_cast<std::size_t>(m[pv])][m] = c;
  const double scale = remainder_scale(p);
  BasicPolynomial<C> quotient(nv);
  for (int e = top; e >= 1; --e) {
    for (const auto& [m, c] : levels[static_cast<std::size_t>(e)]) {
      if (detail::is_zero(c)) continue;
      C qc = c / d[pivot];
      Monomial qm = m.lowered(pv);
      quotient.add_term(qm, qc);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == pivot || detail::is_zero(d[j])) continue;
        Monomial lm = qm.raised(offset + j);
        levels[static_cast<std::size_t>(e - 1)][lm] -= qc * d[j];
      }
    }
  }
  for (const auto& [m, c] : levels[0])
    if (!remainder_ok(c, scale))
      throw InternalConsistencyError("reflection difference is not divisible by its root form");
  return quotient;
}

template <class C>
BasicPolynomial<C> dunkl_apply_impl(const DunklContext& ctx, const std::vector<C>& xi, const BasicPolynomial<C>& p,
                                    std::size_t offset) {
  const std::size_t n = ctx.dimension();
  if (xi.size() != n) throw InvalidParameterError("direction has wrong dimension");
  if (offset + n > p.num_variables() && !p.is_zero())
    throw InvalidParameterError("operator block exceeds the polynomial's variables");
  BasicPolynomial<C> out(p.num_variables());
  for (std::size_t j = 0; j < n; ++j)
    if (!detail::is_zero(xi[j])) out += p.partial(offset + j) * xi[j];
  if (p.degree() <= 0) return out;
  const C* tag = nullptr;
  for (const auto& term : ctx.terms()) {
    LinearData<C> lin = linear_data(term, tag);
    C pairing(0);
    for (std::size_t j = 0; j < n; ++j) pairing += lin.direction[j] * xi[j];
    if (detail::is_zero(pairing)) continue;
    BasicPolynomial<C> diff = p - compose(term, lin, p, offset, n);
    if (diff.is_zero()) continue;
    out += divide_linear(diff, lin.direction, offset) * C(multiplicity(term, tag) * pairing);
  }
  return out;
}

}  // namespace

Polynomial dunkl_apply(const DunklContext& ctx, std::span<const Rational> xi, const Polynomial& p,
                       std::size_t block_offset) {
  ctx.require_exact("exact Dunkl operator");
  return dunkl_apply_impl<Rational>(ctx, std::vector<Rational>(xi.begin(), xi.end()), p, block_offset);
}

Polynomial dunkl_apply(const DunklContext& ctx, std::size_t i, const Polynomial& p, std::size_t block_offset) {
  std::vector<Rational> xi(ctx.dimension(), Rational(0));
  xi.at(i) = 1;
  return dunkl_apply(ctx, xi, p, block_offset);
}

RealPolynomial dunkl_apply(const DunklContext& ctx, std::span<const double> xi, const RealPolynomial& p) {
  return dunkl_apply_impl<double>(ctx, std::vector<double>(xi.begin(), xi.end()), p, 0);
}

Polynomial dunkl_laplacian(const DunklContext& ctx, const Polynomial& p, const RationalMatrix* frame) {
  const std::size_t n = ctx.dimension();
  Polynomial out(p.num_variables());
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Rational> xi(n, Rational(0));
    if (frame) {
      if (frame->rows() != n || frame->cols() != n) throw InvalidParameterError("frame has wrong shape");
      for (std::size_t k = 0; k < n; ++k) xi[k] = (*frame)(j, k);
    } else {
      xi[j] = 1;
    }
    out += dunkl_apply(ctx, xi, dunkl_apply(ctx, xi, p));
  }
  return out;
}

Polynomial heat_apply(const DunklContext& ctx, const Rational& tau, const Polynomial& p) {
  Polynomial out = p;
  Polynomial power = p;
  Rational factor = 1;
  for (int k = 1; 2 * k <= p.degree(); ++k) {
    power = dunkl_laplacian(ctx, power);
    if (power.is_zero()) break;
    factor *= tau / 2 / k;
    out += power * factor;
  }
  return out;
}

SurdPolynomial dilate(const Surd& lambda, const Polynomial& p) {
  if (sgn(lambda.coefficient()) <= 0) throw InvalidParameterError("dilation needs lambda > 0");
  const Rational& c = lambda.coefficient();
  const Rational& r = lambda.radicand();
  Polynomial even(p.num_variables()), odd(p.num_variables());
  for (const auto& [m, coeff] : p.terms()) {
    int k = m.degree();
    Rational f = pow(c, k) * pow(r, k / 2);
    if (k % 2 == 0)
      even.add_term(m, coeff * f);
    else
      odd.add_term(m, coeff * f);
  }
  SurdPolynomial out(even);
  out += SurdPolynomial(r, odd);
  return out;
}

SurdPolynomial dilate(const Surd& lambda, const SurdPolynomial& p) {
  SurdPolynomial out;
  for (const auto& [r, q] : p.components()) out += dilate(lambda, q) * Surd::sqrt(r);
  return out;
}

SurdPolynomial heat_apply(const DunklContext& ctx, const Rational& tau, const SurdPolynomial& p) {
  SurdPolynomial out;
  for (const auto& [r, q] : p.components()) out += SurdPolynomial(r, heat_apply(ctx, tau, q));
  return out;
}

Polynomial dilate(const Rational& lambda, const Polynomial& p) {
  if (sgn(lambda) <= 0) throw InvalidParameterError("dilation needs lambda > 0");
  Polynomial out(p.num_variables());
  for (const auto& [m, coeff] : p.terms()) out.add_term(m, coeff * pow(lambda, m.degree()));
  return out;
}

Rational fischer_pair(const DunklContext& ctx, const Polynomial& p, const Polynomial& q, const Rational& t) {
  if (sgn(t) <= 0) throw InvalidParameterError("Fischer pairing needs t > 0");
  Rational total = 0;
  const int top = std::min(p.degree(), q.degree());
  for (int n = 0; n <= top; ++n) {
    Polynomial pn = p.homogeneous_part(n);
    Polynomial qn = q.homogeneous_part(n);
    if (pn.is_zero() || qn.is_zero()) continue;
    std::map<Monomial, Polynomial> chain;
    chain.emplace(Monomial{}, qn);
    // Operators commute, so T^kappa q is reached through any ordering.
    auto reach = [&](auto&& self, const Monomial& k) -> const Polynomial& {
      auto it = chain.find(k);
      if (it != chain.end()) return it->second;
      std::size_t i = 0;
      while (k[i] == 0) ++i;
      Polynomial next = dunkl_apply(ctx, i, self(self, k.lowered(i)));
      return chain.emplace(k, std::move(next)).first->second;
    };
    Rational sum = 0;
    for (const auto& [k, c] : pn.terms()) sum += c * reach(reach, k).coefficient(Monomial{});
    total += pow(t, n) * sum;
  }
  return total;
}

Rational gaussian_moment(const DunklContext& ctx, const Polynomial& p, const Rational& t) {
  if (sgn(t) <= 0) throw InvalidParameterError("Gaussian moment needs t > 0");
  return heat_apply(ctx, t, p).coefficient(Monomial{});
}

SurdPolynomial gaussian_moment(const DunklContext& ctx, const SurdPolynomial& p, const Rational& t) {
  SurdPolynomial out;
  const std::size_t nv = ctx.dimension();
  for (const auto& [r, q] : p.components())
    out += SurdPolynomial(r, Polynomial::constant(nv, gaussian_moment(ctx, q, t)));
  return out;
}

Polynomial multiply_coordinate(std::span<const Rational> xi, const Polynomial& p) {
  Polynomial form(p.num_variables() == 0 ? xi.size() : p.num_variables());
  for (std::size_t j = 0; j < xi.size(); ++j)
    if (sgn(xi[j]) != 0) form += Polynomial::variable(form.num_variables(), j) * xi[j];
  return form * p;
}

MomentumImage momentum_apply(const DunklContext& ctx, std::span<const Rational> xi, const Rational& t,
                             const Polynomial& p) {
  return MomentumImage{t, dunkl_apply(ctx, xi, p)};
}

RationalMatrix dunkl_matrix(const DunklContext& ctx, std::size_t i, int n) {
  const std::size_t nv = ctx.dimension();
  auto cols = monomials_of_degree(nv, n);
  auto rows = monomials_of_degree(nv, n - 1);
  std::map<Monomial, std::size_t> row_index;
  for (std::size_t r = 0; r < rows.size(); ++r) row_index[rows[r]] = r;
  RationalMatrix m(rows.size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    Polynomial image = dunkl_apply(ctx, i, Polynomial::monomial(nv, cols[c]));
    for (const auto& [mono, coeff] : image.terms()) m(row_index.at(mono), c) = coeff;
  }
  return m;
}

std::vector<RationalMatrix> fischer_gram(const DunklContext& ctx, int max_degree) {
  ctx.require_exact("Fischer Gram");
  const std::size_t nv = ctx.dimension();
  std::vector<RationalMatrix> gram;
  gram.push_back(RationalMatrix::identity(1));
  for (int n = 1; n <= max_degree; ++n) {
    auto mons = monomials_of_degree(nv, n);
    auto lower = monomials_of_degree(nv, n - 1);
    std::map<Monomial, std::size_t> lower_index;
    for (std::size_t r = 0; r < lower.size(); ++r) lower_index[lower[r]] = r;
    std::vector<RationalMatrix> ops;
    for (std::size_t i = 0; i < nv; ++i) ops.push_back(dunkl_matrix(ctx, i, n));
    const RationalMatrix& prev = gram.back();
    RationalMatrix g(mons.size(), mons.size());
    // [x^kappa, x^lambda] = [x^{kappa - e_i}, T_i x^lambda]
    for (std::size_t a = 0; a < mons.size(); ++a) {
      std::size_t i = 0;
      while (mons[a][i] == 0) ++i;
      std::size_t ka = lower_index.at(mons[a].lowered(i));
      for (std::size_t b = 0; b < mons.size(); ++b) {
        Rational s = 0;
        for (std::size_t r = 0; r < lower.size(); ++r)
          if (sgn(ops[i](r, b)) != 0) s += prev(ka, r) * ops[i](r, b);
        g(a, b) = s;
      }
    }
    gram.push_back(std::move(g));
  }
  return gram;
}

MomentTable::MomentTable(const DunklContext& ctx, int max_degree) : max_degree_(max_degree), nvars_(ctx.dimension()) {
  ctx.require_exact("moment table");
  for (int d = 0; d <= max_degree; ++d) {
    for (const Monomial& k : monomials_of_degree(nvars_, d)) {
      Rational value = 0;
      if (d == 0) {
        value = 1;
      } else if (d % 2 == 0) {
        // Odd moments vanish: the measure is invariant under x -> -x.
        std::size_t i = 0;
        while (k[i] == 0) ++i;
        Polynomial image = dunkl_apply(ctx, i, Polynomial::monomial(nvars_, k.lowered(i)));
        for (const auto& [m, c] : image.terms()) value += c * exact_.at(m);
      }
      approx_.emplace(k, to_long_double(value));
      exact_.emplace(k, std::move(value));
    }
  }
}

const Rational& MomentTable::at(const Monomial& m) const {
  if (m.degree() > max_degree_) throw DegreeRangeError("moment table built to degree " + std::to_string(max_degree_));
  return exact_.at(m);
}

long double MomentTable::at_ld(const Monomial& m) const {
  if (m.degree() > max_degree_) throw DegreeRangeError("moment table built to degree " + std::to_string(max_degree_));
  return approx_.at(m);
}

Rational MomentTable::moment(const Polynomial& p, const Rational& t) const {
  if (sgn(t) <= 0) throw InvalidParameterError("moment needs t > 0");
  Rational total = 0;
  for (const auto& [m, c] : p.terms()) {
    if (m.degree() % 2 != 0) continue;
    total += c * at(m) * pow(t, m.degree() / 2);
  }
  return total;
}

}  // namespace dunklsb
