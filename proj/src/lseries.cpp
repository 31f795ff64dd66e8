#include "hilbert/lseries.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include <mpfr.h>

#include "hilbert/arith.hpp"
#include "hilbert/error.hpp"

namespace hilbert {

namespace mp = boost::multiprecision;

std::optional<std::size_t> IdealTable::find(const Ideal& I) const {
  auto it = index.find(I);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

const IdealTable& ideal_table(const FieldContext& F, std::int64_t max_norm) {
  static std::mutex mu;
  static std::map<std::pair<int, std::int64_t>, std::unique_ptr<IdealTable>> cache;
  if (max_norm < 1) throw Error(ErrorCode::DomainError, "max_norm must be at least 1");
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{F.radicand(), max_norm}];
  if (!slot) {
    auto t = std::make_unique<IdealTable>();
    const IdealArith A(F);
    t->max_norm = max_norm;
    t->ideals = A.enumerate(max_norm);
    for (std::size_t i = 0; i < t->ideals.size(); ++i) {
      t->index.emplace(t->ideals[i], i);
      t->factors.push_back(A.factor(t->ideals[i]));
    }
    slot = std::move(t);
  }
  return *slot;
}

namespace {

template <class T>
T from_rational(const Rational& q);
template <>
Rational from_rational<Rational>(const Rational& q) {
  return q;
}
template <>
Real from_rational<Real>(const Rational& q) {
  return hilbert::to_real(q);
}

Real real_value(const Rational& q) { return hilbert::to_real(q); }
Real real_value(const Real& r) { return r; }

bool is_zero_value(const Rational& q) { return q == 0; }
bool is_zero_value(const Real& r) { return r == 0; }

Rational sigma_from_factors(const std::vector<std::pair<PrimeIdealData, int>>& fac, long r) {
  Rational out = 1;
  for (const auto& [P, e] : fac) {
    const Rational q = rational_pow(Rational(P.ideal.norm()), r);
    Rational s = 0, term = 1;
    for (int i = 0; i <= e; ++i) {
      s += term;
      term *= q;
    }
    out *= s;
  }
  return out;
}

}  // namespace

template <class T>
IdealCoeffSeries<T>::IdealCoeffSeries(const FieldContext& F, std::int64_t max_norm, long weight_, std::string label_)
    : weight(weight_), label(std::move(label_)), F_(&F), table_(&ideal_table(F, max_norm)) {
  values_.assign(table_->ideals.size(), T(0));
}

template <class T>
std::size_t IdealCoeffSeries<T>::slot(const Ideal& I) const {
  if (I.norm() > table_->max_norm)
    throw Error(ErrorCode::InsufficientTruncation, "ideal of norm " + std::to_string(I.norm()) +
                                                       " is beyond the series bound " + std::to_string(max_norm()));
  auto k = table_->find(I);
  if (!k) throw Error(ErrorCode::DomainError, "ideal not in the enumeration table");
  return *k;
}

template <class T>
const T& IdealCoeffSeries<T>::at(const Ideal& I) const {
  return values_[slot(I)];
}

template <class T>
void IdealCoeffSeries<T>::set(const Ideal& I, T value) {
  values_[slot(I)] = std::move(value);
}

template <class T>
IdealCoeffSeries<T> IdealCoeffSeries<T>::truncate(std::int64_t new_max) const {
  if (new_max > max_norm()) throw Error(ErrorCode::InsufficientTruncation, "cannot extend a truncated series");
  IdealCoeffSeries out(*F_, new_max, weight, label);
  for (std::size_t i = 0; i < out.size(); ++i) out.values_[i] = values_[i];
  return out;
}

template class IdealCoeffSeries<Rational>;
template class IdealCoeffSeries<Real>;

ExactSeries unit_series(const FieldContext& F, std::int64_t max_norm) {
  ExactSeries out(F, max_norm, 0, "unit");
  out[0] = 1;
  return out;
}

ExactSeries one_series(const FieldContext& F, std::int64_t max_norm) {
  ExactSeries out(F, max_norm, 0, "zeta_F");
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 1;
  return out;
}

ExactSeries sigma_series(const FieldContext& F, long r, std::int64_t max_norm) {
  ExactSeries out(F, max_norm, r + 1, "sigma_" + std::to_string(r));
  const IdealTable& t = out.table();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = sigma_from_factors(t.factors[i], r);
  return out;
}

RealSeries to_real(const ExactSeries& A) {
  RealSeries out(A.field(), A.max_norm(), A.weight, A.label);
  for (std::size_t i = 0; i < A.size(); ++i) out[i] = hilbert::to_real(A[i]);
  return out;
}

template <class T>
IdealCoeffSeries<T> dirichlet_convolve(const IdealCoeffSeries<T>& A0, const IdealCoeffSeries<T>& B0) {
  const std::int64_t X = std::min(A0.max_norm(), B0.max_norm());
  const IdealCoeffSeries<T> A = A0.max_norm() == X ? A0 : A0.truncate(X);
  const IdealCoeffSeries<T> B = B0.max_norm() == X ? B0 : B0.truncate(X);
  IdealCoeffSeries<T> out(A.field(), X, A.weight, A.label + "*" + B.label);
  const IdealArith ar(A.field());
  const auto& ids = A.ideals();
  const IdealTable& t = A.table();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (is_zero_value(A[i])) continue;
    for (std::size_t j = 0; j < ids.size(); ++j) {
      if (ids[i].norm() * ids[j].norm() > X) break;
      if (is_zero_value(B[j])) continue;
      out[*t.find(ar.mul(ids[i], ids[j]))] += A[i] * B[j];
    }
  }
  return out;
}

template ExactSeries dirichlet_convolve(const ExactSeries&, const ExactSeries&);
template RealSeries dirichlet_convolve(const RealSeries&, const RealSeries&);

ExactSeries shift(const ExactSeries& A, long r) {
  ExactSeries out = A;
  for (std::size_t i = 0; i < A.size(); ++i) out[i] = A[i] * rational_pow(Rational(A.ideals()[i].norm()), r);
  return out;
}

RealSeries shift(const RealSeries& A, const Real& r) {
  RealSeries out = A;
  for (std::size_t i = 0; i < A.size(); ++i) out[i] = A[i] * mp::pow(Real(A.ideals()[i].norm()), r);
  return out;
}

ExactSeries hecke_extend(const FieldContext& F, const std::map<Ideal, Rational>& prime_values, long weight,
                         std::int64_t max_norm) {
  ExactSeries out(F, max_norm, weight, "hecke");
  const IdealTable& t = out.table();
  std::map<Ideal, std::vector<Rational>> powers;  // c(p^e) for e = 0, 1, ...
  auto prime_power = [&](const PrimeIdealData& P, int e) -> Rational {
    auto it = powers.find(P.ideal);
    if (it == powers.end()) {
      auto pv = prime_values.find(P.ideal);
      if (pv == prime_values.end())
        throw Error(ErrorCode::MissingPrime, "no value for the prime of norm " + std::to_string(P.ideal.norm()));
      it = powers.emplace(P.ideal, std::vector<Rational>{Rational(1), pv->second}).first;
    }
    std::vector<Rational>& c = it->second;
    const Rational q = rational_pow(Rational(P.ideal.norm()), weight - 1);
    while (static_cast<int>(c.size()) <= e) {
      const std::size_t r = c.size() - 1;
      c.push_back(c[1] * c[r] - q * c[r - 1]);
    }
    return c[static_cast<std::size_t>(e)];
  };
  for (std::size_t i = 0; i < out.size(); ++i) {
    Rational v = 1;
    for (const auto& [P, e] : t.factors[i]) v *= prime_power(P, e);
    out[i] = v;
  }
  return out;
}

template <class T>
IdealCoeffSeries<T> hecke_apply(const Ideal& m, const IdealCoeffSeries<T>& f, long k) {
  if (f.max_norm() < m.norm())
    throw Error(ErrorCode::InsufficientTruncation, "series bound is below the norm of the Hecke index");
  const IdealArith ar(f.field());
  IdealCoeffSeries<T> out(f.field(), f.max_norm() / m.norm(), k, "T(" + std::to_string(m.norm()) + ")" + f.label);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Ideal& a = out.ideals()[i];
    const Ideal am = ar.mul(a, m);
    T acc(0);
    for (const Ideal& r : ar.divisors(ar.gcd(a, m))) {
      const Ideal q = ar.quotient(am, ar.mul(r, r));
      acc += from_rational<T>(rational_pow(Rational(r.norm()), k - 1)) * f.at(q);
    }
    out[i] = acc;
  }
  return out;
}

template ExactSeries hecke_apply(const Ideal&, const ExactSeries&, long);
template RealSeries hecke_apply(const Ideal&, const RealSeries&, long);

std::optional<std::pair<Ideal, Ideal>> hecke_relation_failure(const ExactSeries& f, long w, std::int64_t bound) {
  bound = std::min(bound, f.max_norm());
  const IdealArith ar(f.field());
  const auto& ids = f.ideals();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i; j < ids.size(); ++j) {
      if (ids[i].norm() * ids[j].norm() > bound) break;
      const Ideal mn = ar.mul(ids[i], ids[j]);
      Rational rhs = 0;
      for (const Ideal& a : ar.divisors(ar.gcd(ids[i], ids[j])))
        rhs += rational_pow(Rational(a.norm()), w - 1) * f.at(ar.quotient(mn, ar.mul(a, a)));
      if (f[i] * f[j] != rhs) return std::make_pair(ids[i], ids[j]);
    }
  }
  return std::nullopt;
}

Rational bernoulli(unsigned n) {
  static std::mutex mu;
  static std::vector<Rational> cache{Rational(1)};
  std::lock_guard<std::mutex> lock(mu);
  while (cache.size() <= n) {
    const unsigned k = static_cast<unsigned>(cache.size());
    Rational s = 0;
    for (unsigned j = 0; j < k; ++j) s += Rational(binomial(k + 1, j)) * cache[j];
    cache.push_back(-s / Rational(k + 1));
  }
  return cache[n];
}

Real riemann_zeta(const Real& s) {
  Real out;
  mpfr_zeta(out.backend().data(), s.backend().data(), MPFR_RNDN);
  return out;
}

Real hurwitz_zeta(const Real& s, const Real& a) {
  if (s <= 1) throw Error(ErrorCode::DomainError, "Hurwitz zeta needs s > 1");
  if (a <= 0) throw Error(ErrorCode::DomainError, "Hurwitz zeta needs a > 0");
  // Euler-Maclaurin with N direct terms. For real s the remainder is bounded
  // by the first omitted correction term.
  const long bits = current_precision_bits();
  const long N = bits / 2 + 16;
  Real sum = 0;
  for (long n = 0; n < N; ++n) sum += mp::pow(Real(n) + a, -s);
  const Real x = Real(N) + a;
  sum += mp::pow(x, 1 - s) / (s - 1) + mp::pow(x, -s) / 2;
  const Real eps = mp::ldexp(Real(1), static_cast<int>(-bits - 8));
  Real poch = s;
  Real xp = mp::pow(x, -s - 1);
  const Real x2 = x * x;
  Integer fact = 2;  // (2j)!
  for (unsigned j = 1; j < 400; ++j) {
    const Real term = hilbert::to_real(bernoulli(2 * j)) / hilbert::to_real(fact) * poch * xp;
    sum += term;
    if (mp::abs(term) < eps * mp::abs(sum)) return sum;
    poch *= (s + 2 * j - 1) * (s + 2 * j);
    xp /= x2;
    fact *= (2 * j + 1) * (2 * j + 2);
  }
  throw Error(ErrorCode::NotConverged, "Euler-Maclaurin expansion did not converge");
}

Real zeta_F_numeric(const FieldContext& F, const Real& s, long prec_bits) {
  if (s <= 1) throw Error(ErrorCode::DomainError, "zeta_F needs s > 1");
  PrecisionScope scope(prec_bits + 32);
  const Real sw(s);
  const std::int64_t D = F.disc();
  Real L = 0;
  for (std::int64_t a = 1; a < D; ++a) {
    const int chi = arith::kronecker(D, a);
    if (chi == 0) continue;
    const Real h = hurwitz_zeta(sw, Real(a) / Real(D));
    L += chi > 0 ? h : Real(-h);
  }
  L *= mp::pow(Real(D), -sw);
  return riemann_zeta(sw) * L;
}

Real ideal_tail_bound(const Real& sigma, std::int64_t x) {
  if (sigma <= 1) throw Error(ErrorCode::AbscissaViolation, "tail bound needs exponent > 1");
  // Partial summation against A(t) = #{N(a) <= t} <= t (1 + log t).
  const Real X(x);
  const Real d = sigma - 1;
  return sigma * mp::pow(X, 1 - sigma) * ((1 + mp::log(X)) / d + 1 / (d * d));
}

NumericValue zeta_F_euler(const FieldContext& F, const Real& s, std::int64_t x) {
  if (s <= 1) throw Error(ErrorCode::DomainError, "zeta_F needs s > 1");
  const IdealArith ar(F);
  Real prod = 1;
  for (std::int64_t p : arith::primes_up_to(x)) {
    for (const PrimeIdealData& P : ar.primes_above(p)) prod /= 1 - mp::pow(Real(P.ideal.norm()), -s);
  }
  // Omitted primes p > x: at most two ideals each, all of norm >= p.
  const Real X(x);
  const Real log_tail = 2 * mp::pow(X, 1 - s) / ((s - 1) * (1 - mp::pow(X, -s)));
  return {prod, prod * mp::expm1(log_tail)};
}

NumericValue zeta_F_direct(const FieldContext& F, const Real& s, std::int64_t x) {
  if (s <= 1) throw Error(ErrorCode::DomainError, "zeta_F needs s > 1");
  std::vector<std::int64_t> count(static_cast<std::size_t>(x) + 1, 0);
  for (std::int64_t e = 1; e <= x; ++e) {
    const int chi = arith::kronecker(F.disc(), e);
    if (chi == 0) continue;
    for (std::int64_t n = e; n <= x; n += e) count[static_cast<std::size_t>(n)] += chi;
  }
  Real sum = 0;
  for (std::int64_t n = x; n >= 1; --n) {
    const auto c = count[static_cast<std::size_t>(n)];
    if (c != 0) sum += Real(c) * mp::pow(Real(n), -s);
  }
  return {sum, ideal_tail_bound(s, x)};
}

template <class T>
NumericValue L_numeric(const IdealCoeffSeries<T>& f, const Real& s, const Real& growth, const Real& C) {
  if (s - growth <= 1)
    throw Error(ErrorCode::AbscissaViolation, "s must exceed 1 + growth exponent for absolute convergence");
  Real sum = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (is_zero_value(f[i])) continue;
    sum += real_value(f[i]) * mp::pow(Real(f.ideals()[i].norm()), -s);
  }
  return {sum, C * ideal_tail_bound(s - growth, f.max_norm())};
}

template <class T>
NumericValue Lambda_numeric(const IdealCoeffSeries<T>& f, const Real& s, const Real& growth, const Real& C) {
  NumericValue L = L_numeric(f, s, growth, C);
  const Real g = mp::tgamma(s);
  const Real factor = mp::pow(Real(f.field().disc()), s) * mp::pow(2 * real_pi(), -2 * s) * g * g;
  return {L.value * factor, L.tail_bound * factor};
}

template <class T>
NumericValue rankin_selberg_numeric(const IdealCoeffSeries<T>& f, const IdealCoeffSeries<T>& g, const Real& s,
                                    const Real& growth, const Real& C) {
  const std::int64_t X = std::min(f.max_norm(), g.max_norm());
  if (s - growth <= 1)
    throw Error(ErrorCode::AbscissaViolation, "s must exceed 1 + growth exponent for absolute convergence");
  Real sum = 0;
  for (std::size_t i = 0; i < f.size() && f.ideals()[i].norm() <= X; ++i) {
    if (is_zero_value(f[i]) || is_zero_value(g[i])) continue;
    sum += real_value(f[i]) * real_value(g[i]) * mp::pow(Real(f.ideals()[i].norm()), -s);
  }
  return {sum, C * ideal_tail_bound(s - growth, X)};
}

template NumericValue L_numeric(const ExactSeries&, const Real&, const Real&, const Real&);
template NumericValue L_numeric(const RealSeries&, const Real&, const Real&, const Real&);
template NumericValue Lambda_numeric(const ExactSeries&, const Real&, const Real&, const Real&);
template NumericValue Lambda_numeric(const RealSeries&, const Real&, const Real&, const Real&);
template NumericValue rankin_selberg_numeric(const ExactSeries&, const ExactSeries&, const Real&, const Real&,
                                             const Real&);
template NumericValue rankin_selberg_numeric(const RealSeries&, const RealSeries&, const Real&, const Real&,
                                             const Real&);

Thm45Report verify_thm45_identity(const ExactSeries& f, long l, long m) {
  if (auto bad = hecke_relation_failure(f, m, std::min<std::int64_t>(f.max_norm(), 60)))
    throw Error(ErrorCode::NotMultiplicative, "coefficients violate the Hecke product relation at norms " +
                                                  std::to_string(bad->first.norm()) + ", " +
                                                  std::to_string(bad->second.norm()));
  const FieldContext& F = f.field();
  const IdealArith ar(F);
  const IdealTable& t = f.table();
  ExactSeries A(F, f.max_norm(), m, "sigma*c");
  for (std::size_t i = 0; i < f.size(); ++i) A[i] = sigma_from_factors(t.factors[i], l - 1) * f[i];
  ExactSeries Z(F, f.max_norm(), 0, "zeta_squares");
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Ideal& a = f.ideals()[i];
    if (a.norm() * a.norm() > f.max_norm()) break;
    Z.set(ar.mul(a, a), rational_pow(Rational(a.norm()), l + m - 2));
  }
  const ExactSeries lhs = dirichlet_convolve(A, Z);
  const ExactSeries rhs = dirichlet_convolve(f, shift(f, l - 1));
  Thm45Report rep;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    ++rep.checked;
    if (lhs[i] != rhs[i]) {
      rep.first_failure = lhs.ideals()[i];
      rep.lhs_at_failure = lhs[i];
      rep.rhs_at_failure = rhs[i];
      return rep;
    }
  }
  rep.pass = true;
  return rep;
}

nlohmann::json ideal_to_json(const Ideal& I) {
  return {{"g", I.g}, {"a", I.a}, {"b", I.b}, {"norm", I.norm()}};
}

Ideal ideal_from_json(const FieldContext& F, const nlohmann::json& j) {
  Ideal I{j.at("g").get<std::int64_t>(), j.at("a").get<std::int64_t>(), j.at("b").get<std::int64_t>(), std::nullopt};
  if (I.a < 1 || I.g < 1 || I.b < 0 || I.b >= I.a) throw Error(ErrorCode::DomainError, "malformed ideal HNF");
  return IdealArith(F).with_generator(I);
}

nlohmann::json series_to_json(const ExactSeries& A) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (A[i] == 0) continue;
    coeffs.push_back({ideal_to_json(A.ideals()[i]), A[i].get_num().get_str(), A[i].get_den().get_str()});
  }
  return {{"label", A.label}, {"weight", A.weight}, {"max_norm", A.max_norm()}, {"m", A.field().radicand()},
          {"coeffs", coeffs}};
}

nlohmann::json series_to_json(const RealSeries& A) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (A[i] == 0) continue;
    coeffs.push_back({ideal_to_json(A.ideals()[i]), A[i].str(0, std::ios_base::scientific)});
  }
  return {{"label", A.label}, {"weight", A.weight}, {"max_norm", A.max_norm()}, {"m", A.field().radicand()},
          {"coeffs", coeffs}};
}

ExactSeries exact_series_from_json(const FieldContext& F, const nlohmann::json& j) {
  ExactSeries out(F, j.at("max_norm").get<std::int64_t>(), j.value("weight", 0L), j.value("label", std::string{}));
  for (const auto& row : j.at("coeffs")) {
    const Ideal I = ideal_from_json(F, row.at(0));
    Rational q(Integer(row.at(1).get<std::string>()), Integer(row.at(2).get<std::string>()));
    q.canonicalize();
    out.set(I, q);
  }
  return out;
}

}  // namespace hilbert
