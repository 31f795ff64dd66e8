#include "hilbert/quadfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "hilbert/arith.hpp"
#include "hilbert/error.hpp"

namespace hilbert {

namespace {

Rational round_rational(const Rational& q) {
  // nearest integer, ties away from zero
  Integer twice = 2 * q.get_num();
  Integer den = 2 * q.get_den();
  Integer num = twice + q.get_den();
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return Rational(out);
}

std::int64_t round_div(std::int64_t num, std::int64_t den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return arith::floor_div(2 * num + den, 2 * den);
}

}  // namespace

const std::vector<int>& supported_radicands() {
  static const std::vector<int> list{2, 5, 13, 17};
  return list;
}

FieldContext::FieldContext(int m) : m_(m) {
  if (!arith::is_squarefree(m) || m <= 1)
    throw Error(ErrorCode::UnsupportedField, "radicand " + std::to_string(m) + " is not a squarefree integer > 1");
  const auto& list = supported_radicands();
  if (std::find(list.begin(), list.end(), m) == list.end())
    throw Error(ErrorCode::UnsupportedField, "radicand " + std::to_string(m) + " is not in the supported list");

  if (m % 4 == 1) {
    t_ = 1;
    n_ = (1 - m) / 4;
    disc_ = m;
  } else {
    t_ = 0;
    n_ = -m;
    disc_ = 4 * m;
  }
  const double root = std::sqrt(static_cast<double>(t_ * t_ - 4 * n_));
  omega_embed_[0] = (static_cast<double>(t_) + root) / 2.0;
  omega_embed_[1] = (static_cast<double>(t_) - root) / 2.0;

  // Continued fraction of theta = -conj(omega) = (P + sqrt m)/Q; the first
  // convergent p/q with N(p + q*omega) = +-1 gives the fundamental unit.
  std::int64_t P = (m % 4 == 1) ? -1 : 0;
  std::int64_t Q = (m % 4 == 1) ? 2 : 1;
  const std::int64_t s = arith::isqrt(m);
  std::int64_t h1 = 1, h2 = 0, k1 = 0, k2 = 1;
  bool found = false;
  for (int iter = 0; iter < 200 && !found; ++iter) {
    if (Q <= 0) throw Error(ErrorCode::UnsupportedField, "continued fraction left the reduced range");
    const std::int64_t a = arith::floor_div(P + s, Q);
    const std::int64_t h = a * h1 + h2;
    const std::int64_t k = a * k1 + k2;
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
    const OElem u{h, k};
    if (k > 0 && std::llabs(norm(u)) == 1 && embed(u, 0) > 1.0) {
      fund_unit_ = to_field(u);
      found = true;
    }
    P = a * Q - P;
    Q = (m - P * P) / Q;
  }
  if (!found) throw Error(ErrorCode::UnsupportedField, "no fundamental unit found");

  tp_unit_ = norm(fund_unit_) < 0 ? mul(fund_unit_, fund_unit_) : fund_unit_;
  tp_unit_int_ = to_int(tp_unit_);
  log_ratio_unit_ = std::log(embed(tp_unit_, 0) / embed(tp_unit_, 1));

  FieldElem delta = (m % 4 == 1) ? FieldElem(-1, 2) : FieldElem(0, 2);
  if (norm(delta) < 0) delta = mul(delta, fund_unit_);
  if (trace(delta) < 0) delta = -delta;
  diff_gen_ = tp_orbit_rep(delta).first;
  diff_gen_int_ = to_int(diff_gen_);
}

FieldElem FieldContext::mul(const FieldElem& a, const FieldElem& b) const {
  const Rational yy = a.y * b.y;
  return {a.x * b.x - n_ * yy, a.x * b.y + a.y * b.x + t_ * yy};
}

FieldElem FieldContext::conj(const FieldElem& a) const { return {a.x + t_ * a.y, -a.y}; }

Rational FieldContext::norm(const FieldElem& a) const { return a.x * a.x + t_ * a.x * a.y + n_ * a.y * a.y; }

Rational FieldContext::trace(const FieldElem& a) const { return 2 * a.x + t_ * a.y; }

FieldElem FieldContext::inv(const FieldElem& a) const {
  if (a.is_zero()) throw Error(ErrorCode::DomainError, "inverse of zero");
  const Rational n = norm(a);
  const FieldElem c = conj(a);
  return {c.x / n, c.y / n};
}

FieldElem FieldContext::div(const FieldElem& a, const FieldElem& b) const { return mul(a, inv(b)); }

FieldElem FieldContext::pow(const FieldElem& a, long e) const {
  FieldElem base = e < 0 ? inv(a) : a;
  unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
  FieldElem out(1);
  while (k) {
    if (k & 1UL) out = mul(out, base);
    base = mul(base, base);
    k >>= 1U;
  }
  return out;
}

bool FieldContext::is_totally_positive(const FieldElem& a) const { return norm(a) > 0 && trace(a) > 0; }

bool FieldContext::divides(const FieldElem& a, const FieldElem& b) const {
  if (a.is_zero()) return false;
  return div(b, a).is_integral();
}

OElem FieldContext::mul(OElem a, OElem b) const {
  const std::int64_t yy = a.y * b.y;
  return {a.x * b.x - n_ * yy, a.x * b.y + a.y * b.x + t_ * yy};
}

bool FieldContext::divides(OElem a, OElem b) const {
  const std::int64_t n = norm(a);
  if (n == 0) return false;
  const OElem p = mul(b, conj(a));
  return p.x % n == 0 && p.y % n == 0;
}

OElem FieldContext::pow(OElem a, long e) const {
  if (e < 0) {
    if (std::llabs(norm(a)) != 1) throw Error(ErrorCode::DomainError, "negative power of a non-unit");
    a = norm(a) == 1 ? conj(a) : -conj(a);
    e = -e;
  }
  OElem out{1, 0};
  while (e) {
    if (e & 1L) out = mul(out, a);
    a = mul(a, a);
    e >>= 1;
  }
  return out;
}

OElem FieldContext::to_int(const FieldElem& a) const {
  if (!a.is_integral()) throw Error(ErrorCode::DomainError, "element is not integral: " + format_elem(a));
  if (!mpz_fits_slong_p(a.x.get_num_mpz_t()) || !mpz_fits_slong_p(a.y.get_num_mpz_t()))
    throw Error(ErrorCode::DomainError, "element coordinates exceed machine range");
  return {a.x.get_num().get_si(), a.y.get_num().get_si()};
}

double FieldContext::embed(const FieldElem& a, int i) const { return a.x.get_d() + a.y.get_d() * omega_embed_[i]; }

Real FieldContext::embed_real(const FieldElem& a, int i) const {
  Real root = boost::multiprecision::sqrt(Real(t_ * t_ - 4 * n_));
  Real w = (Real(t_) + (i == 0 ? root : Real(-root))) / 2;
  return to_real(a.x) + to_real(a.y) * w;
}

std::pair<Real, Real> FieldContext::embed_interval(const FieldElem& a, int i, long bits) const {
  // sigma_i(a) = (x + y*t/2) +- (y/2)*sqrt(Delta)
  const Rational base = a.x + a.y * t_ / 2;
  const Rational coef = (i == 0 ? a.y : Rational(-a.y)) / 2;
  const auto delta = static_cast<unsigned long>(t_ * t_ - 4 * n_);
  mpfr_t r_lo, r_hi, lo, hi;
  mpfr_inits2(bits, r_lo, r_hi, lo, hi, static_cast<mpfr_ptr>(nullptr));
  mpfr_sqrt_ui(r_lo, delta, MPFR_RNDD);
  mpfr_sqrt_ui(r_hi, delta, MPFR_RNDU);
  if (coef >= 0) {
    mpfr_mul_q(lo, r_lo, coef.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(hi, r_hi, coef.get_mpq_t(), MPFR_RNDU);
  } else {
    mpfr_mul_q(lo, r_hi, coef.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(hi, r_lo, coef.get_mpq_t(), MPFR_RNDU);
  }
  mpfr_add_q(lo, lo, base.get_mpq_t(), MPFR_RNDD);
  mpfr_add_q(hi, hi, base.get_mpq_t(), MPFR_RNDU);
  Real out_lo, out_hi;
  out_lo.precision(static_cast<unsigned>(std::ceil(bits * 0.30103)) + 2);
  out_hi.precision(static_cast<unsigned>(std::ceil(bits * 0.30103)) + 2);
  mpfr_set(out_lo.backend().data(), lo, MPFR_RNDD);
  mpfr_set(out_hi.backend().data(), hi, MPFR_RNDU);
  mpfr_clears(r_lo, r_hi, lo, hi, static_cast<mpfr_ptr>(nullptr));
  return {out_lo, out_hi};
}

bool FieldContext::in_window(const FieldElem& nu) const {
  // sigma_1 >= sigma_2  <=>  y >= 0; ratio below the unit ratio <=> y(nu*conj(eps+)) < 0.
  return nu.y >= 0 && mul(nu, conj(tp_unit_)).y < 0;
}

bool FieldContext::in_window(OElem nu) const { return nu.y >= 0 && mul(nu, conj(tp_unit_int_)).y < 0; }

std::pair<FieldElem, long> FieldContext::tp_orbit_rep(const FieldElem& nu) const {
  if (!is_totally_positive(nu))
    throw Error(ErrorCode::NotTotallyPositive, "element " + format_elem(nu) + " is not totally positive");
  const double ratio = std::log(embed(nu, 0)) - std::log(embed(nu, 1));
  long j = static_cast<long>(std::floor(ratio / log_ratio_unit_));
  FieldElem rep = mul(nu, pow(conj(tp_unit_), j));
  const FieldElem up = tp_unit_;
  const FieldElem down = conj(tp_unit_);
  for (int guard = 0; guard < 64 && !in_window(rep); ++guard) {
    if (rep.y < 0) {
      rep = mul(rep, up);
      --j;
    } else {
      rep = mul(rep, down);
      ++j;
    }
  }
  if (!in_window(rep)) throw Error(ErrorCode::DomainError, "orbit reduction did not settle");
  return {rep, j};
}

std::pair<OElem, long> FieldContext::tp_orbit_rep(OElem nu) const {
  if (!is_totally_positive(nu))
    throw Error(ErrorCode::NotTotallyPositive, "element is not totally positive");
  const double ratio = std::log(embed(nu, 0)) - std::log(embed(nu, 1));
  long j = static_cast<long>(std::floor(ratio / log_ratio_unit_));
  OElem rep = mul(nu, pow(conj(tp_unit_int_), j));
  for (int guard = 0; guard < 64 && !in_window(rep); ++guard) {
    if (rep.y < 0) {
      rep = mul(rep, tp_unit_int_);
      --j;
    } else {
      rep = mul(rep, conj(tp_unit_int_));
      ++j;
    }
  }
  if (!in_window(rep)) throw Error(ErrorCode::DomainError, "orbit reduction did not settle");
  return {rep, j};
}

std::vector<OElem> FieldContext::enumerate_tp_points(std::int64_t trace_bound) const {
  std::vector<OElem> out;
  if (trace_bound < 2) return out;
  const double gap = omega_embed_[0] - omega_embed_[1];
  const auto ymax = static_cast<std::int64_t>(std::ceil(static_cast<double>(trace_bound) / gap)) + 1;
  for (std::int64_t y = -ymax; y <= ymax; ++y) {
    const double lo = std::max(-static_cast<double>(y) * omega_embed_[0], -static_cast<double>(y) * omega_embed_[1]);
    const std::int64_t x_lo = static_cast<std::int64_t>(std::floor(lo)) - 1;
    const std::int64_t x_hi = arith::floor_div(trace_bound - t_ * y, 2);
    for (std::int64_t x = x_lo; x <= x_hi; ++x) {
      const OElem nu{x, y};
      if (is_totally_positive(nu) && trace(nu) <= trace_bound) out.push_back(nu);
    }
  }
  return out;
}

std::vector<OElem> FieldContext::enumerate_tp_orbits_int(std::int64_t trace_bound) const {
  std::vector<OElem> out;
  for (const OElem& nu : enumerate_tp_points(trace_bound))
    if (in_window(nu)) out.push_back(nu);
  std::sort(out.begin(), out.end(), [this](const OElem& a, const OElem& b) {
    const auto ta = trace(a), tb = trace(b);
    if (ta != tb) return ta < tb;
    const auto na = norm(a), nb = norm(b);
    if (na != nb) return na < nb;
    return a < b;
  });
  return out;
}

std::vector<FieldElem> FieldContext::enumerate_tp_orbits(const Rational& trace_bound) const {
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), trace_bound.get_num_mpz_t(), trace_bound.get_den_mpz_t());
  std::vector<FieldElem> out;
  if (trace_bound <= 0) return out;
  for (const OElem& nu : enumerate_tp_orbits_int(fl.get_si())) out.push_back(to_field(nu));
  return out;
}

FieldElem FieldContext::tp_unit_pow(long j) const { return pow(tp_unit_, j); }

OElem FieldContext::tp_unit_pow_int(long j) const { return pow(tp_unit_int_, j); }

OElem FieldContext::euclid_remainder(OElem a, OElem b) const {
  const std::int64_t nb = norm(b);
  const OElem num = mul(a, conj(b));
  const OElem q0{round_div(num.x, nb), round_div(num.y, nb)};
  OElem best = a;
  bool have = false;
  for (std::int64_t dx = -1; dx <= 1; ++dx) {
    for (std::int64_t dy = -1; dy <= 1; ++dy) {
      const OElem r = a - mul(OElem{q0.x + dx, q0.y + dy}, b);
      if (!have || std::llabs(norm(r)) < std::llabs(norm(best))) {
        best = r;
        have = true;
      }
    }
  }
  if (std::llabs(norm(best)) >= std::llabs(nb))
    throw Error(ErrorCode::EuclideanFailure, "no rounding candidate reduces the norm");
  return best;
}

OElem FieldContext::ext_gcd(OElem a, OElem b, OElem& u, OElem& v) const {
  if (a.is_zero() && b.is_zero()) throw Error(ErrorCode::DomainError, "gcd of (0, 0)");
  OElem r0 = a, r1 = b, u0{1, 0}, u1{0, 0}, v0{0, 0}, v1{1, 0};
  while (!r1.is_zero()) {
    const OElem r2 = euclid_remainder(r0, r1);
    // r2 = r0 - q*r1; recover q exactly
    const std::int64_t n1 = norm(r1);
    const OElem qn = mul(r0 - r2, conj(r1));
    const OElem q{qn.x / n1, qn.y / n1};
    const OElem u2 = u0 - mul(q, u1);
    const OElem v2 = v0 - mul(q, v1);
    r0 = r1;
    r1 = r2;
    u0 = u1;
    u1 = u2;
    v0 = v1;
    v1 = v2;
  }
  u = u0;
  v = v0;
  return r0;
}

ExtGcdResult FieldContext::ext_gcd(const FieldElem& a, const FieldElem& b) const {
  if (a.is_zero() && b.is_zero()) throw Error(ErrorCode::DomainError, "gcd of (0, 0)");
  if (!a.is_integral() || !b.is_integral()) throw Error(ErrorCode::DomainError, "ext_gcd needs integral inputs");
  FieldElem r0 = a, r1 = b, u0(1), u1(0), v0(0), v1(1);
  while (!r1.is_zero()) {
    const FieldElem exact = div(r0, r1);
    const FieldElem q0(round_rational(exact.x), round_rational(exact.y));
    FieldElem best_q = q0;
    Rational best_norm = -1;
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        const FieldElem q = q0 + FieldElem(Rational(dx), Rational(dy));
        const Rational nr = abs(norm(r0 - mul(q, r1)));
        if (best_norm < 0 || nr < best_norm) {
          best_norm = nr;
          best_q = q;
        }
      }
    }
    if (best_norm >= abs(norm(r1))) throw Error(ErrorCode::EuclideanFailure, "no rounding candidate reduces the norm");
    const FieldElem r2 = r0 - mul(best_q, r1);
    const FieldElem u2 = u0 - mul(best_q, u1);
    const FieldElem v2 = v0 - mul(best_q, v1);
    r0 = r1;
    r1 = r2;
    u0 = u1;
    u1 = u2;
    v0 = v1;
    v1 = v2;
  }
  return {r0, u0, v0};
}

std::string FieldContext::describe(const FieldElem& a) const {
  std::ostringstream os;
  os << a.x.get_str() << " + " << a.y.get_str() << "*w";
  return os.str();
}

const FieldContext& make_field(int m) {
  static std::mutex lock;
  static std::map<int, std::unique_ptr<FieldContext>> registry;
  std::lock_guard<std::mutex> guard(lock);
  auto it = registry.find(m);
  if (it != registry.end()) return *it->second;
  auto ctx = std::make_unique<FieldContext>(m);
  const FieldContext& ref = *ctx;
  registry.emplace(m, std::move(ctx));
  return ref;
}

std::string format_elem(const FieldElem& a) { return a.x.get_str() + "," + a.y.get_str(); }

FieldElem parse_elem(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw Error(ErrorCode::Usage, "element must look like x,y: " + text);
  try {
    Rational x(text.substr(0, comma));
    Rational y(text.substr(comma + 1));
    return {x, y};
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::Usage, "malformed rational in element: " + text);
  }
}

}  // namespace hilbert
