#include "hilbert/qexp.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hilbert/error.hpp"

namespace hilbert {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Complex two_pi_i_pow(long p) {
  // (2 pi i)^p
  const double mag = std::pow(kTwoPi, static_cast<double>(p));
  switch (((p % 4) + 4) % 4) {
    case 0: return {mag, 0.0};
    case 1: return {0.0, mag};
    case 2: return {-mag, 0.0};
    default: return {0.0, -mag};
  }
}

double coeff_abs(const FieldContext& F, const Coeff& c) { return std::abs(c.value(F)); }

// (eps+^j rep, j) with the least trace in the orbit.
std::pair<OElem, long> least_trace_member(const FieldContext& F, OElem rep) {
  OElem best = rep;
  long best_j = 0;
  for (int dir : {1, -1}) {
    OElem cur = rep;
    for (long j = dir;; j += dir) {
      cur = F.mul(cur, F.tp_unit_pow_int(dir));
      if (F.trace(cur) >= F.trace(best)) break;
      best = cur;
      best_j = j;
    }
  }
  return {best, best_j};
}

// Orbits not stored: every member has trace > T. At most 2t/sqrt(D) + 1 points of trace t.
double trace_tail(const QExpansion& f, double ymin, double g, double ref) {
  const double sqrtD = std::sqrt(static_cast<double>(f.field().disc()));
  const double logC = std::log(std::max(f.bound_C, 1e-300));
  auto term_at = [&](double t) { return std::exp(std::log(2 * t / sqrtD + 1) + logC + g * std::log(t) - kTwoPi * ymin * t); };
  double tail = 0.0;
  double prev_term = HUGE_VAL;
  for (std::int64_t t = f.trace_bound + 1;; ++t) {
    const double term = term_at(static_cast<double>(t));
    tail += term;
    if (term < prev_term) {
      const double next = term_at(static_cast<double>(t + 1));
      const double r = next / term;
      if (r < 0.95 && term < 1e-30 * (ref > 0 ? ref : 1.0)) {
        tail += next / (1 - r);
        break;
      }
    }
    prev_term = term;
    if (t > f.trace_bound + 2000000) throw Error(ErrorCode::NotConverged, "tail series did not terminate");
  }
  return tail;
}

// Parallel weight, no derivatives: |a| is constant on orbits. A missing orbit has minimal trace > T,
// so its norm exceeds N0 = (T / (sqrt(e) + 1/sqrt(e)))^2, its window representative has trace at most
// sqrt(N)(e + 1/e), and its unit sum is at most 2 sum_{m >= 0} exp(-4 pi sqrt(N Y1 Y2) cosh(m log e)).
double orbit_tail(const QExpansion& f, double y1, double y2, double ref) {
  const FieldContext& F = f.field();
  IdealArith ia(F);
  const double e = F.embed(F.tp_unit(), 0);
  const double L = std::log(e);
  const double s = std::sqrt(y1 * y2);
  const double g = f.bound_exp;
  const double logC = std::log(std::max(f.bound_C, 1e-300));
  const double N0 = std::pow(static_cast<double>(f.trace_bound) / (std::sqrt(e) + 1 / std::sqrt(e)), 2);
  auto orbit_sum = [&](double N) {
    const double a = 2 * kTwoPi * std::sqrt(N) * s;
    double acc = 0.0;
    for (int m = 0; m < 200; ++m) {
      const double t = std::exp(-a * std::cosh(m * L));
      acc += t;
      if (t < 1e-300 || (m > 0 && t < 1e-20 * acc)) break;
    }
    return 2 * acc;
  };
  auto envelope = [&](double N) {
    return std::exp(logC + g * std::log(std::sqrt(N) * (e + 1 / e))) * orbit_sum(N);
  };
  const double floor_ref = 1e-40 * (ref > 0 ? ref : 1.0);
  double tail = 0.0;
  double prev = HUGE_VAL;
  for (std::int64_t N = static_cast<std::int64_t>(std::floor(N0)) + 1;; ++N) {
    const double env = envelope(static_cast<double>(N));
    tail += static_cast<double>(ia.ideal_count_oracle(N)) * env;
    const double u0 = std::sqrt(static_cast<double>(N));
    const double b = 2 * kTwoPi * s;
    // Remaining norms: #ideals of norm n <= 2 sqrt(n), and 2 int_{u0} u^{g+2} e^{-b u} du
    // <= 2 e^{-b u0} u0^{g+2} / (b - (g+2)/u0) once u0 > 2(g+2)/b.
    if (env < floor_ref && env <= prev && u0 > 2 * (g + 2) / b) {
      const double lead = std::exp(logC + g * std::log(e + 1 / e)) * 2.0 * 2.0 * 2.0;
      tail += lead * std::exp(-b * u0 + (g + 2) * std::log(u0)) / (b - (g + 2) / u0);
      break;
    }
    prev = env;
    if (N > static_cast<std::int64_t>(N0) + 50000000) throw Error(ErrorCode::NotConverged, "tail series did not terminate");
  }
  return tail;
}

}  // namespace

Complex Coeff::value(const FieldContext& F) const {
  if (!exact) return z;
  return {F.embed(e, 0), 0.0};
}

Coeff coeff_add(const FieldContext& F, const Coeff& a, const Coeff& b) {
  if (a.exact && b.exact) return Coeff::exact_value(a.e + b.e);
  return Coeff::numeric(a.value(F) + b.value(F));
}

Coeff coeff_mul(const FieldContext& F, const Coeff& a, const Coeff& b) {
  if (a.exact && b.exact) return Coeff::exact_value(F.mul(a.e, b.e));
  return Coeff::numeric(a.value(F) * b.value(F));
}

void check_upper_half_plane(const Point& z) {
  if (!(z[0].imag() > 0) || !(z[1].imag() > 0))
    throw Error(ErrorCode::NotUpperHalfPlane, "both components need positive imaginary part");
}

std::vector<OElem> orbit_reps_meeting(const FieldContext& F, std::int64_t T) {
  std::set<OElem> reps;
  for (const OElem& p : F.enumerate_tp_points(T)) reps.insert(F.tp_orbit_rep(p).first);
  std::vector<OElem> out(reps.begin(), reps.end());
  std::sort(out.begin(), out.end(), [&F](const OElem& a, const OElem& b) {
    const auto ta = F.trace(a), tb = F.trace(b);
    if (ta != tb) return ta < tb;
    const auto na = F.norm(a), nb = F.norm(b);
    if (na != nb) return na < nb;
    return a < b;
  });
  return out;
}

Coeff QExpansion::at(OElem nu) const {
  if (nu.is_zero()) return const_term;
  if (!F->is_totally_positive(nu)) throw Error(ErrorCode::NotTotallyPositive, "Fourier index must be totally positive");
  const auto [rep, j] = F->tp_orbit_rep(nu);
  auto it = coeffs.find(F->to_field(rep));
  if (it == coeffs.end()) {
    if (F->trace(nu) > trace_bound)
      throw Error(ErrorCode::InsufficientTruncation,
                  "coefficient at trace " + std::to_string(F->trace(nu)) + " is beyond the expansion bound");
    return exact ? Coeff::exact_value(FieldElem(0)) : Coeff::numeric({0.0, 0.0});
  }
  const long w = unit_char();
  if (w == 0 || j == 0) return it->second;
  if (it->second.exact) return Coeff::exact_value(F->mul(F->tp_unit_pow(j * w), it->second.e));
  return Coeff::numeric(it->second.z * std::pow(F->embed(F->tp_unit(), 0), static_cast<double>(j * w)));
}

Coeff QExpansion::at(const FieldElem& nu) const { return at(F->to_int(nu)); }

QExpansion constant_qexp(const FieldContext& F, int k, const Coeff& c, std::int64_t T) {
  QExpansion f;
  f.F = &F;
  f.k1 = f.k2 = k;
  f.level = IdealArith(F).unit();
  f.const_term = c;
  f.trace_bound = T;
  f.exact = c.exact;
  f.bound_C = coeff_abs(F, c);
  f.bound_exp = 0.0;
  return f;
}

long unit_peak(const FieldContext& F, double s1, double s2, const Point& z) {
  const double L = std::log(F.embed(F.tp_unit(), 0));
  return std::lround(std::log((s2 * z[1].imag()) / (s1 * z[0].imag())) / (2 * L));
}

EvalResult qexp_eval(const QExpansion& f, const Point& z, std::array<int, 2> deriv) {
  check_upper_half_plane(z);
  const FieldContext& F = f.field();
  const double y1 = z[0].imag(), y2 = z[1].imag();
  const double e1 = F.embed(F.tp_unit(), 0);
  const double w = static_cast<double>(f.unit_char());
  const bool plain = deriv[0] == 0 && deriv[1] == 0;

  struct Orbit {
    double s1, s2;
    Complex v;
    long peak;
  };
  std::vector<Orbit> orbits;
  orbits.reserve(f.coeffs.size());
  double ref = plain ? std::abs(f.const_term.value(F)) : 0.0;
  for (const auto& [nu, c] : f.coeffs) {
    if (c.is_zero()) continue;
    Orbit o{F.embed(nu, 0), F.embed(nu, 1), c.value(F), 0};
    o.peak = unit_peak(F, o.s1, o.s2, z);
    const double p1 = o.s1 * std::pow(e1, static_cast<double>(o.peak)), p2 = o.s2 * std::pow(e1, -static_cast<double>(o.peak));
    ref = std::max(ref, std::abs(o.v) * std::exp(-kTwoPi * (p1 * y1 + p2 * y2)));
    orbits.push_back(o);
  }
  const double thresh = 1e-20 * (ref > 0 ? ref : 1e-300);

  Complex sum = plain ? f.const_term.value(F) : Complex(0.0, 0.0);
  double tail = 0.0;
  for (const Orbit& o : orbits) {
    for (int dir : {1, -1}) {
      double prev = HUGE_VAL;
      for (long j = (dir > 0 ? o.peak : o.peak - 1);; j += dir) {
        const double s1 = o.s1 * std::pow(e1, static_cast<double>(j));
        const double s2 = o.s2 * std::pow(e1, static_cast<double>(-j));
        const double mono = std::pow(s1, deriv[0]) * std::pow(s2, deriv[1]);
        const double charv = std::pow(e1, static_cast<double>(j) * w);
        const double expo = -kTwoPi * (s1 * y1 + s2 * y2);
        const double mag = std::abs(o.v) * charv * mono * std::exp(expo);
        if (mag < thresh && mag <= prev && std::abs(j - o.peak) >= 2) {
          // remaining terms in this direction shrink at least geometrically with ratio <= 1/2
          tail += 2.0 * mag;
          break;
        }
        const Complex ph = std::exp(Complex(0.0, kTwoPi) * (s1 * z[0] + s2 * z[1]));
        sum += o.v * charv * mono * ph;
        prev = mag;
        if (std::abs(j) > 4000) throw Error(ErrorCode::NotConverged, "unit-translate sum did not terminate");
      }
    }
  }

  if (plain && f.unit_char() == 0) {
    tail += orbit_tail(f, y1, y2, ref);
  } else {
    tail += trace_tail(f, std::min(y1, y2), f.bound_exp + deriv[0] + deriv[1], ref);
  }

  const Complex pre = two_pi_i_pow(f.prefactor_pow + deriv[0] + deriv[1]);
  return {sum * pre, tail * std::abs(pre)};
}

QExpansion rankin_cohen(const QExpansion& f, const QExpansion& g, std::array<int, 2> n) {
  if (f.F != g.F) throw Error(ErrorCode::IncompatibleLevels, "expansions live over different fields");
  if (!(f.level == g.level)) throw Error(ErrorCode::IncompatibleLevels, "expansions have different levels");
  if (n[0] < 0 || n[1] < 0) throw Error(ErrorCode::DomainError, "bracket index must be nonnegative");
  const FieldContext& F = f.field();
  QExpansion out;
  out.F = &F;
  out.k1 = f.k1 + g.k1 + 2 * n[0];
  out.k2 = f.k2 + g.k2 + 2 * n[1];
  out.level = f.level;
  out.trace_bound = std::min(f.trace_bound, g.trace_bound);
  out.prefactor_pow = f.prefactor_pow + g.prefactor_pow + n[0] + n[1];
  out.exact = f.exact && g.exact;

  const int kf[2] = {f.k1, f.k2};
  const int kg[2] = {g.k1, g.k2};
  // weight table over l = (l1, l2)
  struct LTerm {
    int l1, l2;
    Rational w;
  };
  std::vector<LTerm> lterms;
  double binom_sum = 0.0;
  for (int l1 = 0; l1 <= n[0]; ++l1) {
    for (int l2 = 0; l2 <= n[1]; ++l2) {
      Rational w = ((l1 + l2) % 2 == 0) ? 1 : -1;
      const int l[2] = {l1, l2};
      for (int j = 0; j < 2; ++j)
        w *= Rational(binomial(kf[j] + n[j] - 1, n[j] - l[j]) * binomial(kg[j] + n[j] - 1, l[j]));
      binom_sum += std::abs(w.get_d());
      lterms.push_back({l1, l2, w});
    }
  }

  auto poly_exact = [&](OElem a, OElem b) {
    const FieldElem A = F.to_field(a), B = F.to_field(b);
    const FieldElem Ac = F.conj(A), Bc = F.conj(B);
    FieldElem s(0);
    for (const LTerm& t : lterms) {
      FieldElem p = F.mul(F.mul(F.pow(A, t.l1), F.pow(Ac, t.l2)), F.mul(F.pow(B, n[0] - t.l1), F.pow(Bc, n[1] - t.l2)));
      s = s + t.w * p;
    }
    return s;
  };
  auto poly_numeric = [&](OElem a, OElem b) {
    const double a1 = F.embed(a, 0), a2 = F.embed(a, 1), b1 = F.embed(b, 0), b2 = F.embed(b, 1);
    double s = 0.0;
    for (const LTerm& t : lterms) {
      s += t.w.get_d() * std::pow(a1, t.l1) * std::pow(a2, t.l2) * std::pow(b1, n[0] - t.l1) *
           std::pow(b2, n[1] - t.l2);
    }
    return s;
  };

  const bool n_zero = n[0] == 0 && n[1] == 0;
  if (n_zero) {
    out.const_term = coeff_mul(F, f.const_term, g.const_term);
  } else {
    out.const_term = out.exact ? Coeff::exact_value(FieldElem(0)) : Coeff::numeric({0.0, 0.0});
  }

  const double w0 = F.embed(OElem{0, 1}, 0), w1 = F.embed(OElem{0, 1}, 1);
  const double sqrtD = std::sqrt(static_cast<double>(F.disc()));
  const long wout = out.unit_char();
  for (const OElem& rep : orbit_reps_meeting(F, out.trace_bound)) {
    // Splittings are read at the member of least trace, which lies inside the complete region.
    const auto [nu, j] = least_trace_member(F, rep);
    const double s1 = F.embed(nu, 0), s2 = F.embed(nu, 1);
    FieldElem acc_e(0);
    bool mixed = false;
    Complex acc_z(0.0, 0.0);
    const auto ylo = static_cast<std::int64_t>(std::floor(-s2 / sqrtD)) - 1;
    const auto yhi = static_cast<std::int64_t>(std::ceil(s1 / sqrtD)) + 1;
    for (std::int64_t y = ylo; y <= yhi; ++y) {
      const double yd = static_cast<double>(y);
      const double xlo = std::max(-yd * w0, -yd * w1);
      const double xhi = std::min(s1 - yd * w0, s2 - yd * w1);
      if (xhi < xlo - 2) continue;
      for (auto x = static_cast<std::int64_t>(std::floor(xlo)) - 1; x <= static_cast<std::int64_t>(std::ceil(xhi)) + 1;
           ++x) {
        const OElem a{x, y};
        const OElem b = nu - a;
        if (!(a.is_zero() || F.is_totally_positive(a))) continue;
        if (!(b.is_zero() || F.is_totally_positive(b))) continue;
        const Coeff ca = f.at(a);
        const Coeff cb = g.at(b);
        if (ca.is_zero() || cb.is_zero()) continue;
        if (ca.exact && cb.exact) {
          acc_e = acc_e + F.mul(poly_exact(a, b), F.mul(ca.e, cb.e));
        } else {
          acc_z += poly_numeric(a, b) * ca.value(F) * cb.value(F);
          mixed = true;
        }
      }
    }
    Coeff c = mixed ? Coeff::numeric(acc_z + Complex(F.embed(acc_e, 0), 0.0)) : Coeff::exact_value(acc_e);
    if (wout != 0 && j != 0) {
      if (c.exact)
        c.e = F.mul(F.tp_unit_pow(-j * wout), c.e);
      else
        c.z *= std::pow(F.embed(F.tp_unit(), 0), static_cast<double>(-j * wout));
    }
    out.coeffs[F.to_field(rep)] = c;
  }

  // splittings of nu number at most 3 Tr(nu)^2; sigma_j(nu_i) <= Tr(nu)
  const double cf = std::max(f.bound_C, coeff_abs(F, f.const_term));
  const double cg = std::max(g.bound_C, coeff_abs(F, g.const_term));
  out.bound_C = 3.0 * binom_sum * cf * cg;
  out.bound_exp = f.bound_exp + g.bound_exp + n[0] + n[1] + 2;
  return out;
}

QExpansion scale(const QExpansion& f, const Coeff& alpha) {
  const FieldContext& F = f.field();
  QExpansion out = f;
  out.const_term = coeff_mul(F, f.const_term, alpha);
  for (auto& [nu, c] : out.coeffs) c = coeff_mul(F, c, alpha);
  out.exact = f.exact && alpha.exact;
  out.bound_C = f.bound_C * coeff_abs(F, alpha);
  return out;
}

QExpansion add(const QExpansion& f, const QExpansion& g) {
  if (f.F != g.F || !(f.level == g.level)) throw Error(ErrorCode::IncompatibleLevels, "cannot add these expansions");
  if (f.k1 != g.k1 || f.k2 != g.k2 || f.prefactor_pow != g.prefactor_pow)
    throw Error(ErrorCode::BadWeight, "summands need equal weight and prefactor");
  const FieldContext& F = f.field();
  QExpansion out = f;
  out.trace_bound = std::min(f.trace_bound, g.trace_bound);
  out.exact = f.exact && g.exact;
  out.const_term = coeff_add(F, f.const_term, g.const_term);
  out.coeffs.clear();
  for (const OElem& nu : orbit_reps_meeting(F, out.trace_bound)) {
    Coeff c = coeff_add(F, f.at(nu), g.at(nu));
    if (!out.exact && c.exact) c = Coeff::numeric(c.value(F));
    out.coeffs[F.to_field(nu)] = c;
  }
  out.bound_C = f.bound_C + g.bound_C;
  out.bound_exp = std::max(f.bound_exp, g.bound_exp);
  return out;
}

Point act(const FieldContext& F, const Matrix2& g, const Point& z) {
  Point out;
  for (int i = 0; i < 2; ++i) {
    const double a = F.embed(g.a, i), b = F.embed(g.b, i), c = F.embed(g.c, i), d = F.embed(g.d, i);
    out[static_cast<std::size_t>(i)] = (a * z[static_cast<std::size_t>(i)] + b) / (c * z[static_cast<std::size_t>(i)] + d);
  }
  return out;
}

void check_in_gamma0(const FieldContext& F, const Matrix2& g, const Ideal& level) {
  if (!g.a.is_integral() || !g.d.is_integral()) throw Error(ErrorCode::NotInGroup, "diagonal entries must be integral");
  if (!F.mul(g.b, F.diff_gen()).is_integral()) throw Error(ErrorCode::NotInGroup, "b must lie in the inverse different");
  const FieldElem cq = F.div(g.c, F.diff_gen());
  if (!cq.is_integral()) throw Error(ErrorCode::NotInGroup, "c must lie in the different times the level");
  if (!cq.is_zero() && !IdealArith(F).contains(level, F.to_int(cq)))
    throw Error(ErrorCode::NotInGroup, "c must lie in the different times the level");
  const FieldElem det = F.mul(g.a, g.d) - F.mul(g.b, g.c);
  if (!det.is_integral() || F.norm(det) != 1 || !F.is_totally_positive(det))
    throw Error(ErrorCode::NotInGroup, "determinant must be a totally positive unit");
}

Complex automorphy_factor(const FieldContext& F, const Matrix2& g, const Point& z, int k1, int k2) {
  const FieldElem det = F.mul(g.a, g.d) - F.mul(g.b, g.c);
  const int k[2] = {k1, k2};
  Complex out(1.0, 0.0);
  for (int i = 0; i < 2; ++i) {
    const double c = F.embed(g.c, i), d = F.embed(g.d, i);
    const Complex j = c * z[static_cast<std::size_t>(i)] + d;
    out *= std::pow(F.embed(det, i), -0.5 * k[i]) * std::pow(j, k[i]);
  }
  return out;
}

DefectResult modularity_defect(const QExpansion& f, const Matrix2& g, const Point& z) {
  const FieldContext& F = f.field();
  check_in_gamma0(F, g, f.level);
  check_upper_half_plane(z);
  const Point gz = act(F, g, z);
  check_upper_half_plane(gz);
  const EvalResult lhs = qexp_eval(f, gz);
  const EvalResult base = qexp_eval(f, z);
  const Complex j = automorphy_factor(F, g, z, f.k1, f.k2);
  DefectResult out;
  out.lhs = lhs.value;
  out.rhs = j * base.value;
  out.defect = std::abs(out.lhs - out.rhs);
  out.tail = lhs.tail_bound + std::abs(j) * base.tail_bound;
  return out;
}

nlohmann::json coeff_to_json(const Coeff& c) {
  if (c.exact) return format_elem(c.e);
  return nlohmann::json::array({c.z.real(), c.z.imag()});
}

nlohmann::json qexp_to_json(const QExpansion& f) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& [nu, c] : f.coeffs) coeffs.push_back({format_elem(nu), coeff_to_json(c)});
  return {{"m", f.field().radicand()},
          {"weight", {f.k1, f.k2}},
          {"level", {{"g", f.level.g}, {"a", f.level.a}, {"b", f.level.b}, {"norm", f.level.norm()}}},
          {"trace_bound", f.trace_bound},
          {"prefactor_pow", f.prefactor_pow},
          {"mode", f.exact ? "exact" : "numeric"},
          {"const_term", coeff_to_json(f.const_term)},
          {"coeffs", coeffs}};
}

}  // namespace hilbert
