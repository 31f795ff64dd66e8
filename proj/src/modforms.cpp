#include "hilbert/modforms.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <unordered_map>

#include "hilbert/error.hpp"

namespace hilbert {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.14159265358979323846264338327950;

void check_even_weight(int k) {
  if (k < 4 || k % 2 != 0) throw Error(ErrorCode::BadWeight, "weight must be even and at least 4");
}

struct OKey {
  std::int64_t v[7];
  bool operator==(const OKey& o) const { return std::equal(v, v + 7, o.v); }
};

struct OKeyHash {
  std::size_t operator()(const OKey& k) const {
    std::size_t h = 1469598103934665603ull;
    for (std::int64_t x : k.v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
    return h;
  }
};

// Unit residues modulo (c') with their inverses.
struct ResidueTable {
  Ideal q;
  std::vector<OElem> units;
  std::vector<OElem> inverses;
  std::map<OElem, std::size_t> index;
};

std::mutex g_cache_mutex;
std::unordered_map<OKey, KloostermanValue, OKeyHash> g_kloosterman;
std::map<std::pair<int, OElem>, std::shared_ptr<const ResidueTable>> g_residues;

std::shared_ptr<const ResidueTable> residue_table(const FieldContext& F, OElem cprime) {
  const auto key = std::make_pair(F.radicand(), cprime);
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_residues.find(key);
    if (it != g_residues.end()) return it->second;
  }
  IdealArith ia(F);
  auto t = std::make_shared<ResidueTable>();
  t->q = ia.from_generator(cprime);
  for (OElem r : ia.residues(t->q)) {
    if (!ia.is_unit_mod(r, t->q)) continue;
    t->index[r] = t->units.size();
    t->units.push_back(r);
    t->inverses.push_back(ia.inv_mod(r, t->q));
  }
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  g_residues.emplace(key, t);
  return t;
}

OElem divide_exact(const FieldContext& F, OElem a, OElem b) {
  const std::int64_t n = F.norm(b);
  const OElem p = F.mul(a, F.conj(b));
  if (p.x % n != 0 || p.y % n != 0) throw Error(ErrorCode::CompletionFailure, "quotient is not integral");
  return {p.x / n, p.y / n};
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

// ---------------------------------------------------------------- Eisenstein

Real eisenstein_constant(const FieldContext& F, int k) {
  check_even_weight(k);
  const Real two_pi = 2 * real_pi();
  const Real gk = boost::multiprecision::tgamma(Real(k));
  const Real D = Real(F.disc());
  return pow(two_pi, 2 * k) / (gk * gk * pow(D, Real(k) - Real(1) / 2));
}

QExpansion eisenstein_qexp(const FieldContext& F, int k, const Ideal& level, std::int64_t T, EisensteinNorm norm,
                           long prec_bits) {
  check_even_weight(k);
  IdealArith ia(F);
  const Ideal lev = ia.with_generator(level);
  if (!lev.tp_gen) throw Error(ErrorCode::BadLevel, "level has no totally positive generator");
  const OElem n = *lev.tp_gen;

  PrecisionScope scope(prec_bits);
  const Real K = eisenstein_constant(F, k);
  const Real zeta = zeta_F_numeric(F, Real(k), prec_bits);

  QExpansion f;
  f.F = &F;
  f.k1 = f.k2 = k;
  f.level = lev;
  f.trace_bound = T;
  double scale_abs = 1.0;
  switch (norm) {
    case EisensteinNorm::Normalized:
      f.const_term = Coeff::numeric({to_double(Real(zeta / K)), 0.0});
      f.exact = false;
      break;
    case EisensteinNorm::Classical:
      f.const_term = Coeff::numeric({to_double(zeta), 0.0});
      f.exact = false;
      scale_abs = to_double(K);
      break;
    case EisensteinNorm::Coset:
      f.const_term = Coeff::exact_value(FieldElem(1));
      f.exact = false;
      scale_abs = to_double(Real(K / zeta));
      break;
  }

  for (OElem nu : orbit_reps_meeting(F, T)) {
    if (!ia.contains(lev, nu)) continue;
    const Ideal b = ia.from_generator(divide_exact(F, nu, n));
    const Rational s = ia.sigma(b, k - 1);
    if (norm == EisensteinNorm::Normalized)
      f.coeffs[F.to_field(nu)] = Coeff::exact_value(FieldElem(s, 0));
    else
      f.coeffs[F.to_field(nu)] = Coeff::numeric({scale_abs * s.get_d(), 0.0});
  }
  // sigma_{k-1}(b) <= zeta_F(k-1) N(b)^{k-1} and N(b) <= N(nu) <= (Tr(nu)/2)^2
  const double sigma_const = to_double(zeta_F_numeric(F, Real(k - 1), 64));
  f.bound_C = scale_abs * sigma_const * std::pow(2.0, -2.0 * (k - 1));
  f.bound_exp = 2.0 * (k - 1);
  return f;
}

// ---------------------------------------------------------------- Bessel

Real bessel_J(int order, const Real& x, long prec_bits, double x_cap) {
  if (order < 0) throw Error(ErrorCode::DomainError, "order must be non-negative");
  if (x < 0) throw Error(ErrorCode::DomainError, "argument must be non-negative");
  const double xd = to_double(x);
  if (xd > x_cap) throw Error(ErrorCode::ArgumentTooLarge, "argument exceeds the ascending-series cap");
  const long work = prec_bits + static_cast<long>(std::ceil(1.5 * xd)) + 32;
  if (x == 0) return with_precision(Real(order == 0 ? 1 : 0), prec_bits);
  PrecisionScope scope(work);
  const Real h = with_precision(x, work) / 2;
  const Real h2 = h * h;
  Real term = pow(h, order);
  for (int i = 2; i <= order; ++i) term /= i;
  Real sum = term;
  const Real eps = pow(Real(2), -(prec_bits + 16));
  for (long j = 1;; ++j) {
    term *= -h2;
    term /= Real(j) * Real(j + order);
    sum += term;
    if (j > xd && abs(term) <= eps * abs(sum)) break;
  }
  return with_precision(sum, prec_bits);
}

// ---------------------------------------------------------------- Kloosterman

KloostermanValue kloosterman_sum(const FieldContext& F, OElem nu, OElem mu, const FieldElem& c) {
  if (c.is_zero()) throw Error(ErrorCode::ZeroModulus, "modulus is zero");
  const FieldElem cq = F.div(c, F.diff_gen());
  if (!cq.is_integral()) throw Error(ErrorCode::DomainError, "modulus must lie in the different");
  const OElem cprime = F.to_int(cq);
  const OKey key{{F.radicand(), nu.x, nu.y, mu.x, mu.y, cprime.x, cprime.y}};
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_kloosterman.find(key);
    if (it != g_kloosterman.end()) return it->second;
  }
  const OElem cint = F.to_int(c);
  const OElem cbar = F.conj(cint);
  const std::int64_t N = F.norm(cint);
  const std::int64_t absN = N < 0 ? -N : N;
  const auto table = residue_table(F, cprime);
  KloostermanValue out;
  for (std::size_t i = 0; i < table->units.size(); ++i) {
    const OElem alpha = F.mul(nu, table->units[i]) + F.mul(mu, table->inverses[i]);
    const std::int64_t t = F.trace(F.mul(alpha, cbar));
    const double frac = static_cast<double>(floor_mod(N < 0 ? -t : t, absN)) / static_cast<double>(absN);
    out.re += std::cos(kTwoPi * frac);
    out.im += std::sin(kTwoPi * frac);
    ++out.terms;
  }
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  if (g_kloosterman.size() > 4000000) g_kloosterman.clear();
  g_kloosterman.emplace(key, out);
  return out;
}

void clear_kloosterman_cache() {
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  g_kloosterman.clear();
  g_residues.clear();
}

std::size_t kloosterman_cache_size() {
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  return g_kloosterman.size();
}

// ---------------------------------------------------------------- Poincare coefficients

namespace {

struct Modulus {
  OElem cprime;
  std::int64_t norm;  // N(c') > 0
};

// Canonical totally positive generators of all ideals of norm <= X, sorted by norm.
std::vector<Modulus> moduli(const FieldContext& F, std::int64_t X) {
  static std::mutex mu;
  static std::map<int, std::vector<Modulus>> cache;
  static std::map<int, std::int64_t> cached_bound;
  std::lock_guard<std::mutex> lock(mu);
  auto& list = cache[F.radicand()];
  if (cached_bound[F.radicand()] < X) {
    IdealArith ia(F);
    list.clear();
    for (const Ideal& I : ia.enumerate(X)) list.push_back({ia.tp_generator(I), I.norm()});
    cached_bound[F.radicand()] = X;
  }
  std::vector<Modulus> out;
  for (const Modulus& m : list)
    if (m.norm <= X) out.push_back(m);
  return out;
}

class CoefficientSum {
 public:
  CoefficientSum(const FieldContext& F, OElem nu, OElem mu, int k) : F_(F), nu_(nu), mu_(mu), k_(k) {
    delta_[0] = std::abs(F.embed(F.diff_gen(), 0));
    delta_[1] = std::abs(F.embed(F.diff_gen(), 1));
    nu_e_[0] = F.embed(nu, 0);
    nu_e_[1] = F.embed(nu, 1);
  }

  // Adds every (c', j) pair with N(c') <= X and |j| <= W not yet included.
  std::int64_t extend(std::int64_t X, int W) {
    const std::vector<Modulus> ms = moduli(F_, X);
    std::int64_t added = 0;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const bool old_c = i < done_moduli_;
      for (int j = -W; j <= W; ++j) {
        if (old_c && std::abs(j) <= done_w_) continue;
        sum_ += term(ms[i], j);
        ++added;
      }
    }
    done_moduli_ = ms.size();
    done_w_ = W;
    return added;
  }

  double sum() const { return sum_; }

 private:
  double term(const Modulus& m, int j) {
    const OElem emu = F_.mul(F_.tp_unit_pow_int(j), mu_);
    const FieldElem c = F_.mul(F_.diff_gen(), F_.to_field(m.cprime));
    const KloostermanValue S = kloosterman_sum(F_, nu_, emu, c);
    double out = S.re / (F_.disc() * static_cast<double>(m.norm));
    for (int i = 0; i < 2; ++i) {
      const double ci = delta_[i] * std::abs(F_.embed(m.cprime, i));
      const double x = 2 * kTwoPi * std::sqrt(nu_e_[i] * F_.embed(emu, i)) / ci;
      out *= std::cyl_bessel_j(static_cast<double>(k_ - 1), x);
    }
    return out;
  }

  const FieldContext& F_;
  OElem nu_, mu_;
  int k_;
  double delta_[2];
  double nu_e_[2];
  double sum_ = 0.0;
  std::size_t done_moduli_ = 0;
  int done_w_ = -1;
};

}  // namespace

PoincareCoeff poincare_coeff(const FieldContext& F, OElem nu, OElem mu, int k, const TruncationPolicy& policy) {
  check_even_weight(k);
  if (!F.is_totally_positive(nu) || !F.is_totally_positive(mu))
    throw Error(ErrorCode::NotTotallyPositive, "indices must be totally positive");
  const double chi = F.tp_orbit_rep(nu).first == F.tp_orbit_rep(mu).first ? 1.0 : 0.0;
  const double D = static_cast<double>(F.disc());
  const double pref = std::sqrt(D) * kTwoPi * kTwoPi *
                      std::pow(static_cast<double>(F.norm(nu)) / static_cast<double>(F.norm(mu)), 0.5 * (k - 1));

  CoefficientSum acc(F, nu, mu, k);
  PoincareCoeff out;
  std::int64_t cmax = policy.cmax;
  int W = policy.eps_window;
  out.report.c_terms += acc.extend(cmax / F.disc(), W);
  double value = chi + pref * acc.sum();
  out.report.last_increment = std::nan("");
  if (policy.escalate) {
    while (true) {
      if (2 * cmax > policy.cmax_limit && W + 1 > policy.eps_window_limit) break;
      cmax = std::min(2 * cmax, std::max(cmax, policy.cmax_limit));
      W = std::min(W + 1, std::max(W, policy.eps_window_limit));
      out.report.c_terms += acc.extend(cmax / F.disc(), W);
      const double next = chi + pref * acc.sum();
      out.report.last_increment = std::abs(next - value);
      ++out.report.escalations;
      value = next;
      if (out.report.last_increment < policy.tol * std::max(1.0, std::abs(value))) {
        out.report.converged = true;
        break;
      }
    }
    if (!out.report.converged)
      throw Error(ErrorCode::NotConverged, "coefficient sum did not settle within the policy limits");
  }
  out.value = value;
  out.report.cmax_used = cmax;
  out.report.eps_window_used = W;
  return out;
}

QExpansion poincare_qexp(const FieldContext& F, OElem mu, int k, std::int64_t T, const TruncationPolicy& policy,
                         ConvergenceReport* worst) {
  check_even_weight(k);
  QExpansion f;
  f.F = &F;
  f.k1 = f.k2 = k;
  f.level = IdealArith(F).unit();
  f.const_term = Coeff::exact_value(FieldElem(0));
  f.trace_bound = T;
  f.exact = false;
  double ratio = 0.0;
  ConvergenceReport w;
  w.converged = true;
  for (OElem nu : orbit_reps_meeting(F, T)) {
    const PoincareCoeff c = poincare_coeff(F, nu, mu, k, policy);
    f.coeffs[F.to_field(nu)] = Coeff::numeric({c.value, 0.0});
    ratio = std::max(ratio, std::abs(c.value) / std::pow(static_cast<double>(F.norm(nu)), 0.5 * (k - 1)));
    w.cmax_used = std::max(w.cmax_used, c.report.cmax_used);
    w.eps_window_used = std::max(w.eps_window_used, c.report.eps_window_used);
    w.escalations = std::max(w.escalations, c.report.escalations);
    w.c_terms += c.report.c_terms;
    w.converged = w.converged && c.report.converged;
    if (!std::isnan(c.report.last_increment))
      w.last_increment = std::max(w.last_increment, c.report.last_increment);
  }
  // |c(nu)| <= C N(nu)^{(k-1)/2} <= C (Tr/2)^{k-1}, C read off the stored coefficients with a factor 2 margin.
  f.bound_C = 2.0 * std::max(ratio, 1.0) * std::pow(2.0, -(k - 1.0));
  f.bound_exp = k - 1.0;
  if (worst) *worst = w;
  return f;
}

// ---------------------------------------------------------------- direct coset sums

CosetRep complete_coset(const FieldContext& F, OElem cprime, OElem d) {
  if (cprime.is_zero()) throw Error(ErrorCode::CompletionFailure, "c must be nonzero");
  IdealArith ia(F);
  const Ideal q = ia.from_generator(cprime);
  if (!ia.is_unit_mod(d, q)) throw Error(ErrorCode::CompletionFailure, "c and d are not coprime");
  const OElem a = ia.inv_mod(d, q);
  const OElem bp = divide_exact(F, F.mul(a, d) - OElem{1, 0}, cprime);
  CosetRep g{F.to_field(a), F.div(F.to_field(bp), F.diff_gen()), F.mul(F.diff_gen(), F.to_field(cprime)),
             F.to_field(d)};
  if (!(F.mul(g.a, g.d) - F.mul(g.b, g.c) == FieldElem(1)))
    throw Error(ErrorCode::CompletionFailure, "determinant check failed");
  return g;
}

Matrix2 balanced_group_element(const FieldContext& F, const Point& z, long j, OElem beta) {
  const OElem cprime = F.tp_unit_pow_int(j);
  const FieldElem c = F.mul(F.diff_gen(), F.to_field(cprime));
  // d = x + y omega with sigma_i(d) closest to -sigma_i(c) Re z_i
  const double t0 = -F.embed(c, 0) * z[0].real(), t1 = -F.embed(c, 1) * z[1].real();
  const double w0 = F.embed(OElem{0, 1}, 0), w1 = F.embed(OElem{0, 1}, 1);
  const double yc = (t0 - t1) / (w0 - w1);
  const double xc = t0 - yc * w0;
  OElem best{0, 0};
  double best_score = HUGE_VAL;
  for (std::int64_t dy = -1; dy <= 1; ++dy)
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      const OElem d{static_cast<std::int64_t>(std::llround(xc)) + dx, static_cast<std::int64_t>(std::llround(yc)) + dy};
      double score = 1.0;
      for (int i = 0; i < 2; ++i) score *= std::norm(F.embed(c, i) * z[static_cast<std::size_t>(i)] + F.embed(d, i));
      if (score < best_score) {
        best_score = score;
        best = d;
      }
    }
  const CosetRep g = complete_coset(F, cprime, best);
  const FieldElem b = F.div(F.to_field(beta), F.diff_gen());
  return {g.a + F.mul(b, g.c), g.b + F.mul(b, g.d), g.c, g.d};
}

Complex unit_sum_exp(const FieldContext& F, OElem mu, const Point& w, double cutoff) {
  const double e1 = F.embed(F.tp_unit(), 0);
  const double m1 = F.embed(mu, 0), m2 = F.embed(mu, 1);
  const long j0 = unit_peak(F, m1, m2, w);
  auto log_mag = [&](long j) {
    return -kTwoPi * (m1 * std::pow(e1, static_cast<double>(j)) * w[0].imag() +
                      m2 * std::pow(e1, static_cast<double>(-j)) * w[1].imag());
  };
  const double log_peak = log_mag(j0);
  Complex sum(0.0, 0.0);
  for (int dir : {1, -1}) {
    for (long j = (dir > 0 ? j0 : j0 - 1);; j += dir) {
      if (std::abs(j - j0) >= 2 && log_mag(j) - log_peak < std::log(cutoff)) break;
      const double s1 = m1 * std::pow(e1, static_cast<double>(j));
      const double s2 = m2 * std::pow(e1, static_cast<double>(-j));
      sum += std::exp(Complex(0.0, kTwoPi) * (s1 * w[0] + s2 * w[1]));
      if (std::abs(j - j0) > 4000) throw Error(ErrorCode::NotConverged, "unit sum did not terminate");
    }
  }
  return sum;
}

SeedFn seed_constant(Complex c) {
  return [c](const EmbeddedMatrix&, const Point&, const Point&) { return c; };
}

SeedFn seed_qseries(const FieldContext& F, std::vector<std::pair<OElem, Complex>> terms, double cutoff) {
  return [&F, terms = std::move(terms), cutoff](const EmbeddedMatrix&, const Point&, const Point& gz) {
    Complex s(0.0, 0.0);
    for (const auto& [mu, c] : terms) s += c * unit_sum_exp(F, mu, gz, cutoff);
    return s;
  };
}

DirectResult poincare_eval_direct(const FieldContext& F, const SeedFn& seed, std::array<int, 2> k, const Point& z,
                                  const DirectCutoffs& cut, bool include_identity) {
  check_upper_half_plane(z);
  if (k[0] < 3 || k[1] < 3) throw Error(ErrorCode::BadWeight, "coset sum needs weight at least 3 in each component");
  DirectResult out;
  if (include_identity) {
    EmbeddedMatrix id;
    id.a = {1.0, 1.0};
    id.d = {1.0, 1.0};
    out.identity_term = seed(id, z, z);
    out.value += out.identity_term;
    ++out.cosets;
  }

  const double delta[2] = {F.embed(F.diff_gen(), 0), F.embed(F.diff_gen(), 1)};
  const double om[2] = {F.embed(OElem{0, 1}, 0), F.embed(OElem{0, 1}, 1)};
  const double dom = om[0] - om[1];
  const double x[2] = {z[0].real(), z[1].real()};
  const double y[2] = {z[0].imag(), z[1].imag()};
  const std::int64_t X = cut.cmax / F.disc();

  // Empirical truncation estimate: the moduli tail extrapolates the last two dyadic shells
  // geometrically, the box tail is the absolute mass of the outer quarter of each box.
  double shell_lo = 0.0, shell_hi = 0.0, ring = 0.0;

  for (const Modulus& m : moduli(F, X)) {
    const auto table = residue_table(F, m.cprime);
    EmbeddedMatrix g;
    double lo[2], hi[2], h[2];
    for (int i = 0; i < 2; ++i) {
      g.c[i] = delta[i] * F.embed(m.cprime, i);
      h[i] = std::abs(g.c[i]) * y[i];
      const double R = cut.d_box * (h[i] + 1.0);
      lo[i] = -g.c[i] * x[i] - R;
      hi[i] = -g.c[i] * x[i] + R;
    }
    const double ylo = dom > 0 ? (lo[0] - hi[1]) / dom : (hi[0] - lo[1]) / dom;
    const double yhi = dom > 0 ? (hi[0] - lo[1]) / dom : (lo[0] - hi[1]) / dom;
    for (std::int64_t yy = static_cast<std::int64_t>(std::ceil(ylo)); yy <= static_cast<std::int64_t>(std::floor(yhi));
         ++yy) {
      const double xlo = std::max(lo[0] - yy * om[0], lo[1] - yy * om[1]);
      const double xhi = std::min(hi[0] - yy * om[0], hi[1] - yy * om[1]);
      for (std::int64_t xx = static_cast<std::int64_t>(std::ceil(xlo)); xx <= static_cast<std::int64_t>(std::floor(xhi));
           ++xx) {
        const OElem d{xx, yy};
        const OElem r = IdealArith(F).reduce(d, table->q);
        auto it = table->index.find(r);
        if (it == table->index.end()) continue;
        const OElem a = table->inverses[it->second];
        const OElem bp = divide_exact(F, F.mul(a, d) - OElem{1, 0}, m.cprime);
        Point gz;
        Complex jac(1.0, 0.0);
        for (int i = 0; i < 2; ++i) {
          g.a[i] = F.embed(a, i);
          g.b[i] = F.embed(bp, i) / delta[i];
          g.d[i] = F.embed(d, i);
          const Complex cz = g.c[i] * z[i] + g.d[i];
          gz[i] = (g.a[i] * z[i] + g.b[i]) / cz;
          jac *= std::pow(cz, -k[i]);
        }
        const Complex term = jac * seed(g, z, gz);
        out.value += term;
        ++out.cosets;
        const double mag = std::abs(term);
        if (2 * m.norm > X) shell_hi += mag;
        else if (4 * m.norm > X) shell_lo += mag;
        double rho = 0.0;
        for (int i = 0; i < 2; ++i)
          rho = std::max(rho, std::abs(g.d[i] + g.c[i] * x[i]) / (cut.d_box * (h[i] + 1.0)));
        if (rho > 0.75) ring += mag;
      }
    }
  }
  const double r = shell_lo > 0 ? shell_hi / shell_lo : 1.0;
  out.estimate = (r < 1.0 ? shell_hi * r / (1.0 - r) : shell_hi) + ring;
  return out;
}

// ---------------------------------------------------------------- seed tools

GrowthReport seed_growth(const FieldContext& F, const std::map<FieldElem, Complex>& phi, int k, double eps) {
  GrowthReport out;
  out.exponent = 0.5 * k - 2.0 - eps;
  for (const auto& [nu, a] : phi) {
    if (nu.is_zero()) continue;
    if (!F.is_totally_positive(nu)) throw Error(ErrorCode::NotTotallyPositive, "seed support must be totally positive");
    const double r = std::abs(a) / std::pow(F.norm(nu).get_d(), out.exponent);
    if (r > out.max_ratio) {
      out.max_ratio = r;
      out.argmax = nu;
    }
  }
  return out;
}

QExpansion seed_lift(const FieldContext& F, const std::map<FieldElem, Complex>& phi, int k, std::int64_t T,
                     const TruncationPolicy& policy) {
  check_even_weight(k);
  QExpansion out = constant_qexp(F, k, Coeff::exact_value(FieldElem(0)), T);
  for (const auto& [mu, c] : phi) {
    if (c == Complex(0.0, 0.0)) continue;
    if (mu.is_zero()) {
      out = add(out, scale(eisenstein_qexp(F, k, IdealArith(F).unit(), T, EisensteinNorm::Coset, policy.prec),
                           Coeff::numeric(c)));
    } else {
      if (!F.is_totally_positive(mu)) throw Error(ErrorCode::NotTotallyPositive, "seed support must be totally positive");
      out = add(out, scale(poincare_qexp(F, F.to_int(mu), k, T, policy), Coeff::numeric(c)));
    }
  }
  return out;
}

namespace {

// (X^2 d)^l applied to X^k h, written as sum coef * c^cpow * X^p * h^{(r)}.
struct TransportTerm {
  double coef;
  int cpow;
  int p;
  int r;
};

std::vector<std::vector<TransportTerm>> transport_table(int k, int lmax) {
  std::vector<std::vector<TransportTerm>> out(static_cast<std::size_t>(lmax) + 1);
  out[0] = {{1.0, 0, k, 0}};
  for (int l = 1; l <= lmax; ++l) {
    std::map<std::tuple<int, int, int>, double> acc;
    for (const TransportTerm& t : out[static_cast<std::size_t>(l) - 1]) {
      acc[{t.cpow + 1, t.p + 1, t.r}] += t.coef * t.p;
      acc[{t.cpow, t.p + 2, t.r + 1}] += t.coef;
    }
    for (const auto& [key, coef] : acc)
      if (coef != 0.0) out[static_cast<std::size_t>(l)].push_back({coef, std::get<0>(key), std::get<1>(key), std::get<2>(key)});
  }
  return out;
}

const std::vector<TransportTerm>& transport_terms(int k, int l) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<TransportTerm>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({k, l});
  if (it == cache.end()) it = cache.emplace(std::make_pair(k, l), transport_table(k, l)[static_cast<std::size_t>(l)]).first;
  return it->second;
}

}  // namespace

DerivativeTransport::DerivativeTransport(int k, std::array<int, 2> lmax, std::vector<std::vector<Complex>> derivs_at_z)
    : k_(k), lmax_(lmax), d_(std::move(derivs_at_z)) {
  if (d_.size() < static_cast<std::size_t>(lmax[0]) + 1)
    throw Error(ErrorCode::DomainError, "derivative table too small");
  for (const auto& row : d_)
    if (row.size() < static_cast<std::size_t>(lmax[1]) + 1)
      throw Error(ErrorCode::DomainError, "derivative table too small");
}

Complex DerivativeTransport::at(const EmbeddedMatrix& g, const Point& z, std::array<int, 2> l) const {
  if (l[0] > lmax_[0] || l[1] > lmax_[1]) throw Error(ErrorCode::DomainError, "derivative order exceeds the table");
  std::vector<std::pair<Complex, int>> parts[2];
  for (int i = 0; i < 2; ++i) {
    const Complex X = g.c[i] * z[i] + g.d[i];
    for (const TransportTerm& t : transport_terms(k_, l[i]))
      parts[i].push_back({t.coef * std::pow(g.c[i], t.cpow) * std::pow(X, t.p), t.r});
  }
  Complex s(0.0, 0.0);
  for (const auto& [v1, r1] : parts[0])
    for (const auto& [v2, r2] : parts[1]) s += v1 * v2 * d_[static_cast<std::size_t>(r1)][static_cast<std::size_t>(r2)];
  return s;
}

SeedFn theorem41_seed(const QExpansion& f, OElem mu, int k2, std::array<int, 2> n, const Point& z) {
  const FieldContext& F = f.field();
  if (f.k1 != f.k2) throw Error(ErrorCode::BadWeight, "f must have parallel weight");
  if (n[0] < 0 || n[1] < 0) throw Error(ErrorCode::DomainError, "bracket index must be non-negative");
  const int k1 = f.k1;
  std::vector<std::vector<Complex>> table(static_cast<std::size_t>(n[0]) + 1,
                                          std::vector<Complex>(static_cast<std::size_t>(n[1]) + 1));
  for (int r1 = 0; r1 <= n[0]; ++r1)
    for (int r2 = 0; r2 <= n[1]; ++r2)
      table[static_cast<std::size_t>(r1)][static_cast<std::size_t>(r2)] = qexp_eval(f, z, {r1, r2}).value;

  struct Weight {
    std::array<int, 2> l;
    double w;
  };
  std::vector<Weight> weights;
  for (int l1 = 0; l1 <= n[0]; ++l1)
    for (int l2 = 0; l2 <= n[1]; ++l2) {
      double w = ((l1 + l2) % 2 == 0) ? 1.0 : -1.0;
      w *= binomial(k1 + n[0] - 1, n[0] - l1).get_d() * binomial(k1 + n[1] - 1, n[1] - l2).get_d();
      w *= binomial(k2 + n[0] - 1, l1).get_d() * binomial(k2 + n[1] - 1, l2).get_d();
      weights.push_back({{l1, l2}, w});
    }
  auto transport = std::make_shared<DerivativeTransport>(k1, n, std::move(table));
  const double e1 = F.embed(F.tp_unit(), 0);
  const double m1 = F.embed(mu, 0), m2 = F.embed(mu, 1);

  return [=, &F](const EmbeddedMatrix& g, const Point& zz, const Point& gz) {
    std::vector<Complex> fl(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) fl[i] = transport->at(g, zz, weights[i].l);
    Complex total(0.0, 0.0);
    const long j0 = unit_peak(F, m1, m2, gz);
    double peak = 0.0;
    for (int dir : {1, -1}) {
      double prev = HUGE_VAL;
      for (long j = (dir > 0 ? j0 : j0 - 1);; j += dir) {
        const double s1 = m1 * std::pow(e1, static_cast<double>(j));
        const double s2 = m2 * std::pow(e1, static_cast<double>(-j));
        const Complex ph = std::exp(Complex(0.0, kTwoPi) * (s1 * gz[0] + s2 * gz[1]));
        Complex inner(0.0, 0.0);
        for (std::size_t i = 0; i < weights.size(); ++i) {
          const int a1 = n[0] - weights[i].l[0], a2 = n[1] - weights[i].l[1];
          inner += weights[i].w * std::pow(Complex(0.0, kTwoPi * s1), a1) * std::pow(Complex(0.0, kTwoPi * s2), a2) * fl[i];
        }
        const Complex term = ph * inner;
        const double mag = std::abs(term);
        total += term;
        peak = std::max(peak, mag);
        if (std::abs(j - j0) >= 2 && mag < 1e-18 * peak && mag <= prev) break;
        prev = mag;
        if (std::abs(j) > 4000) throw Error(ErrorCode::NotConverged, "unit sum did not terminate");
      }
    }
    return total;
  };
}

Theorem41Report theorem41_verify(const QExpansion& f, bool f_cuspidal, OElem mu, int k2, std::array<int, 2> n,
                                 const Point& z, const TruncationPolicy& policy, const DirectCutoffs& cut,
                                 double rel_tol) {
  const FieldContext& F = f.field();
  check_even_weight(k2);
  if (f.k1 != f.k2) throw Error(ErrorCode::BadWeight, "f must have parallel weight");
  if (!f_cuspidal && k2 < f.k1 + 2)
    throw Error(ErrorCode::HypothesisViolated, "non-cuspidal f needs k2 >= k1 + 2 for absolute convergence");
  check_upper_half_plane(z);

  Theorem41Report out;
  const QExpansion P = poincare_qexp(F, mu, k2, f.trace_bound, policy, &out.poincare);
  const EvalResult lhs = qexp_eval(rankin_cohen(f, P, n), z);
  const std::array<int, 2> K = {f.k1 + k2 + 2 * n[0], f.k1 + k2 + 2 * n[1]};
  const DirectResult rhs = poincare_eval_direct(F, theorem41_seed(f, mu, k2, n, z), K, z, cut);
  out.lhs = lhs.value;
  out.rhs = rhs.value;
  out.lhs_tail = lhs.tail_bound;
  out.rhs_estimate = rhs.estimate;
  const double scale = std::max(std::abs(out.lhs), std::abs(out.rhs));
  out.defect = scale > 0 ? std::abs(out.lhs - out.rhs) / scale : 0.0;
  out.tolerance = rel_tol;
  out.pass = out.defect < rel_tol;
  return out;
}

}  // namespace hilbert
