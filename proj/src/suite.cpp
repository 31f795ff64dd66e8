#include "hilbert/suite.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "hilbert/error.hpp"

namespace hilbert {

namespace mp = boost::multiprecision;

namespace {

nlohmann::json cjson(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

KernelReport make_report(int id, Profile p) {
  KernelReport r;
  r.identity = "criterion_" + std::to_string(id);
  r.parameters = {{"criterion", id}, {"profile", profile_name(p)}};
  return r;
}

void finish(KernelReport& r, double defect, double tol) {
  r.defect = defect;
  r.tolerance = tol;
  r.pass = defect <= tol;
}

std::map<Ideal, Rational> random_prime_values(const FieldContext& F, std::int64_t X, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> d(-30, 30);
  std::map<Ideal, Rational> out;
  const IdealArith A(F);
  for (const Ideal& I : A.enumerate(X)) {
    const auto fac = A.factor(I);
    if (fac.size() == 1 && fac[0].second == 1) out[I] = d(rng);
  }
  return out;
}

ExactSeries random_series(const FieldContext& F, std::int64_t X, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> d(-9, 9);
  ExactSeries s(F, X);
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = Rational(d(rng), 1 + (d(rng) + 9) % 4);
    s[i].canonicalize();
  }
  return s;
}

QExpansion random_qexp(const FieldContext& F, int k, std::int64_t T, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> d(-6, 6);
  QExpansion f = constant_qexp(F, k, Coeff::exact_value(FieldElem(d(rng))), T);
  for (OElem nu : orbit_reps_meeting(F, T)) {
    const FieldElem c(Rational(d(rng), 1 + (d(rng) + 6) % 3), Rational(d(rng)));
    if (!c.is_zero()) f.coeffs[F.to_field(nu)] = Coeff::exact_value(c);
  }
  return f;
}

bool same_exact(const QExpansion& a, const QExpansion& b) {
  const FieldContext& F = a.field();
  if (!(a.const_term.e == b.const_term.e)) return false;
  for (OElem nu : orbit_reps_meeting(F, std::min(a.trace_bound, b.trace_bound))) {
    const Coeff x = a.at(nu), y = b.at(nu);
    if (!x.exact || !y.exact || !(x.e == y.e)) return false;
  }
  return true;
}

// ---------------------------------------------------------------- criteria

KernelReport criterion1(Profile p, std::uint64_t seed) {
  KernelReport r = make_report(1, p);
  const FieldContext& F = make_field(5);
  const std::int64_t X = p == Profile::Full ? 300 : 100;
  const long m = 10, l = 4;
  std::mt19937_64 rng(seed);
  std::vector<std::pair<std::string, ExactSeries>> series;
  series.emplace_back("sigma_9", sigma_series(F, m - 1, X));
  for (int i = 0; i < 3; ++i) series.emplace_back("hecke_random_" + std::to_string(i),
                                                  hecke_extend(F, random_prime_values(F, X, rng), m, X));
  int failed = 0;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [name, f] : series) {
    const Thm45Report t = verify_thm45_identity(f, l, m);
    failed += t.pass ? 0 : 1;
    rows.push_back({{"series", name}, {"checked", t.checked}, {"pass", t.pass}});
  }
  r.parameters.update({{"m", 5}, {"weight", m}, {"l", l}, {"max_norm", X}});
  r.details = {{"series", rows}};
  finish(r, failed, 0.0);
  return r;
}

KernelReport criterion2(Profile p, std::uint64_t seed) {
  KernelReport r = make_report(2, p);
  const FieldContext& F = make_field(5);
  const IdealArith A(F);
  const long k = 10;
  const std::int64_t small_bound = p == Profile::Full ? 9 : 5;
  const std::int64_t rel_bound = p == Profile::Full ? 100 * 100 : 100;
  std::mt19937_64 rng(seed);
  const ExactSeries f = random_series(F, 81 * 12, rng);
  int failed = 0, compared = 0;
  const auto small = A.enumerate(small_bound);
  for (const Ideal& a : small)
    for (const Ideal& b : small) {
      if (!A.gcd(a, b).is_unit()) continue;
      const ExactSeries ab = hecke_apply(a, hecke_apply(b, f, k), k);
      const ExactSeries direct = hecke_apply(A.mul(a, b), f, k);
      for (std::size_t i = 0; i < ab.size() && i < direct.size(); ++i) {
        ++compared;
        if (ab[i] != direct[i]) ++failed;
      }
    }
  const auto rel = hecke_relation_failure(sigma_series(F, k - 1, rel_bound), k, rel_bound);
  if (rel) ++failed;
  r.parameters.update({{"m", 5}, {"weight", k}, {"operator_norm_bound", small_bound}, {"relation_norm_product_bound", rel_bound}});
  r.details = {{"coefficients_compared", compared}, {"product_relation_holds", !rel.has_value()}};
  finish(r, failed, 0.0);
  return r;
}

KernelReport criterion3(Profile p, std::uint64_t) {
  KernelReport r = make_report(3, p);
  const FieldContext& F = make_field(5);
  const std::int64_t X = p == Profile::Full ? 50 : 20;
  const std::vector<std::pair<Rational, Rational>> pairs = {
      {Rational(-3), Rational(-4)}, {Rational(-2), Rational(-7, 2)}, {Rational(-5, 2), Rational(-5, 2)}};
  int failed = 0, checked = 0;
  for (const auto& [s, t] : pairs)
    for (const Ideal& target : IdealArith(F).enumerate(X)) {
      ++checked;
      if (!verify_prop53_rearrangement(F, s, t, 8, target, X).pass) ++failed;
    }
  r.parameters.update({{"m", 5}, {"k", 8}, {"target_norm_bound", X}, {"a_norm_bound", X}});
  r.details = {{"reports", checked}, {"failed", failed}};
  finish(r, failed, 0.0);
  return r;
}

KernelReport criterion4(Profile p, std::uint64_t) {
  KernelReport r = make_report(4, p);
  PrecisionScope scope(192);
  const FieldContext& F = make_field(5);
  const std::int64_t x = p == Profile::Full ? 20000 : 5000;
  const Real z2 = zeta_F_numeric(F, Real(2), 192);
  const Real closed = 2 * mp::pow(real_pi(), 4) / (75 * mp::sqrt(Real(5)));
  const NumericValue e = zeta_F_euler(F, Real(2), x);
  const NumericValue d = zeta_F_direct(F, Real(2), x);
  const bool routes = mp::abs(e.value - z2) <= e.tail_bound && mp::abs(d.value - z2) <= d.tail_bound &&
                      mp::abs(e.value - d.value) <= e.tail_bound + d.tail_bound;
  const double defect = to_double(mp::abs(z2 - closed));
  r.parameters.update({{"m", 5}, {"s", 2}, {"route_cutoff", x}});
  r.lhs = z2.str(30);
  r.rhs = closed.str(30);
  r.details = {{"euler", e.value.str(20)},   {"euler_bound", to_double(e.tail_bound)},
               {"direct", d.value.str(20)},  {"direct_bound", to_double(d.tail_bound)},
               {"routes_agree", routes}};
  finish(r, routes ? defect : HUGE_VAL, 1e-10);
  return r;
}

KernelReport criterion5(Profile p, std::uint64_t seed) {
  KernelReport r = make_report(5, p);
  const FieldContext& F = make_field(5);
  const std::int64_t T = 60;
  const QExpansion E6 = eisenstein_qexp(F, 6, IdealArith(F).unit(), T, EisensteinNorm::Coset);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(-3, 3), jd(-1, 1);
  const std::vector<Point> points = {{Complex(0.1, 1.1), Complex(-0.3, 1.3)}, {Complex(0.1, 1.2), Complex(-0.2, 0.9)}};
  double worst = 0.0;
  nlohmann::json rows = nlohmann::json::array();
  for (const Point& z : points)
    for (int s = 0; s < 3; ++s) {
      const Matrix2 g = balanced_group_element(F, z, jd(rng), OElem{d(rng), d(rng)});
      if (g.c.is_zero()) throw Error(ErrorCode::DomainError, "group element with c = 0");
      const DefectResult dr = modularity_defect(E6, g, z);
      worst = std::max(worst, dr.defect);
      rows.push_back({{"a", format_elem(g.a)}, {"b", format_elem(g.b)}, {"c", format_elem(g.c)},
                      {"d", format_elem(g.d)}, {"defect", dr.defect}, {"tail", dr.tail}});
    }
  r.parameters.update({{"m", 5}, {"k", 6}, {"trace_bound", T}});
  r.details = {{"elements", rows}};
  finish(r, worst, 1e-6);
  return r;
}

KernelReport criterion6(Profile p, std::uint64_t) {
  KernelReport r = make_report(6, p);
  const FieldContext& F = make_field(5);
  const Point z{Complex(0.0, 1.1), Complex(0.0, 0.9)};
  const std::int64_t T = p == Profile::Full ? 12 : 8;
  DirectCutoffs cut;
  cut.cmax = p == Profile::Full ? 200 : 100;
  ConvergenceReport conv;
  const QExpansion P = poincare_qexp(F, OElem{1, 0}, 8, T, TruncationPolicy{}, &conv);
  const EvalResult q = qexp_eval(P, z);
  const DirectResult dr = poincare_eval_direct(F, seed_qseries(F, {{OElem{1, 0}, 1.0}}), {8, 8}, z, cut);
  const Complex ratio = dr.value / q.value;
  r.parameters.update({{"m", 5}, {"k", 8}, {"mu", "1"}, {"trace_bound", T}, {"direct_cmax", cut.cmax}});
  r.lhs = cjson(q.value);
  r.rhs = cjson(dr.value);
  r.details = {{"twist_ratio", cjson(ratio)},
               {"twist_detected", std::abs(ratio - 1.0) > 1e-3},
               {"coefficients_converged", conv.converged},
               {"qexp_tail", q.tail_bound},
               {"direct_estimate", dr.estimate}};
  finish(r, std::abs(q.value - dr.value) / std::max(std::abs(q.value), std::abs(dr.value)), 1e-3);
  return r;
}

KernelReport criterion7(Profile p, std::uint64_t) {
  KernelReport r = make_report(7, p);
  const FieldContext& F = make_field(5);
  const Point z{Complex(0.0, 1.2), Complex(0.0, 0.8)};
  const std::int64_t T_fine = p == Profile::Full ? 12 : 8, T_coarse = 6;
  DirectCutoffs fine, coarse;
  fine.cmax = p == Profile::Full ? 200 : 100;
  coarse.cmax = fine.cmax / 2;
  const IdealArith A(F);
  const QExpansion Ef = eisenstein_qexp(F, 4, A.unit(), T_fine, EisensteinNorm::Normalized);
  const QExpansion Ec = eisenstein_qexp(F, 4, A.unit(), T_coarse, EisensteinNorm::Normalized);
  const Theorem41Report a = theorem41_verify(Ef, false, OElem{1, 0}, 8, {1, 1}, z, TruncationPolicy{}, fine, 1e-2);
  const Theorem41Report b = theorem41_verify(Ec, false, OElem{1, 0}, 8, {1, 1}, z, TruncationPolicy{}, coarse, 1e-2);
  const bool decreasing = a.defect < b.defect;
  r.parameters.update({{"m", 5}, {"k1", 4}, {"k2", 8}, {"mu", "1"}, {"n", {1, 1}}});
  r.lhs = cjson(a.lhs);
  r.rhs = cjson(a.rhs);
  r.details = {{"fine", {{"trace_bound", T_fine}, {"direct_cmax", fine.cmax}, {"defect", a.defect}}},
               {"coarse", {{"trace_bound", T_coarse}, {"direct_cmax", coarse.cmax}, {"defect", b.defect}}},
               {"decreasing", decreasing}};
  finish(r, decreasing ? a.defect : HUGE_VAL, 1e-2);
  return r;
}

KernelReport criterion8(Profile p, std::uint64_t) {
  KernelReport r = make_report(8, p);
  const FieldContext& F = make_field(5);
  KernelSettings S;
  S.cut.cmax = p == Profile::Full ? 200 : 100;
  const Point z{Complex(0.0, 1.2), Complex(0.0, 1.0)};
  const KernelReport cor = verify_cor43(F, 6, 4, {1, 1}, z, S);
  const KernelReport ledger = thm54_constant_ledger(F, 6, 4, 1);
  r.parameters.update({{"m", 5}, {"k", 6}, {"l", 4}, {"n", {1, 1}}});
  r.settings = settings_to_json(S);
  r.components = {cor, ledger};
  r.lhs = cor.lhs;
  r.rhs = cor.rhs;
  finish(r, ledger.pass ? cor.defect : HUGE_VAL, S.tol);
  return r;
}

KernelReport criterion9(Profile p, std::uint64_t) {
  const FieldContext& F = make_field(5);
  const std::int64_t M = p == Profile::Full ? 30 : 15;
  KernelReport r = lemma51_bound_report(F, 8, {Complex(0.0, 1.1), Complex(0.0, 0.9)}, M, DirectCutoffs{});
  r.identity = "criterion_9";
  r.parameters.update({{"criterion", 9}, {"profile", profile_name(p)}});
  return r;
}

KernelReport criterion10(Profile p, std::uint64_t seed) {
  KernelReport r = make_report(10, p);
  const bool full = p == Profile::Full;
  std::mt19937_64 rng(seed);
  nlohmann::json parts;
  int total_failed = 0;

  {  // brackets
    int failed = 0;
    const FieldContext& F = make_field(5);
    const std::int64_t T = full ? 12 : 8;
    const QExpansion f = random_qexp(F, 4, T, rng), f2 = random_qexp(F, 4, T, rng), g = random_qexp(F, 6, T, rng);
    const QExpansion h = rankin_cohen(f, g, {0, 0});
    for (OElem nu : F.enumerate_tp_points(T)) {
      FieldElem s = F.mul(f.const_term.e, g.at(nu).e) + F.mul(f.at(nu).e, g.const_term.e);
      for (OElem a : F.enumerate_tp_points(F.trace(nu))) {
        const OElem b = nu - a;
        if (F.is_totally_positive(b)) s = s + F.mul(f.at(a).e, g.at(b).e);
      }
      if (!(h.at(nu).e == s)) ++failed;
    }
    const Coeff alpha = Coeff::exact_value(FieldElem(Rational(2, 3), Rational(1)));
    for (std::array<int, 2> n : {std::array<int, 2>{1, 0}, {1, 1}, {2, 1}}) {
      const QExpansion fg = rankin_cohen(f, g, n), gf = rankin_cohen(g, f, n);
      const long sgn = (n[0] + n[1]) % 2 == 0 ? 1 : -1;
      if (!same_exact(fg, scale(gf, Coeff::exact_value(FieldElem(sgn))))) ++failed;
      if (!same_exact(rankin_cohen(add(scale(f, alpha), f2), g, n), add(scale(fg, alpha), rankin_cohen(f2, g, n))))
        ++failed;
    }
    parts["brackets"] = {{"trace_bound", T}, {"failed", failed}};
    total_failed += failed;
  }
  {  // sigma bound
    int failed = 0;
    const std::int64_t X = full ? 500 : 200;
    for (int m : supported_radicands()) {
      const FieldContext& F = make_field(m);
      const IdealArith A(F);
      for (const Ideal& I : A.enumerate(X)) {
        const Rational N(I.norm());
        for (long e = -3; e <= 0; ++e) failed += A.sigma(I, e) <= N ? 0 : 1;
        for (long e = 1; e <= 3; ++e) failed += A.sigma(I, e) <= rational_pow(N, e + 1) ? 0 : 1;
      }
    }
    parts["sigma_bound"] = {{"max_norm", X}, {"failed", failed}};
    total_failed += failed;
  }
  {  // Kloosterman
    int failed = 0, sampled = 0;
    const int want = full ? 100 : 50;
    const FieldContext& F = make_field(5);
    const FieldElem delta = F.diff_gen();
    std::uniform_int_distribution<int> d(1, 9);
    while (sampled < want) {
      const OElem nu{d(rng), d(rng) % 3}, mu{d(rng), d(rng) % 3}, cp{d(rng), d(rng) % 4};
      if (!F.is_totally_positive(nu) || !F.is_totally_positive(mu) || F.norm(cp) == 0) continue;
      ++sampled;
      const FieldElem c = F.mul(delta, F.to_field(cp));
      const KloostermanValue a = kloosterman_sum(F, nu, mu, c), b = kloosterman_sum(F, mu, nu, c);
      const double n = static_cast<double>(a.terms);
      if (std::abs(a.re - b.re) > 1e-9 * std::max(1.0, std::abs(a.re))) ++failed;
      if (std::abs(a.im) > 1e-9 * n) ++failed;
      if (std::abs(a.re) > n + 1e-9) ++failed;
    }
    parts["kloosterman"] = {{"samples", sampled}, {"failed", failed}};
    total_failed += failed;
  }
  {  // Bessel recurrence
    const long prec = 192;
    PrecisionScope scope(prec);
    int failed = 0;
    const int want = full ? 100 : 50;
    std::uniform_int_distribution<int> kd(1, 20);
    std::uniform_real_distribution<double> xd(0.5, 60.0);
    for (int s = 0; s < want; ++s) {
      const int k = kd(rng);
      const Real x(xd(rng));
      const Real lhs = bessel_J(k - 1, x, prec) + bessel_J(k + 1, x, prec);
      const Real rhs = 2 * k / x * bessel_J(k, x, prec);
      if (mp::abs(lhs - rhs) > mp::pow(Real(2), -prec + 4) * std::max(1.0, 2.0 * k / to_double(x))) ++failed;
    }
    parts["bessel"] = {{"samples", want}, {"prec", prec}, {"failed", failed}};
    total_failed += failed;
  }
  r.details = parts;
  finish(r, total_failed, 0.0);
  return r;
}

}  // namespace

Profile parse_profile(const std::string& name) {
  if (name == "quick") return Profile::Quick;
  if (name == "full") return Profile::Full;
  throw Error(ErrorCode::Usage, "profile must be quick or full");
}

const char* profile_name(Profile p) { return p == Profile::Full ? "full" : "quick"; }

const std::vector<CriterionInfo>& criteria() {
  static const std::vector<CriterionInfo> list = {
      {1, "Zagier kernel convolution identity"},
      {2, "Hecke algebra relations"},
      {3, "double Eisenstein rearrangement"},
      {4, "zeta_F(2) closed form and routes"},
      {5, "Eisenstein modularity"},
      {6, "Poincare two-route calibration"},
      {7, "bracket with a Poincare series"},
      {8, "Eisenstein bracket and constant ledger"},
      {9, "Poincare growth report"},
      {10, "property suites"},
  };
  return list;
}

KernelReport run_criterion(int id, Profile profile, std::uint64_t seed) {
  switch (id) {
    case 1: return criterion1(profile, seed);
    case 2: return criterion2(profile, seed);
    case 3: return criterion3(profile, seed);
    case 4: return criterion4(profile, seed);
    case 5: return criterion5(profile, seed);
    case 6: return criterion6(profile, seed);
    case 7: return criterion7(profile, seed);
    case 8: return criterion8(profile, seed);
    case 9: return criterion9(profile, seed);
    case 10: return criterion10(profile, seed);
    default: throw Error(ErrorCode::Usage, "criterion id must be 1..10");
  }
}

nlohmann::json run_verify_all(Profile profile, std::uint64_t seed, bool timings) {
  nlohmann::json out;
  out["profile"] = profile_name(profile);
  out["seed"] = seed;
  out["criteria"] = nlohmann::json::array();
  bool all = true;
  for (const CriterionInfo& c : criteria()) {
    const auto t0 = std::chrono::steady_clock::now();
    nlohmann::json row = {{"id", c.id}, {"name", c.name}};
    try {
      const KernelReport r = run_criterion(c.id, profile, seed);
      row["pass"] = r.pass;
      row["report"] = report_to_json(r);
    } catch (const Error& e) {
      row["pass"] = false;
      row["error"] = e.what();
    }
    if (timings)
      row["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    all = all && row["pass"].get<bool>();
    out["criteria"].push_back(row);
  }
  out["pass"] = all;
  return out;
}

}  // namespace hilbert
