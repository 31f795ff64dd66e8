#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <random>

#include "cli_support.hpp"
#include "hilbert/error.hpp"
#include "hilbert/kernels.hpp"
#include "hilbert/suite.hpp"

using namespace hilbert;
using namespace hilbert::cli;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;

void usage_error(const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}, {"exit", kExitUsage}}.dump() << "\n";
}

json ideal_json(const IdealArith& A, const Ideal& I) {
  json j = ideal_to_json(I);
  j["generator"] = format_elem(A.field().to_field(A.tp_generator(I)));
  return j;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

Table qexp_table(const QExpansion& f) {
  Table t{{"nu", "trace", "coeff"}, {}};
  t.rows.push_back({"0", "0", coeff_to_json(f.const_term).dump()});
  const FieldContext& F = f.field();
  for (const auto& [nu, c] : f.coeffs) {
    const json cj = coeff_to_json(c);
    t.rows.push_back({format_elem(nu), F.trace(nu).get_str(), cj.is_string() ? cj.get<std::string>() : cj.dump()});
  }
  return t;
}

Table report_table(const KernelReport& r) {
  Table t{{"identity", "defect", "tolerance", "pass"}, {}};
  t.rows.push_back({r.identity, num(r.defect), num(r.tolerance), r.pass ? "true" : "false"});
  for (const KernelReport& c : r.components)
    t.rows.push_back({c.identity, num(c.defect), num(c.tolerance), c.pass ? "true" : "false"});
  return t;
}

Result from_report(const KernelReport& r) { return {report_to_json(r), report_table(r), r.pass}; }

EisensteinNorm parse_norm(const std::string& s) {
  if (s == "normalized") return EisensteinNorm::Normalized;
  if (s == "classical") return EisensteinNorm::Classical;
  if (s == "coset") return EisensteinNorm::Coset;
  throw Error(ErrorCode::Usage, "normalization must be normalized, classical or coset");
}

// ---------------------------------------------------------------- field, ideals, series

Result field_info(const RunConfig& cfg) {
  const FieldContext& F = make_field(cfg.m);
  const FieldElem w = F.omega();
  json doc = {{"m", F.radicand()},
              {"D", F.disc()},
              {"omega", format_elem(w)},
              {"omega_min_poly", {{"trace", F.omega_trace()}, {"norm", F.omega_norm()}}},
              {"omega_embeddings", {F.embed(w, 0), F.embed(w, 1)}},
              {"eps0", format_elem(F.fund_unit())},
              {"eps0_norm", F.norm(F.fund_unit()).get_str()},
              {"eps_plus", format_elem(F.tp_unit())},
              {"delta", format_elem(F.diff_gen())},
              {"delta_norm", F.norm(F.diff_gen()).get_str()},
              {"narrow_class_number", 1}};
  return {doc, {}, true};
}

Result ideals_list(const RunConfig& cfg, bool with_factor) {
  const FieldContext& F = make_field(cfg.m);
  const IdealArith A(F);
  json rows = json::array();
  Table t{{"g", "a", "b", "norm", "generator"}, {}};
  if (with_factor) t.columns.push_back("factorization");
  for (const Ideal& I : A.enumerate(cfg.max_norm)) {
    json j = ideal_json(A, I);
    std::vector<std::string> row = {std::to_string(I.g), std::to_string(I.a), std::to_string(I.b),
                                    std::to_string(I.norm()), j["generator"].get<std::string>()};
    if (with_factor) {
      json fac = json::array();
      std::string s;
      for (const auto& [P, e] : A.factor(I)) {
        fac.push_back({{"prime", ideal_to_json(P.ideal)}, {"p", P.p}, {"kind", prime_kind_name(P.kind)}, {"exp", e}});
        s += (s.empty() ? "" : " ") + std::to_string(P.ideal.g) + ":" + std::to_string(P.ideal.a) + ":" +
             std::to_string(P.ideal.b) + "^" + std::to_string(e);
      }
      j["factorization"] = fac;
      row.push_back(s);
    }
    rows.push_back(j);
    t.rows.push_back(row);
  }
  return {{{"m", cfg.m}, {"max_norm", cfg.max_norm}, {"count", rows.size()}, {"ideals", rows}}, t, true};
}

Result eisenstein(const RunConfig& cfg, int k, const std::string& norm) {
  PrecisionScope scope(cfg.prec);
  const FieldContext& F = make_field(cfg.m);
  const QExpansion E = eisenstein_qexp(F, k, IdealArith(F).unit(), cfg.trace_bound, parse_norm(norm), cfg.prec);
  json doc = qexp_to_json(E);
  doc["normalization"] = norm;
  return {doc, qexp_table(E), true};
}

Result poincare_coeffs(const RunConfig& cfg, int k, const std::string& mu) {
  PrecisionScope scope(cfg.prec);
  const FieldContext& F = make_field(cfg.m);
  ConvergenceReport conv;
  const QExpansion P = poincare_qexp(F, parse_oelem(F, mu), k, cfg.trace_bound, policy_of(cfg), &conv);
  json doc = qexp_to_json(P);
  doc["mu"] = mu;
  doc["convergence"] = {{"cmax_used", conv.cmax_used},   {"eps_window_used", conv.eps_window_used},
                        {"last_increment", conv.last_increment}, {"escalations", conv.escalations},
                        {"converged", conv.converged}, {"c_terms", conv.c_terms}};
  return {doc, qexp_table(P), conv.converged};
}

Result poincare_eval(const RunConfig& cfg, int k, const std::string& mu, const std::string& zs, bool direct) {
  PrecisionScope scope(cfg.prec);
  const FieldContext& F = make_field(cfg.m);
  const OElem m = parse_oelem(F, mu);
  const Point z = parse_point(zs);
  ConvergenceReport conv;
  const QExpansion P = poincare_qexp(F, m, k, cfg.trace_bound, policy_of(cfg), &conv);
  const EvalResult q = qexp_eval(P, z);
  json doc = {{"mu", mu}, {"k", k}, {"z", {complex_json(z[0]), complex_json(z[1])}},
              {"qexp_value", complex_json(q.value)}, {"qexp_tail", q.tail_bound}, {"converged", conv.converged}};
  Table t{{"route", "re", "im", "error_estimate"}, {{"qexp", num(q.value.real()), num(q.value.imag()), num(q.tail_bound)}}};
  if (direct) {
    DirectCutoffs cut;
    cut.cmax = std::max<std::int64_t>(cfg.cmax, 1);
    const DirectResult d = poincare_eval_direct(F, seed_qseries(F, {{m, 1.0}}), {k, k}, z, cut);
    doc["direct_value"] = complex_json(d.value);
    doc["direct_estimate"] = d.estimate;
    doc["direct_cosets"] = d.cosets;
    doc["relative_difference"] = std::abs(d.value - q.value) / std::max(std::abs(d.value), std::abs(q.value));
    t.rows.push_back({"direct", num(d.value.real()), num(d.value.imag()), num(d.estimate)});
  }
  return {doc, t, conv.converged};
}

Result bracket(const RunConfig& cfg, int k, int l, const std::string& n) {
  PrecisionScope scope(cfg.prec);
  const FieldContext& F = make_field(cfg.m);
  const Ideal O = IdealArith(F).unit();
  const QExpansion f = eisenstein_qexp(F, k, O, cfg.trace_bound, EisensteinNorm::Normalized, cfg.prec);
  const QExpansion g = eisenstein_qexp(F, l, O, cfg.trace_bound, EisensteinNorm::Normalized, cfg.prec);
  const QExpansion h = rankin_cohen(f, g, parse_pair(n));
  json doc = qexp_to_json(h);
  doc["bracket"] = {{"f", "E_" + std::to_string(k)}, {"g", "E_" + std::to_string(l)}, {"n", parse_pair(n)}};
  return {doc, qexp_table(h), true};
}

ExactSeries named_series(const RunConfig& cfg, const std::string& name, long r, std::int64_t max_norm) {
  const FieldContext& F = make_field(cfg.m);
  if (name == "sigma") return sigma_series(F, r, max_norm);
  if (name == "zeta") return one_series(F, max_norm);
  if (name == "unit") return unit_series(F, max_norm);
  if (name == "random") {
    std::mt19937_64 rng(cfg.rng_seed);
    std::uniform_int_distribution<long> d(-30, 30);
    const IdealArith A(F);
    std::map<Ideal, Rational> primes;
    for (const Ideal& I : A.enumerate(max_norm)) {
      const auto fac = A.factor(I);
      if (fac.size() == 1 && fac[0].second == 1) primes[I] = d(rng);
    }
    return hecke_extend(F, primes, r + 1, max_norm);
  }
  throw Error(ErrorCode::Usage, "series must be sigma, zeta, unit or random");
}

Table series_table(const ExactSeries& s) {
  Table t{{"g", "a", "b", "norm", "coeff"}, {}};
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Ideal& I = s.ideals()[i];
    t.rows.push_back({std::to_string(I.g), std::to_string(I.a), std::to_string(I.b), std::to_string(I.norm()),
                      s[i].get_str()});
  }
  return t;
}

Result hecke(const RunConfig& cfg, const std::string& ideal, long weight, const std::string& series) {
  const FieldContext& F = make_field(cfg.m);
  const Ideal m = parse_ideal(F, ideal);
  const ExactSeries f = named_series(cfg, series, weight - 1, cfg.max_norm * m.norm() * m.norm());
  ExactSeries out = hecke_apply(m, f, weight).truncate(cfg.max_norm);
  json doc = series_to_json(out);
  doc["operator"] = {{"ideal", ideal_to_json(m)}, {"weight", weight}, {"input", series}};
  return {doc, series_table(out), true};
}

Result lseries_value(const RunConfig& cfg, const std::string& series, long r, double s) {
  PrecisionScope scope(cfg.prec);
  if (series == "random") throw Error(ErrorCode::Usage, "lseries value takes sigma, zeta or unit");
  const ExactSeries f = named_series(cfg, series, r, cfg.max_norm);
  Real growth(0);
  if (series == "sigma") growth = r > 0 ? Real(r + 1) : Real(1);
  const NumericValue v = L_numeric(f, Real(s), growth);
  json doc = {{"series", series}, {"r", r}, {"s", s}, {"max_norm", cfg.max_norm}, {"growth", to_double(growth)},
              {"value", v.value.str(30)}, {"tail_bound", to_double(v.tail_bound)}};
  return {doc, {}, true};
}

Result kernel(const RunConfig& cfg, bool dbl, double s, double w, int k, std::int64_t M) {
  PrecisionScope scope(cfg.prec);
  const FieldContext& F = make_field(cfg.m);
  const KernelExpansion e = dbl ? double_eisenstein_qexp(F, s, w, k, cfg.trace_bound, M, policy_of(cfg))
                                : cohen_kernel_qexp(F, s, k, cfg.trace_bound, M, policy_of(cfg));
  json doc = qexp_to_json(e.series);
  doc["kernel"] = {{"type", dbl ? "double_eisenstein" : "cohen"}, {"s", s}, {"k", k}, {"M", M},
                   {"tail_estimate", e.tail_estimate}, {"empirical_C", e.empirical_C}, {"terms", e.terms}};
  if (dbl) doc["kernel"]["w"] = w;
  return {doc, qexp_table(e.series), true};
}


// ---------------------------------------------------------------- verifications

Rational parse_rational(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0) throw Error(ErrorCode::Usage, "not a rational: '" + s + "'");
  q.canonicalize();
  return q;
}

Result verify_thm45(const RunConfig& cfg, long weight, long l, const std::string& series) {
  const ExactSeries f = named_series(cfg, series, weight - 1, cfg.max_norm);
  const Thm45Report r = verify_thm45_identity(f, l, weight);
  json doc = {{"identity", "thm45_convolution"}, {"m", cfg.m}, {"weight", weight}, {"l", l},
              {"series", series}, {"max_norm", cfg.max_norm}, {"checked", r.checked}, {"pass", r.pass}};
  if (r.first_failure)
    doc["first_failure"] = {{"ideal", ideal_to_json(*r.first_failure)},
                            {"lhs", r.lhs_at_failure.get_str()}, {"rhs", r.rhs_at_failure.get_str()}};
  return {doc, {}, r.pass};
}

Result verify_prop53(const RunConfig& cfg, const std::string& s, const std::string& t, int k, std::int64_t targets,
                     std::int64_t a_bound) {
  const FieldContext& F = make_field(cfg.m);
  const Rational S = parse_rational(s), T = parse_rational(t);
  Table tab{{"g", "a", "b", "norm", "defect", "pass"}, {}};
  std::size_t failed = 0, checked = 0;
  json fails = json::array();
  for (const Ideal& target : IdealArith(F).enumerate(targets)) {
    const KernelReport r = verify_prop53_rearrangement(F, S, T, k, target, a_bound);
    ++checked;
    if (!r.pass) {
      ++failed;
      fails.push_back(report_to_json(r));
    }
    tab.rows.push_back({std::to_string(target.g), std::to_string(target.a), std::to_string(target.b),
                        std::to_string(target.norm()), num(r.defect), r.pass ? "true" : "false"});
  }
  json doc = {{"identity", "prop53_rearrangement"}, {"m", cfg.m}, {"s", S.get_str()}, {"t", T.get_str()},
              {"k", k}, {"target_norm_bound", targets}, {"a_norm_bound", a_bound}, {"checked", checked},
              {"failed", failed}, {"failures", fails}, {"pass", failed == 0}};
  return {doc, tab, failed == 0};
}

Result verify_modularity(const RunConfig& cfg, int k, std::int64_t T, int elements, const std::vector<std::string>& zs) {
  PrecisionScope scope(cfg.prec);
  const FieldContext& F = make_field(cfg.m);
  const QExpansion E = eisenstein_qexp(F, k, IdealArith(F).unit(), T, EisensteinNorm::Coset, cfg.prec);
  std::mt19937_64 rng(cfg.rng_seed);
  std::uniform_int_distribution<int> d(-3, 3), jd(-1, 1);
  json rows = json::array();
  Table tab{{"point", "c", "d", "defect", "tail"}, {}};
  double worst = 0.0;
  for (const std::string& zt : zs) {
    const Point z = parse_point(zt);
    for (int i = 0; i < elements; ++i) {
      const Matrix2 g = balanced_group_element(F, z, jd(rng), OElem{d(rng), d(rng)});
      const DefectResult r = modularity_defect(E, g, z);
      worst = std::max(worst, r.defect);
      rows.push_back({{"z", zt}, {"c", format_elem(g.c)}, {"d", format_elem(g.d)}, {"defect", r.defect},
                      {"tail", r.tail}});
      tab.rows.push_back({zt, format_elem(g.c), format_elem(g.d), num(r.defect), num(r.tail)});
    }
  }
  const double tol = 1e-6;
  json doc = {{"identity", "eisenstein_modularity"}, {"m", cfg.m}, {"k", k}, {"trace_bound", T},
              {"elements", rows}, {"defect", worst}, {"tolerance", tol}, {"pass", worst <= tol}};
  return {doc, tab, worst <= tol};
}

Result verify_all(const RunConfig& cfg, const std::string& profile, bool timings) {
  const json bundle = run_verify_all(parse_profile(profile), cfg.rng_seed, timings);
  Table tab{{"id", "name", "pass", "defect", "tolerance"}, {}};
  for (const json& c : bundle["criteria"]) {
    const bool has = c.contains("report") && c["report"]["defect"].is_number();
    tab.rows.push_back({std::to_string(c["id"].get<int>()), c["name"].get<std::string>(),
                        c["pass"].get<bool>() ? "true" : "false", has ? num(c["report"]["defect"].get<double>()) : "",
                        has ? num(c["report"]["tolerance"].get<double>()) : ""});
  }
  return {bundle, tab, bundle["pass"].get<bool>()};
}

struct Options {
  RunConfig cfg;
  bool trace_bound_set = false;
  int k = 0, l = 0, weight = 10, n_scalar = 1, elements = 3;
  long r = 0;
  double s = 2.0, w = -2.0;
  std::int64_t M = 10, targets = 50, a_bound = 50, direct_cmax = 200;
  std::string mu = "1,0", z, n = "1,1", ideal, series = "sigma", norm = "normalized", profile = "quick";
  std::string s_str, t_str;
  std::vector<std::string> points;
  struct {
    int k = 6, l = 4;
    std::string z = "0,1.2;0,1.0";
  } c43, t54;
  struct {
    int k = 4, k2 = 8;
    std::string z = "0,1.2;0,0.8";
  } t41;
  struct {
    int k = 8;
    std::int64_t M = 30;
    std::string z = "0,1.1;0,0.9";
  } l51;
  int mod_k = 6, p53_k = 8;
  bool factor = false, direct = false, timings = false;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--m", o.cfg.m, "radicand: 2, 5, 13 or 17")->capture_default_str();
  sub->add_option("--prec", o.cfg.prec, "working precision in bits")->capture_default_str();
  sub->add_option_function<std::int64_t>(
         "--T,--trace-bound", [&o](std::int64_t v) { o.cfg.trace_bound = v, o.trace_bound_set = true; },
         "q-expansion trace bound")
      ->default_str(std::to_string(o.cfg.trace_bound));
  sub->add_option("--max-norm", o.cfg.max_norm, "ideal norm bound")->capture_default_str();
  sub->add_option("--cmax", o.cfg.cmax, "Kloosterman modulus norm bound")->capture_default_str();
  sub->add_option("--eps-window", o.cfg.eps_window, "unit window")->capture_default_str();
  sub->add_option("--tol", o.cfg.tol, "Poincare coefficient convergence tolerance")->capture_default_str();
  sub->add_option("--format", o.cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  sub->add_option("--cache-dir", o.cfg.cache_dir, "cache directory (default HILBERT_CACHE_DIR)");
  sub->add_flag("--no-cache", o.cfg.no_cache, "bypass the cache");
  sub->add_option("--seed", o.cfg.rng_seed, "rng seed")->capture_default_str();
}

std::int64_t trace_or(const Options& o, std::int64_t dflt) { return o.trace_bound_set ? o.cfg.trace_bound : dflt; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hilbert modular forms over real quadratic fields of narrow class number one"};
  app.require_subcommand(1);
  Options o;
  std::function<Result()> action;
  std::string op;
  json params;

  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help) {
    CLI::App* sub = parent->add_subcommand(name, help);
    add_common(sub, o);
    return sub;
  };
  auto group = [&](const std::string& name, const std::string& help) {
    CLI::App* g = app.add_subcommand(name, help);
    g->require_subcommand(1);
    return g;
  };

  CLI::App* field = group("field", "field constants");
  leaf(field, "info", "omega, units, discriminant, different")->callback([&] {
    op = "field.info";
    action = [&] { return field_info(o.cfg); };
  });

  CLI::App* ideals = group("ideals", "integral ideals");
  auto* il = leaf(ideals, "list", "ideals of norm <= max-norm");
  il->add_flag("--factor", o.factor, "include prime factorizations");
  il->callback([&] {
    op = "ideals.list";
    params = {{"factor", o.factor}};
    action = [&] { return ideals_list(o.cfg, o.factor); };
  });

  auto* eis = leaf(&app, "eisenstein", "Eisenstein q-expansion");
  eis->add_option("--k", o.k, "even weight >= 4")->required();
  eis->add_option("--norm", o.norm, "normalized, classical or coset")->capture_default_str();
  eis->callback([&] {
    op = "eisenstein";
    params = {{"k", o.k}, {"norm", o.norm}};
    action = [&] { return eisenstein(o.cfg, o.k, o.norm); };
  });

  CLI::App* poin = group("poincare", "Poincare series P_mu");
  auto* pc = leaf(poin, "coeffs", "q-expansion from the Kloosterman-Bessel formula");
  pc->add_option("--k", o.k, "even weight >= 4")->required();
  pc->add_option("--mu", o.mu, "index 'x,y'")->capture_default_str();
  pc->callback([&] {
    op = "poincare.coeffs";
    params = {{"k", o.k}, {"mu", o.mu}};
    action = [&] { return poincare_coeffs(o.cfg, o.k, o.mu); };
  });
  auto* pe = leaf(poin, "eval", "value at a point");
  pe->add_option("--k", o.k, "even weight >= 4")->required();
  pe->add_option("--mu", o.mu, "index 'x,y'")->capture_default_str();
  pe->add_option("--z", o.z, "point 're1,im1;re2,im2'")->required();
  pe->add_flag("--direct", o.direct, "also evaluate the coset sum");
  pe->callback([&] {
    op = "poincare.eval";
    params = {{"k", o.k}, {"mu", o.mu}, {"z", o.z}, {"direct", o.direct}};
    action = [&] { return poincare_eval(o.cfg, o.k, o.mu, o.z, o.direct); };
  });

  auto* br = leaf(&app, "bracket", "Rankin-Cohen bracket of two normalized Eisenstein series");
  br->add_option("--k", o.k, "weight of f")->required();
  br->add_option("--l", o.l, "weight of g")->required();
  br->add_option("--n", o.n, "order 'n' or 'n1,n2'")->capture_default_str();
  br->callback([&] {
    op = "bracket";
    params = {{"k", o.k}, {"l", o.l}, {"n", o.n}};
    action = [&] { return bracket(o.cfg, o.k, o.l, o.n); };
  });

  auto* he = leaf(&app, "hecke", "T_m applied to a coefficient series");
  he->add_option("--ideal", o.ideal, "'g:a:b' or 'gen:x,y'")->required();
  he->add_option("--weight", o.weight, "weight")->capture_default_str();
  he->add_option("--series", o.series, "sigma (sigma_{weight-1}), zeta, unit or random")->capture_default_str();
  he->callback([&] {
    op = "hecke";
    params = {{"ideal", o.ideal}, {"weight", o.weight}, {"series", o.series}};
    action = [&] { return hecke(o.cfg, o.ideal, o.weight, o.series); };
  });

  CLI::App* ls = group("lseries", "Dirichlet series over ideals");
  auto* lv = leaf(ls, "value", "L(f, s) by direct summation with a tail bound");
  lv->add_option("--series", o.series, "sigma, zeta or unit")->capture_default_str();
  lv->add_option("--r", o.r, "sigma exponent")->capture_default_str();
  lv->add_option("--s", o.s, "real s")->capture_default_str();
  lv->callback([&] {
    op = "lseries.value";
    params = {{"series", o.series}, {"r", o.r}, {"s", o.s}};
    action = [&] { return lseries_value(o.cfg, o.series, o.r, o.s); };
  });

  CLI::App* ker = group("kernel", "kernel expansions");
  for (const std::string name : {"cohen", "double"}) {
    auto* kc = leaf(ker, name, name == "cohen" ? "sum N(m)^{s-k} P_m" : "double Eisenstein series");
    kc->add_option("--s", o.s, "s")->required();
    if (name == "double") kc->add_option("--w", o.w, "w")->required();
    kc->add_option("--k", o.k, "even weight")->required();
    kc->add_option("--M", o.M, "ideal norm bound")->capture_default_str();
    kc->callback([&, name] {
      const bool dbl = name == "double";
      op = "kernel." + name;
      params = {{"s", o.s}, {"k", o.k}, {"M", o.M}};
      if (dbl) params["w"] = o.w;
      action = [&, dbl] { return kernel(o.cfg, dbl, o.s, o.w, o.k, o.M); };
    });
  }

  CLI::App* ver = group("verify", "identity verification suites");
  auto* v45 = leaf(ver, "thm45", "exact convolution identity");
  v45->add_option("--weight", o.weight, "weight m")->capture_default_str();
  v45->add_option("--l", o.l, "l")->required();
  v45->add_option("--series", o.series, "sigma or random")->capture_default_str();
  v45->callback([&] {
    op = "verify.thm45";
    params = {{"weight", o.weight}, {"l", o.l}, {"series", o.series}};
    action = [&] { return verify_thm45(o.cfg, o.weight, o.l, o.series); };
  });

  auto* v43 = leaf(ver, "cor43", "[E_k, E_l]_n against the derivative coset sum");
  v43->add_option("--k", o.c43.k, "weight of E_k")->capture_default_str();
  v43->add_option("--l", o.c43.l, "weight of E_l")->capture_default_str();
  v43->add_option("--n", o.n, "order 'n1,n2'")->capture_default_str();
  v43->add_option("--z", o.c43.z, "point")->capture_default_str();
  v43->add_option("--direct-cmax", o.direct_cmax, "coset sum bound")->capture_default_str();
  v43->callback([&] {
    op = "verify.cor43";
    params = {{"k", o.c43.k}, {"l", o.c43.l}, {"n", o.n}, {"z", o.c43.z}, {"direct_cmax", o.direct_cmax}, {"T", trace_or(o, 16)}};
    action = [&] {
      KernelSettings S;
      S.trace_bound = trace_or(o, 16);
      S.policy = policy_of(o.cfg);
      S.cut.cmax = o.direct_cmax;
      return from_report(verify_cor43(make_field(o.cfg.m), o.c43.k, o.c43.l, parse_pair(o.n), parse_point(o.c43.z), S));
    };
  });

  auto* v53 = leaf(ver, "prop53", "exact rearrangement for every target");
  v53->add_option("--s", o.s_str, "rational s")->required();
  v53->add_option("--t", o.t_str, "rational t")->required();
  v53->add_option("--k", o.p53_k, "weight")->capture_default_str();
  v53->add_option("--target-bound", o.targets, "target norm bound")->capture_default_str();
  v53->add_option("--a-bound", o.a_bound, "common divisor norm bound")->capture_default_str();
  v53->callback([&] {
    op = "verify.prop53";
    params = {{"s", o.s_str}, {"t", o.t_str}, {"k", o.p53_k}, {"targets", o.targets}, {"a_bound", o.a_bound}};
    action = [&] { return verify_prop53(o.cfg, o.s_str, o.t_str, o.p53_k, o.targets, o.a_bound); };
  });

  auto* v41 = leaf(ver, "thm41", "bracket with a Poincare series, pointwise");
  v41->add_option("--k", o.t41.k, "weight of the normalized Eisenstein f")->capture_default_str();
  v41->add_option("--k2", o.t41.k2, "Poincare weight")->capture_default_str();
  v41->add_option("--mu", o.mu, "Poincare index")->capture_default_str();
  v41->add_option("--n", o.n, "order")->capture_default_str();
  v41->add_option("--z", o.t41.z, "point")->capture_default_str();
  v41->add_option("--direct-cmax", o.direct_cmax, "coset sum bound")->capture_default_str();
  v41->callback([&] {
    op = "verify.thm41";
    params = {{"k", o.t41.k}, {"k2", o.t41.k2}, {"mu", o.mu}, {"n", o.n}, {"z", o.t41.z}, {"direct_cmax", o.direct_cmax},
              {"T", trace_or(o, 12)}};
    action = [&] {
      PrecisionScope scope(o.cfg.prec);
      const FieldContext& F = make_field(o.cfg.m);
      const QExpansion f =
          eisenstein_qexp(F, o.t41.k, IdealArith(F).unit(), trace_or(o, 12), EisensteinNorm::Normalized, o.cfg.prec);
      DirectCutoffs cut;
      cut.cmax = o.direct_cmax;
      const Theorem41Report r = theorem41_verify(f, false, parse_oelem(F, o.mu), o.t41.k2, parse_pair(o.n),
                                                 parse_point(o.t41.z), policy_of(o.cfg), cut, 1e-2);
      json doc = {{"identity", "thm41_pointwise"}, {"lhs", complex_json(r.lhs)}, {"rhs", complex_json(r.rhs)},
                  {"defect", r.defect},           {"tolerance", r.tolerance},  {"lhs_tail", r.lhs_tail},
                  {"rhs_estimate", r.rhs_estimate}, {"poincare_converged", r.poincare.converged},
                  {"pass", r.pass}};
      return Result{doc, {}, r.pass};
    };
  });

  auto* v51 = leaf(ver, "lemma51", "growth of |P_m(z)| against N(m)^{k-3/4}");
  v51->add_option("--k", o.l51.k, "weight")->capture_default_str();
  v51->add_option("--M", o.l51.M, "norm bound")->capture_default_str();
  v51->add_option("--z", o.l51.z, "point")->capture_default_str();
  v51->callback([&] {
    op = "verify.lemma51";
    params = {{"k", o.l51.k}, {"M", o.l51.M}, {"z", o.l51.z}};
    action = [&] {
      return from_report(lemma51_bound_report(make_field(o.cfg.m), o.l51.k, parse_point(o.l51.z), o.l51.M, DirectCutoffs{}));
    };
  });

  auto* v54 = leaf(ver, "thm54", "Eisenstein bracket numerics, shifted rearrangement and constant ledger");
  v54->add_option("--k", o.t54.k, "k")->capture_default_str();
  v54->add_option("--l", o.t54.l, "l")->capture_default_str();
  v54->add_option("--n", o.n_scalar, "parallel order")->capture_default_str();
  v54->add_option("--z", o.t54.z, "point")->capture_default_str();
  v54->callback([&] {
    op = "verify.thm54";
    params = {{"k", o.t54.k}, {"l", o.t54.l}, {"n", o.n_scalar}, {"z", o.t54.z}, {"T", trace_or(o, 16)}};
    action = [&] {
      KernelSettings S;
      S.trace_bound = trace_or(o, 16);
      S.policy = policy_of(o.cfg);
      return from_report(verify_thm54(make_field(o.cfg.m), o.t54.k, o.t54.l, o.n_scalar, parse_point(o.t54.z), S));
    };
  });

  auto* vmod = leaf(ver, "modularity", "Eisenstein slash invariance at pseudo-random group elements");
  vmod->add_option("--k", o.mod_k, "even weight")->capture_default_str();
  vmod->add_option("--elements", o.elements, "group elements per point")->capture_default_str();
  vmod->add_option("--z", o.points, "points (repeatable)")->default_str("0.1,1.1;-0.3,1.3 0.1,1.2;-0.2,0.9");
  vmod->callback([&] {
    if (o.points.empty()) o.points = {"0.1,1.1;-0.3,1.3", "0.1,1.2;-0.2,0.9"};
    op = "verify.modularity";
    params = {{"k", o.mod_k}, {"elements", o.elements}, {"z", o.points}, {"T", trace_or(o, 60)}};
    action = [&] { return verify_modularity(o.cfg, o.mod_k, trace_or(o, 60), o.elements, o.points); };
  });

  auto* vall = leaf(ver, "all", "every acceptance criterion");
  vall->add_option("--profile", o.profile, "quick or full")->check(CLI::IsMember({"quick", "full"}))->capture_default_str();
  vall->add_flag("--timings", o.timings, "include wall times (disables the cache)");
  vall->callback([&] {
    op = "verify.all";
    params = {{"profile", o.profile}};
    if (o.timings) o.cfg.no_cache = true;
    action = [&] { return verify_all(o.cfg, o.profile, o.timings); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    usage_error("Usage", e.what());
    return kExitUsage;
  }
  try {
    validate(o.cfg);
    const Emitted out = emit(o.cfg, op, params, action);
    std::fwrite(out.text.data(), 1, out.text.size(), stdout);
    return out.exit_code;
  } catch (const Error& e) {
    usage_error(error_name(e.code()), e.what());
    return kExitUsage;
  }
}
