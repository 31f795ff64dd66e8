#include <cmath>
#include <random>

#include "doctest.h"
#include "hilbert/error.hpp"
#include "hilbert/qexp.hpp"

using namespace hilbert;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

QExpansion random_exact(const FieldContext& F, int k, std::int64_t T, std::mt19937_64& rng, bool with_const = true) {
  std::uniform_int_distribution<long> d(-6, 6);
  QExpansion f = constant_qexp(F, k, Coeff::exact_value(FieldElem(with_const ? d(rng) : 0)), T);
  for (OElem nu : orbit_reps_meeting(F, T)) {
    const FieldElem c(Rational(d(rng), 1 + (d(rng) + 6) % 3), Rational(d(rng)));
    if (!c.is_zero()) f.coeffs[F.to_field(nu)] = Coeff::exact_value(c);
  }
  f.bound_C = 10.0;
  f.bound_exp = 0.0;
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

}  // namespace

TEST_CASE("orbit representatives cover the trace region") {
  for (int m : {2, 5, 13, 17}) {
    const FieldContext& F = make_field(m);
    const auto reps = orbit_reps_meeting(F, 30);
    for (OElem r : reps) CHECK(F.in_window(r));
    for (OElem p : F.enumerate_tp_points(30)) {
      const OElem r = F.tp_orbit_rep(p).first;
      CHECK(std::find(reps.begin(), reps.end(), r) != reps.end());
    }
  }
}

TEST_CASE("coefficients are constant on unit orbits in parallel weight") {
  const FieldContext& F = make_field(5);
  std::mt19937_64 rng(7);
  const QExpansion f = random_exact(F, 4, 20, rng);
  for (OElem nu : F.enumerate_tp_points(20)) {
    const OElem r = F.tp_orbit_rep(nu).first;
    CHECK(f.at(nu).e == f.at(r).e);
  }
  CHECK_THROWS_AS(f.at(OElem{40, 0}), Error);
}

TEST_CASE("qexp_eval of constants and a single orbit") {
  const FieldContext& F = make_field(5);
  const QExpansion one = constant_qexp(F, 4, Coeff::exact_value(FieldElem(1)), 10);
  const EvalResult r = qexp_eval(one, {Complex(0.3, 1.0), Complex(-0.1, 2.0)});
  CHECK(std::abs(r.value - Complex(1.0, 0.0)) < 1e-15);

  QExpansion f = constant_qexp(F, 4, Coeff::exact_value(FieldElem(0)), 2);
  f.coeffs[FieldElem(1)] = Coeff::exact_value(FieldElem(1));
  const EvalResult v = qexp_eval(f, {Complex(0.0, 1.0), Complex(0.0, 1.0)});
  const double e = (3.0 + std::sqrt(5.0)) / 2.0;
  double oracle = 0.0;
  for (int j = -30; j <= 30; ++j) oracle += std::exp(-kTwoPi * (std::pow(e, j) + std::pow(e, -j)));
  CHECK(std::abs(v.value.real() - oracle) < 1e-15 * oracle + v.tail_bound);
  CHECK(std::abs(v.value.imag()) < 1e-25);
  CHECK(oracle / std::exp(-2 * kTwoPi) - 1.0 > 0.0);
  CHECK(oracle / std::exp(-2 * kTwoPi) - 1.0 < 1e-2);

  CHECK_THROWS_AS(qexp_eval(f, {Complex(0.0, 1.0), Complex(0.0, -1.0)}), Error);
}

TEST_CASE("evaluation is linear in scalars") {
  const FieldContext& F = make_field(13);
  std::mt19937_64 rng(11);
  const QExpansion f = random_exact(F, 6, 16, rng);
  const Point z{Complex(0.2, 0.9), Complex(-0.4, 1.1)};
  const Coeff alpha = Coeff::exact_value(FieldElem(Rational(3, 2), Rational(-1)));
  const Complex lhs = qexp_eval(scale(f, alpha), z).value;
  const Complex rhs = alpha.value(F) * qexp_eval(f, z).value;
  CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(rhs));
}

TEST_CASE("bracket with n = 0 is the Cauchy product") {
  const FieldContext& F = make_field(5);
  std::mt19937_64 rng(3);
  const QExpansion f = random_exact(F, 4, 14, rng), g = random_exact(F, 6, 14, rng);
  const QExpansion h = rankin_cohen(f, g, {0, 0});
  CHECK(h.k1 == 10);
  CHECK(h.const_term.e == F.mul(f.const_term.e, g.const_term.e));
  for (OElem nu : F.enumerate_tp_points(14)) {
    FieldElem s = F.mul(f.const_term.e, g.at(nu).e) + F.mul(f.at(nu).e, g.const_term.e);
    for (OElem a : F.enumerate_tp_points(F.trace(nu))) {
      const OElem b = nu - a;
      if (F.is_totally_positive(b)) s = s + F.mul(f.at(a).e, g.at(b).e);
    }
    CHECK(h.at(nu).e == s);
  }
}

TEST_CASE("bracket of constants vanishes for n != 0") {
  const FieldContext& F = make_field(2);
  const QExpansion one = constant_qexp(F, 4, Coeff::exact_value(FieldElem(1)), 12);
  for (std::array<int, 2> n : {std::array<int, 2>{1, 0}, {0, 2}, {1, 1}}) {
    const QExpansion h = rankin_cohen(one, one, n);
    CHECK(h.const_term.is_zero());
    for (const auto& [nu, c] : h.coeffs) CHECK(c.is_zero());
  }
}

TEST_CASE("bracket swap rule and bilinearity are exact") {
  for (int m : {5, 17}) {
    const FieldContext& F = make_field(m);
    std::mt19937_64 rng(static_cast<unsigned>(m));
    const QExpansion f = random_exact(F, 4, 12, rng), f2 = random_exact(F, 4, 12, rng);
    const QExpansion g = random_exact(F, 6, 12, rng);
    for (std::array<int, 2> n : {std::array<int, 2>{1, 0}, {1, 1}, {2, 1}}) {
      const QExpansion fg = rankin_cohen(f, g, n), gf = rankin_cohen(g, f, n);
      const long sgn = (n[0] + n[1]) % 2 == 0 ? 1 : -1;
      CHECK(same_exact(fg, scale(gf, Coeff::exact_value(FieldElem(sgn)))));

      const Coeff alpha = Coeff::exact_value(FieldElem(Rational(2, 3), Rational(1)));
      const QExpansion lhs = rankin_cohen(add(scale(f, alpha), f2), g, n);
      const QExpansion rhs = add(scale(fg, alpha), rankin_cohen(f2, g, n));
      CHECK(same_exact(lhs, rhs));
    }
  }
}

TEST_CASE("bracket rejects mismatched levels") {
  const FieldContext& F = make_field(5);
  QExpansion f = constant_qexp(F, 4, Coeff::exact_value(FieldElem(1)), 6);
  QExpansion g = f;
  g.level = IdealArith(F).from_generator(OElem{2, 0});
  CHECK_THROWS_AS(rankin_cohen(f, g, {1, 0}), Error);
}

TEST_CASE("modularity defect for identity and translations") {
  const FieldContext& F = make_field(5);
  std::mt19937_64 rng(5);
  const QExpansion f = random_exact(F, 4, 30, rng);
  const Point z{Complex(0.1, 1.1), Complex(-0.3, 1.3)};
  const Matrix2 id{FieldElem(1), FieldElem(0), FieldElem(0), FieldElem(1)};
  CHECK(modularity_defect(f, id, z).defect == 0.0);
  const FieldElem beta = F.inv(F.diff_gen());
  const Matrix2 tr{FieldElem(1), F.mul(FieldElem(3), beta), FieldElem(0), FieldElem(1)};
  const DefectResult d = modularity_defect(f, tr, z);
  CHECK(d.defect < 1e-12 * std::max(1.0, std::abs(d.rhs)));

  const Matrix2 bad{FieldElem(1), FieldElem(Rational(1, 3), Rational(0)), FieldElem(0), FieldElem(1)};
  CHECK_THROWS_AS(modularity_defect(f, bad, z), Error);
}

TEST_CASE("json dump carries weights and bound") {
  const FieldContext& F = make_field(5);
  std::mt19937_64 rng(9);
  const QExpansion f = random_exact(F, 4, 8, rng);
  const auto j = qexp_to_json(f);
  CHECK(j.at("trace_bound").get<std::int64_t>() == 8);
  CHECK(j.at("coeffs").size() == f.coeffs.size());
}
