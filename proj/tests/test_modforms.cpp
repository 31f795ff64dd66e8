#include <cmath>
#include <random>

#include "doctest.h"
#include "hilbert/error.hpp"
#include "hilbert/modforms.hpp"

using namespace hilbert;
namespace mp = boost::multiprecision;

namespace {

const Point kModZ{Complex(0.1, 1.1), Complex(-0.3, 1.3)};
const Point kEvalZ{Complex(0.1, 1.2), Complex(-0.2, 0.9)};

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("normalized Eisenstein coefficients are divisor sums") {
  const FieldContext& F = make_field(5);
  const IdealArith A(F);
  const QExpansion E4 = eisenstein_qexp(F, 4, A.unit(), 12, EisensteinNorm::Normalized);
  CHECK(E4.at(OElem{2, 0}).exact);
  CHECK(E4.at(OElem{2, 0}).e == FieldElem(65));
  CHECK(E4.at(OElem{1, 0}).e == FieldElem(1));
  CHECK(E4.at(F.tp_unit_int()).e == FieldElem(1));
  for (OElem nu : orbit_reps_meeting(F, 12))
    CHECK(E4.at(nu).e == FieldElem(A.sigma(A.from_generator(nu), 3), 0));

  PrecisionScope ps(192);
  for (int l : {4, 6, 8}) {
    const QExpansion E = eisenstein_qexp(F, l, A.unit(), 4, EisensteinNorm::Normalized);
    const Real K = eisenstein_constant(F, l);
    const Real z = zeta_F_numeric(F, Real(l), 192);
    CHECK(std::abs(E.const_term.z.real() * to_double(K) / to_double(z) - 1.0) < 1e-14);
    const QExpansion C = eisenstein_qexp(F, l, A.unit(), 4, EisensteinNorm::Classical);
    for (const auto& [nu, c] : E.coeffs)
      CHECK(std::abs(C.coeffs.at(nu).z.real() / (to_double(K) * F.embed(c.e, 0)) - 1.0) < 1e-14);
  }
}

TEST_CASE("Eisenstein level and weight checks") {
  const FieldContext& F = make_field(13);
  const IdealArith A(F);
  const Ideal lev = A.from_generator(OElem{2, 0});
  const QExpansion E = eisenstein_qexp(F, 4, lev, 10, EisensteinNorm::Normalized);
  CHECK(E.at(OElem{1, 0}).is_zero());
  CHECK(E.at(OElem{2, 0}).e == FieldElem(1));
  CHECK(E.at(OElem{4, 0}).e == FieldElem(A.sigma(A.from_generator(OElem{2, 0}), 3), 0));
  CHECK_THROWS_AS(eisenstein_qexp(F, 5, A.unit(), 4, EisensteinNorm::Normalized), Error);
  CHECK_THROWS_AS(eisenstein_qexp(F, 2, A.unit(), 4, EisensteinNorm::Normalized), Error);
}

TEST_CASE("Bessel series") {
  const long prec = 192;
  PrecisionScope ps(prec);
  for (int k = 1; k < 6; ++k) CHECK(bessel_J(k, Real(0), prec) == 0);
  CHECK(bessel_J(0, Real(0), prec) == 1);
  const Real j3 = bessel_J(3, Real(1), prec);
  CHECK(std::abs(to_double(j3) - 1.9563e-2) < 1e-6);
  CHECK(std::abs(to_double(j3) - std::cyl_bessel_j(3.0, 1.0)) < 1e-16);
  {
    const Real hi = bessel_J(3, Real(1), 4 * prec);
    CHECK(mp::abs(Real(hi) - j3) < mp::pow(Real(2), -prec));
  }
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> kd(1, 20);
  std::uniform_real_distribution<double> xd(0.5, 60.0);
  int bad = 0;
  for (int s = 0; s < 100; ++s) {
    const int k = kd(rng);
    const Real x(xd(rng));
    const Real lhs = bessel_J(k - 1, x, prec) + bessel_J(k + 1, x, prec);
    const Real rhs = 2 * k / x * bessel_J(k, x, prec);
    if (mp::abs(lhs - rhs) > mp::pow(Real(2), -prec + 4) * std::max(1.0, 2.0 * k / to_double(x))) ++bad;
  }
  CHECK(bad == 0);
  CHECK_THROWS_AS(bessel_J(3, Real(65), prec), Error);
}

TEST_CASE("Kloosterman sums") {
  const FieldContext& F = make_field(5);
  const FieldElem delta = F.diff_gen();
  CHECK(kloosterman_sum(F, OElem{1, 0}, OElem{3, 1}, delta).re == doctest::Approx(1.0));
  CHECK(kloosterman_sum(F, OElem{2, 1}, OElem{1, 0}, F.mul(delta, F.tp_unit())).re == doctest::Approx(1.0));
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> d(1, 9);
  for (int s = 0; s < 40; ++s) {
    OElem nu{d(rng), d(rng) % 3}, mu{d(rng), d(rng) % 3};
    if (!F.is_totally_positive(nu) || !F.is_totally_positive(mu)) continue;
    const OElem cp{d(rng), d(rng) % 4};
    if (F.norm(cp) == 0) continue;
    const FieldElem c = F.mul(delta, F.to_field(cp));
    const KloostermanValue a = kloosterman_sum(F, nu, mu, c), b = kloosterman_sum(F, mu, nu, c);
    CHECK(std::abs(a.re - b.re) < 1e-9 * std::max(1.0, std::abs(a.re)));
    CHECK(std::abs(a.im) < 1e-9 * static_cast<double>(a.terms));
    CHECK(std::abs(a.re) <= static_cast<double>(a.terms) + 1e-9);
  }
  CHECK_THROWS_AS(kloosterman_sum(F, OElem{1, 0}, OElem{1, 0}, FieldElem(0)), Error);
  CHECK_THROWS_AS(kloosterman_sum(F, OElem{1, 0}, OElem{1, 0}, FieldElem(1)), Error);
}

TEST_CASE("Poincare coefficients: orbit invariance and the chi term") {
  const FieldContext& F = make_field(5);
  TruncationPolicy pol;
  const OElem nu{2, 1}, mu{1, 0};
  const double a = poincare_coeff(F, nu, mu, 8, pol).value;
  const double b = poincare_coeff(F, F.mul(F.tp_unit_int(), nu), mu, 8, pol).value;
  CHECK(std::abs(a - b) < 1e-8 * std::abs(a));

  TruncationPolicy fixed;
  fixed.escalate = false;
  double prev = HUGE_VAL;
  for (int k : {8, 12, 16, 20}) {
    const double corr = std::abs(poincare_coeff(F, mu, mu, k, fixed).value - 1.0);
    CHECK(corr < prev);
    prev = corr;
  }
  CHECK_THROWS_AS(poincare_coeff(F, nu, mu, 7, pol), Error);
}

TEST_CASE("coset completion") {
  const FieldContext& F = make_field(17);
  const CosetRep g = complete_coset(F, OElem{3, 1}, OElem{7, 2});
  CHECK(F.mul(g.a, g.d) - F.mul(g.b, g.c) == FieldElem(1));
  const Matrix2 M{g.a, g.b, g.c, g.d};
  CHECK_NOTHROW(check_in_gamma0(F, M, IdealArith(F).unit()));
  CHECK_THROWS_AS(complete_coset(F, OElem{2, 0}, OElem{4, 0}), Error);
}

TEST_CASE("seed 1 reproduces the Eisenstein series") {
  const FieldContext& F = make_field(5);
  const QExpansion E6 = eisenstein_qexp(F, 6, IdealArith(F).unit(), 60, EisensteinNorm::Coset);
  const EvalResult q = qexp_eval(E6, kEvalZ);
  const DirectResult d = poincare_eval_direct(F, seed_constant(), {6, 6}, kEvalZ, DirectCutoffs{});
  CHECK(std::abs(q.value - d.value) < q.tail_bound + d.estimate + 1e-12);
  CHECK(std::abs(q.value - d.value) < 1e-8);
}

TEST_CASE("Eisenstein modularity at group elements with c != 0") {
  const FieldContext& F = make_field(5);
  const QExpansion E6 = eisenstein_qexp(F, 6, IdealArith(F).unit(), 60, EisensteinNorm::Coset);
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> d(-3, 3);
  for (const Point& z : {kModZ, kEvalZ}) {
    for (int s = 0; s < 3; ++s) {
      const Matrix2 g = balanced_group_element(F, z, d(rng) % 2, OElem{d(rng), d(rng)});
      CHECK(!g.c.is_zero());
      const DefectResult r = modularity_defect(E6, g, z);
      CHECK(r.defect < 1e-6);
      CHECK(r.defect <= r.tail);
    }
  }
}

TEST_CASE("Poincare series: coefficient route against the coset sum") {
  const FieldContext& F = make_field(5);
  const Point z{Complex(0.0, 1.1), Complex(0.0, 0.9)};
  ConvergenceReport rep;
  const QExpansion P = poincare_qexp(F, OElem{1, 0}, 8, 12, TruncationPolicy{}, &rep);
  CHECK(rep.converged);
  const EvalResult q = qexp_eval(P, z);
  const DirectResult d = poincare_eval_direct(F, seed_qseries(F, {{OElem{1, 0}, 1.0}}), {8, 8}, z, DirectCutoffs{});
  CHECK(rel(q.value, d.value) < 1e-3);
}

TEST_CASE("non-identity cosets decay with the height") {
  const FieldContext& F = make_field(5);
  const SeedFn seed = seed_qseries(F, {{OElem{1, 0}, 1.0}});
  DirectCutoffs cut;
  cut.cmax = 40;
  double diff[2];
  int i = 0;
  for (double y : {5.0, 10.0}) {
    const DirectResult d = poincare_eval_direct(F, seed, {8, 8}, {Complex(0.0, y), Complex(0.0, y)}, cut);
    diff[i++] = std::abs(d.value - d.identity_term);
  }
  // N(Im z)^{-k} up to the slowly growing unit sum at gamma z: doubling both heights divides by about 2^{2k}
  const double ratio = diff[0] / diff[1];
  CHECK(ratio > std::pow(2.0, 16) / 4);
  CHECK(ratio < std::pow(2.0, 16) * 4);
}

TEST_CASE("seed lifts") {
  const FieldContext& F = make_field(5);
  TruncationPolicy pol;
  const QExpansion E = eisenstein_qexp(F, 8, IdealArith(F).unit(), 6, EisensteinNorm::Coset);
  const QExpansion L0 = seed_lift(F, {{FieldElem(0), Complex(1.0, 0.0)}}, 8, 6, pol);
  for (const auto& [nu, c] : E.coeffs) CHECK(std::abs(L0.at(nu).value(F) - c.value(F)) < 1e-12 * std::abs(c.value(F)));
  const QExpansion P = poincare_qexp(F, OElem{1, 0}, 8, 6, pol);
  const QExpansion L1 = seed_lift(F, {{FieldElem(1), Complex(1.0, 0.0)}}, 8, 6, pol);
  for (const auto& [nu, c] : P.coeffs) CHECK(std::abs(L1.at(nu).value(F) - c.value(F)) < 1e-12 * std::abs(c.value(F)));

  const QExpansion E4 = eisenstein_qexp(F, 4, IdealArith(F).unit(), 10, EisensteinNorm::Normalized);
  std::map<FieldElem, Complex> phi;
  for (const auto& [nu, c] : E4.coeffs) phi[nu] = c.value(F);
  const GrowthReport g = seed_growth(F, phi, 8, 0.1);
  CHECK(std::isfinite(g.max_ratio));
  CHECK(g.max_ratio > 0.0);
}

TEST_CASE("derivative transport matches direct evaluation at gamma z") {
  const FieldContext& F = make_field(5);
  const QExpansion E6 = eisenstein_qexp(F, 6, IdealArith(F).unit(), 60, EisensteinNorm::Coset);
  std::vector<std::vector<Complex>> tab(2, std::vector<Complex>(2));
  for (int r1 = 0; r1 < 2; ++r1)
    for (int r2 = 0; r2 < 2; ++r2) tab[r1][r2] = qexp_eval(E6, kModZ, {r1, r2}).value;
  const DerivativeTransport T(6, {1, 1}, tab);
  const Matrix2 g = balanced_group_element(F, kModZ, 0, OElem{0, 0});
  EmbeddedMatrix e;
  for (int i = 0; i < 2; ++i) {
    e.a[i] = F.embed(g.a, i);
    e.b[i] = F.embed(g.b, i);
    e.c[i] = F.embed(g.c, i);
    e.d[i] = F.embed(g.d, i);
  }
  const Point gz = act(F, g, kModZ);
  for (std::array<int, 2> l : {std::array<int, 2>{0, 0}, {1, 0}, {0, 1}, {1, 1}})
    CHECK(rel(T.at(e, kModZ, l), qexp_eval(E6, gz, l).value) < 1e-8);
}

TEST_CASE("bracket with a Poincare series, pointwise") {
  const FieldContext& F = make_field(5);
  const Point z{Complex(0.0, 1.2), Complex(0.0, 0.8)};
  const QExpansion E4 = eisenstein_qexp(F, 4, IdealArith(F).unit(), 12, EisensteinNorm::Normalized);
  TruncationPolicy pol;
  DirectCutoffs cut;
  for (std::array<int, 2> n : {std::array<int, 2>{0, 0}, {1, 0}, {1, 1}}) {
    const Theorem41Report r = theorem41_verify(E4, false, OElem{1, 0}, 8, n, z, pol, cut, 1e-2);
    CHECK(r.pass);
    CHECK(r.defect < 1e-6);
  }
  CHECK_THROWS_AS(theorem41_verify(E4, false, OElem{1, 0}, 4, {1, 1}, z, pol, cut), Error);

  const QExpansion E4s = eisenstein_qexp(F, 4, IdealArith(F).unit(), 6, EisensteinNorm::Normalized);
  DirectCutoffs small;
  small.cmax = 100;
  const double coarse = theorem41_verify(E4s, false, OElem{1, 0}, 8, {1, 1}, z, pol, small).defect;
  const double fine = theorem41_verify(E4, false, OElem{1, 0}, 8, {1, 1}, z, pol, cut).defect;
  CHECK(fine < coarse);
}
