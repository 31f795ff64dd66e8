#include <random>

#include "doctest.h"
#include "hilbert/error.hpp"
#include "hilbert/lseries.hpp"

using namespace hilbert;
namespace mp = boost::multiprecision;

namespace {

ExactSeries random_series(const FieldContext& F, std::int64_t X, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> d(-9, 9);
  ExactSeries s(F, X);
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = Rational(d(rng), 1 + (d(rng) + 9) % 4);
    s[i].canonicalize();
  }
  return s;
}

std::map<Ideal, Rational> prime_values(const FieldContext& F, std::int64_t X, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> d(-30, 30);
  std::map<Ideal, Rational> out;
  const IdealArith A(F);
  for (const Ideal& I : A.enumerate(X)) {
    const auto fac = A.factor(I);
    if (fac.size() == 1 && fac[0].second == 1) out[I] = d(rng);
  }
  return out;
}

}  // namespace

TEST_CASE("zeta_F closed form and bounds") {
  PrecisionScope ps(192);
  const FieldContext& F = make_field(5);
  const Real z2 = zeta_F_numeric(F, Real(2), 192);
  const Real closed = 2 * mp::pow(real_pi(), 4) / (75 * mp::sqrt(Real(5)));
  CHECK(mp::abs(z2 - closed) < Real("1e-10"));
  CHECK(mp::abs(z2 - closed) < Real("1e-50"));
  const Real z20 = zeta_F_numeric(F, Real(20), 192);
  CHECK(z20 > 1);
  CHECK(z20 < Real(1) + Real("1e-11"));
  CHECK_THROWS_AS(zeta_F_numeric(F, Real(1), 192), Error);
}

TEST_CASE("zeta_F routes agree") {
  PrecisionScope ps(128);
  for (int m : supported_radicands()) {
    const FieldContext& F = make_field(m);
    for (int s : {2, 3, 4}) {
      CAPTURE(m);
      CAPTURE(s);
      const Real z = zeta_F_numeric(F, Real(s), 128);
      const NumericValue e = zeta_F_euler(F, Real(s), 20000);
      const NumericValue d = zeta_F_direct(F, Real(s), 20000);
      CHECK(mp::abs(e.value - z) <= e.tail_bound);
      CHECK(mp::abs(d.value - z) <= d.tail_bound);
      CHECK(e.value <= z);
      CHECK(d.value <= z);
    }
  }
}

TEST_CASE("Hurwitz zeta against Riemann zeta") {
  PrecisionScope ps(160);
  for (int s : {2, 3, 7}) {
    CHECK(mp::abs(hurwitz_zeta(Real(s), Real(1)) - riemann_zeta(Real(s))) < Real("1e-45"));
    // zeta(s, 1/2) = (2^s - 1) zeta(s)
    CHECK(mp::abs(hurwitz_zeta(Real(s), Real("0.5")) - (mp::pow(Real(2), s) - 1) * riemann_zeta(Real(s))) <
          Real("1e-44"));
  }
  CHECK(bernoulli(1) == Rational(-1, 2));
  CHECK(bernoulli(12) == Rational(-691, 2730));
}

TEST_CASE("convolution algebra") {
  const FieldContext& F = make_field(5);
  std::mt19937_64 rng(4);
  const ExactSeries B = random_series(F, 200, rng);
  const ExactSeries AB = dirichlet_convolve(unit_series(F, 200), B);
  CHECK(AB.values() == B.values());

  for (long l : {1L, 2L, 4L}) {
    const ExactSeries s = dirichlet_convolve(one_series(F, 200), shift(one_series(F, 200), l - 1));
    CHECK(s.values() == sigma_series(F, l - 1, 200).values());
  }

  for (int m : supported_radicands()) {
    const FieldContext& G = make_field(m);
    for (int trial = 0; trial < 3; ++trial) {
      const ExactSeries x = random_series(G, 100, rng);
      const ExactSeries y = random_series(G, 100, rng);
      const ExactSeries z = random_series(G, 100, rng);
      CHECK(dirichlet_convolve(x, y).values() == dirichlet_convolve(y, x).values());
      CHECK(dirichlet_convolve(dirichlet_convolve(x, y), z).values() ==
            dirichlet_convolve(x, dirichlet_convolve(y, z)).values());
    }
  }

  const ExactSeries small = random_series(F, 50, rng);
  CHECK(dirichlet_convolve(small, B).max_norm() == 50);
}

TEST_CASE("truncation is enforced") {
  const FieldContext& F = make_field(5);
  const IdealArith A(F);
  const ExactSeries s = one_series(F, 10);
  CHECK(s.at(A.unit()) == 1);
  try {
    (void)s.at(A.from_generator(OElem{4, 0}));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientTruncation);
  }
}

TEST_CASE("Hecke extension") {
  const FieldContext& F = make_field(5);
  const IdealArith A(F);
  const long w = 4;
  std::map<Ideal, Rational> pv;
  for (const Ideal& I : A.enumerate(200)) {
    const auto fac = A.factor(I);
    if (fac.size() == 1 && fac[0].second == 1) pv[I] = 1 + rational_pow(Rational(I.norm()), w - 1);
  }
  CHECK(hecke_extend(F, pv, w, 200).values() == sigma_series(F, w - 1, 200).values());

  const Ideal p2 = A.from_generator(OElem{2, 0});
  const Ideal p11 = A.primes_above(11)[0].ideal;
  pv[p11] = 0;
  const ExactSeries z = hecke_extend(F, pv, w, 200);
  CHECK(z.at(A.mul(p11, p11)) == -rational_pow(Rational(11), w - 1));
  CHECK(z.at(A.mul(p2, p11)) == 0);

  std::map<Ideal, Rational> partial;
  partial[A.from_generator(OElem{2, 1})] = 3;
  try {
    (void)hecke_extend(F, partial, w, 20);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingPrime);
  }

  std::mt19937_64 rng(9);
  for (int m : supported_radicands()) {
    const FieldContext& G = make_field(m);
    for (long wt : {2L, 10L}) {
      const ExactSeries h = hecke_extend(G, prime_values(G, 100, rng), wt, 100);
      CHECK_FALSE(hecke_relation_failure(h, wt, 100).has_value());
    }
  }
}

TEST_CASE("Hecke operators") {
  const FieldContext& F = make_field(5);
  const IdealArith A(F);
  const long k = 4;
  const ExactSeries sig = sigma_series(F, k - 1, 400);
  for (const Ideal& m : A.enumerate(20)) {
    const ExactSeries t = hecke_apply(m, sig, k);
    CHECK(t.at(A.unit()) == sig.at(m));
  }
  for (std::int64_t p : {2, 5, 11}) {
    for (const auto& P : A.primes_above(p)) {
      const ExactSeries t = hecke_apply(P.ideal, sig, k);
      const Rational s1 = A.sigma(P.ideal, k - 1);
      CHECK(t.at(P.ideal) == A.sigma(A.mul(P.ideal, P.ideal), k - 1) + rational_pow(Rational(P.ideal.norm()), k - 1));
      CHECK(t.at(P.ideal) == s1 * s1);
      for (std::size_t i = 0; i < t.size(); ++i) CHECK(t[i] == s1 * sig[i]);
    }
  }

  std::mt19937_64 rng(2);
  const ExactSeries f = random_series(F, 200, rng);
  const ExactSeries g = random_series(F, 200, rng);
  const auto small = A.enumerate(9);
  for (const Ideal& m : small) {
    // linearity
    ExactSeries fg = f;
    for (std::size_t i = 0; i < fg.size(); ++i) fg[i] = f[i] + 3 * g[i];
    const ExactSeries tf = hecke_apply(m, f, k), tg = hecke_apply(m, g, k), tfg = hecke_apply(m, fg, k);
    for (std::size_t i = 0; i < tf.size(); ++i) CHECK(tfg[i] == tf[i] + 3 * tg[i]);
    for (const Ideal& n : small) {
      const ExactSeries mn = hecke_apply(m, hecke_apply(n, f, k), k);
      const ExactSeries nm = hecke_apply(n, hecke_apply(m, f, k), k);
      CHECK(mn.values() == nm.values());
      if (A.gcd(m, n).is_unit()) {
        const ExactSeries direct = hecke_apply(A.mul(m, n), f, k);
        for (std::size_t i = 0; i < mn.size() && i < direct.size(); ++i) CHECK(mn[i] == direct[i]);
      }
    }
  }
  CHECK_THROWS_AS(hecke_apply(A.from_generator(OElem{5, 0}), one_series(F, 10), k), Error);
}

TEST_CASE("L-series values") {
  PrecisionScope ps(128);
  const FieldContext& F = make_field(5);
  const NumericValue one = L_numeric(unit_series(F, 50), Real(2), Real(0), Real(0));
  CHECK(one.value == 1);
  CHECK(one.tail_bound == 0);

  const NumericValue z = L_numeric(one_series(F, 2000), Real(2), Real(0));
  const Real exact = zeta_F_numeric(F, Real(2), 128);
  CHECK(mp::abs(z.value - exact) <= z.tail_bound);

  const long l = 2;
  const NumericValue sl = L_numeric(sigma_series(F, l - 1, 2000), Real(5), Real(l));
  const Real prod = zeta_F_numeric(F, Real(5), 128) * zeta_F_numeric(F, Real(5 - l + 1), 128);
  CHECK(mp::abs(sl.value - prod) <= sl.tail_bound);
  CHECK(mp::abs(sl.value - prod) < Real("1e-6"));

  const NumericValue lam = Lambda_numeric(one_series(F, 2000), Real(3), Real(0));
  const Real g = mp::tgamma(Real(3));
  const Real L3 = L_numeric(one_series(F, 2000), Real(3), Real(0)).value;
  CHECK(mp::abs(lam.value - L3 * mp::pow(Real(5), 3) * mp::pow(2 * real_pi(), -6) * g * g) < Real("1e-30"));

  const NumericValue rs = rankin_selberg_numeric(one_series(F, 500), one_series(F, 500), Real(3), Real(0));
  CHECK(mp::abs(rs.value - L_numeric(one_series(F, 500), Real(3), Real(0)).value) < Real("1e-30"));

  try {
    (void)L_numeric(one_series(F, 50), Real(1), Real(0));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AbscissaViolation);
  }
}

TEST_CASE("sigma bound") {
  for (int m : supported_radicands()) {
    const FieldContext& F = make_field(m);
    const IdealArith A(F);
    for (const Ideal& I : A.enumerate(500)) {
      const Rational N(I.norm());
      for (long r = -3; r <= 0; ++r) CHECK(A.sigma(I, r) <= N);
      for (long r = 1; r <= 3; ++r) CHECK(A.sigma(I, r) <= rational_pow(N, r + 1));
    }
  }
}

TEST_CASE("convolution identity for eigenform coefficients") {
  const FieldContext& F = make_field(5);
  const long m = 10, l = 4;
  const ExactSeries sig = sigma_series(F, m - 1, 300);
  const Thm45Report r1 = verify_thm45_identity(sig, l, m);
  CHECK(r1.pass);
  CHECK(r1.checked == sig.size());

  std::mt19937_64 rng(21);
  const ExactSeries h = hecke_extend(F, prime_values(F, 300, rng), m, 300);
  CHECK(verify_thm45_identity(h, l, m).pass);

  const IdealArith A(F);
  ExactSeries bad = h;
  const Ideal target = A.from_generator(OElem{11, 0});  // norm 121, composite
  bad.set(target, bad.at(target) + 1);
  const Thm45Report r3 = verify_thm45_identity(bad, l, m);
  CHECK_FALSE(r3.pass);
  REQUIRE(r3.first_failure.has_value());
  CHECK(*r3.first_failure == target);

  ExactSeries broken = h;
  broken.set(A.from_generator(OElem{2, 0}), 7);
  try {
    (void)verify_thm45_identity(broken, l, m);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotMultiplicative);
  }

  for (int mm : supported_radicands()) {
    const FieldContext& G = make_field(mm);
    CHECK(verify_thm45_identity(hecke_extend(G, prime_values(G, 200, rng), 6, 200), 2, 6).pass);
  }
}

TEST_CASE("series JSON round trip") {
  const FieldContext& F = make_field(13);
  std::mt19937_64 rng(8);
  const ExactSeries s = random_series(F, 60, rng);
  const ExactSeries t = exact_series_from_json(F, series_to_json(s));
  CHECK(t.values() == s.values());
  CHECK(t.max_norm() == 60);
  const nlohmann::json j = ideal_to_json(s.ideals()[3]);
  CHECK(j.at("norm").get<std::int64_t>() == s.ideals()[3].norm());
}
