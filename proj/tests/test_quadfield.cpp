#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "hilbert/error.hpp"
#include "hilbert/quadfield.hpp"

using namespace hilbert;

namespace {

FieldElem fe(long x, long y) { return {Rational(x), Rational(y)}; }

FieldElem from_sqrt(const FieldContext& F, Rational a, Rational b) {
  // a + b*sqrt(m) on the (1, omega) basis.
  if (F.omega_trace() == 1) return {a - b, 2 * b};
  return {a, b};
}

}  // namespace

TEST_CASE("field constants for m = 5") {
  const FieldContext& F = make_field(5);
  CHECK(F.disc() == 5);
  CHECK(F.fund_unit() == fe(0, 1));
  CHECK(F.tp_unit() == from_sqrt(F, Rational(3, 2), Rational(1, 2)));
  CHECK(F.diff_gen() == from_sqrt(F, Rational(5, 2), Rational(1, 2)));
  // omega^2 - omega - 1 = 0
  const FieldElem w = F.omega();
  CHECK(F.mul(w, w) - w - FieldElem(1) == FieldElem(0));
}

TEST_CASE("field constants for m = 2") {
  const FieldContext& F = make_field(2);
  CHECK(F.disc() == 8);
  CHECK(F.fund_unit() == fe(1, 1));
  CHECK(F.tp_unit() == fe(3, 2));
  CHECK(F.diff_gen() == fe(4, 2));
  CHECK(F.mul(F.omega(), F.omega()) == FieldElem(2));
}

TEST_CASE("all supported fields satisfy the context invariants") {
  for (int m : supported_radicands()) {
    const FieldContext& F = make_field(m);
    CAPTURE(m);
    CHECK(std::abs(F.norm(F.fund_unit()).get_d()) == 1);
    CHECK(F.norm(F.fund_unit()) == -1);
    CHECK(F.is_totally_positive(F.tp_unit()));
    CHECK(F.tp_unit() == F.mul(F.fund_unit(), F.fund_unit()));
    CHECK(F.norm(F.diff_gen()) == F.disc());
    CHECK(F.is_totally_positive(F.diff_gen()));
    // no totally positive unit strictly between 1 and eps+
    const double e1 = F.embed(F.tp_unit(), 0);
    for (long x = -200; x <= 200; ++x) {
      for (long y = -200; y <= 200; ++y) {
        const FieldElem u = fe(x, y);
        if (F.norm(u) != 1 || !F.is_totally_positive(u)) continue;
        const double s = F.embed(u, 0);
        CHECK_FALSE((s > 1 + 1e-12 && s < e1 - 1e-12));
      }
    }
  }
}

TEST_CASE("unsupported radicands are rejected") {
  CHECK_THROWS_AS(make_field(12), Error);
  CHECK_THROWS_AS(make_field(3), Error);
  try {
    make_field(12);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedField);
  }
}

TEST_CASE("norm and trace") {
  const FieldContext& F = make_field(5);
  CHECK(F.norm(F.omega()) == -1);
  CHECK(F.trace(F.omega()) == 1);
  CHECK(F.norm(FieldElem(1)) == 1);
  CHECK(F.trace(FieldElem(1)) == 2);
  CHECK(F.norm(fe(2, 1)) == 5);
  CHECK(F.trace(fe(2, 1)) == 5);
}

TEST_CASE("total positivity") {
  const FieldContext& F = make_field(5);
  CHECK(F.is_totally_positive(F.tp_unit()));
  CHECK_FALSE(F.is_totally_positive(F.omega()));
  CHECK_FALSE(F.is_totally_positive(FieldElem(-1)));
}

TEST_CASE("multiplicativity of norm, additivity of trace") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> d(-60, 60);
  for (int m : supported_radicands()) {
    const FieldContext& F = make_field(m);
    for (int i = 0; i < 300; ++i) {
      const FieldElem a{Rational(d(rng), 1 + std::abs(d(rng))), Rational(d(rng))};
      const FieldElem b{Rational(d(rng)), Rational(d(rng), 1 + std::abs(d(rng)))};
      CHECK(F.norm(F.mul(a, b)) == F.norm(a) * F.norm(b));
      CHECK(F.trace(a + b) == F.trace(a) + F.trace(b));
      if (!b.is_zero()) CHECK(F.mul(F.div(a, b), b) == a);
    }
  }
}

TEST_CASE("ext_gcd examples") {
  const FieldContext& F = make_field(5);
  auto r = F.ext_gcd(fe(7, 3), FieldElem(0));
  CHECK(r.g == fe(7, 3));
  CHECK(r.u == FieldElem(1));
  CHECK(r.v == FieldElem(0));

  r = F.ext_gcd(FieldElem(2), F.omega());
  CHECK(std::abs(F.norm(r.g).get_d()) == 1);

  r = F.ext_gcd(FieldElem(3), FieldElem(7));
  CHECK(std::abs(F.norm(r.g).get_d()) == 1);
  CHECK(F.mul(r.u, FieldElem(3)) + F.mul(r.v, FieldElem(7)) == r.g);
}

TEST_CASE("ext_gcd on random pairs") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> d(-50, 50);
  for (int m : supported_radicands()) {
    const FieldContext& F = make_field(m);
    for (int i = 0; i < 1000; ++i) {
      const FieldElem a = fe(d(rng), d(rng));
      const FieldElem b = fe(d(rng), d(rng));
      if (a.is_zero() && b.is_zero()) continue;
      const auto r = F.ext_gcd(a, b);
      CHECK(F.mul(r.u, a) + F.mul(r.v, b) == r.g);
      if (!a.is_zero()) CHECK(F.divides(r.g, a));
      if (!b.is_zero()) CHECK(F.divides(r.g, b));

      OElem u, v;
      const OElem g = F.ext_gcd(F.to_int(a), F.to_int(b), u, v);
      CHECK(F.mul(u, F.to_int(a)) + F.mul(v, F.to_int(b)) == g);
      CHECK(std::llabs(F.norm(g)) == std::abs(F.norm(r.g).get_num().get_si()));
    }
  }
}

TEST_CASE("orbit representatives") {
  const FieldContext& F = make_field(5);
  auto [r1, j1] = F.tp_orbit_rep(FieldElem(1));
  CHECK(r1 == FieldElem(1));
  CHECK(j1 == 0);
  auto [r2, j2] = F.tp_orbit_rep(F.tp_unit());
  CHECK(r2 == FieldElem(1));
  CHECK(j2 == 1);

  // scan j in [-5, 5] for the window member of the orbit of 2 + omega
  const FieldElem nu = F.mul(F.tp_unit_pow(2), fe(2, 1));
  FieldElem expected;
  long expected_j = 0;
  int hits = 0;
  for (long j = -5; j <= 5; ++j) {
    const FieldElem c = F.mul(F.tp_unit_pow(-j), nu);
    if (F.in_window(c)) {
      expected = c;
      expected_j = j;
      ++hits;
    }
  }
  REQUIRE(hits == 1);
  auto [r3, j3] = F.tp_orbit_rep(nu);
  CHECK(r3 == expected);
  CHECK(j3 == expected_j);

  CHECK_THROWS_AS(F.tp_orbit_rep(F.omega()), Error);
}

TEST_CASE("orbit representative idempotence and unit invariance") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> d(-40, 40);
  for (int m : supported_radicands()) {
    const FieldContext& F = make_field(m);
    int seen = 0;
    while (seen < 200) {
      const FieldElem nu = fe(d(rng), d(rng));
      if (!F.is_totally_positive(nu)) continue;
      ++seen;
      const auto [r, j] = F.tp_orbit_rep(nu);
      CHECK(F.mul(F.tp_unit_pow(j), r) == nu);
      const auto [rr, jj] = F.tp_orbit_rep(r);
      CHECK(rr == r);
      CHECK(jj == 0);
      for (long k = -3; k <= 3; ++k) CHECK(F.tp_orbit_rep(F.mul(F.tp_unit_pow(k), nu)).first == r);
      const auto [ri, ji] = F.tp_orbit_rep(F.to_int(nu));
      CHECK(F.to_field(ri) == r);
      CHECK(ji == j);
    }
  }
}

TEST_CASE("orbit enumeration") {
  const FieldContext& F = make_field(5);
  const auto reps = F.enumerate_tp_orbits(Rational(4));
  auto has = [&](const FieldElem& a) { return std::find(reps.begin(), reps.end(), a) != reps.end(); };
  CHECK(has(FieldElem(1)));
  CHECK(has(FieldElem(2)));
  CHECK_FALSE(has(F.tp_unit()));
  CHECK(F.enumerate_tp_orbits(Rational(3, 2)).empty());

  for (int m : supported_radicands()) {
    const FieldContext& G = make_field(m);
    const auto all = G.enumerate_tp_orbits(Rational(40));
    std::set<FieldElem> uniq;
    for (const auto& a : all) {
      CHECK(G.tp_orbit_rep(a).first == a);
      uniq.insert(a);
    }
    CHECK(uniq.size() == all.size());
    // brute-force count of orbits with a representative of trace <= 40
    std::set<FieldElem> brute;
    for (long x = -200; x <= 200; ++x) {
      for (long y = -200; y <= 200; ++y) {
        const FieldElem a = fe(x, y);
        if (!G.is_totally_positive(a) || G.trace(a) > 40) continue;
        brute.insert(G.tp_orbit_rep(a).first);
      }
    }
    std::set<FieldElem> windowed;
    for (const auto& a : brute)
      if (G.trace(a) <= 40) windowed.insert(a);
    CHECK(windowed == uniq);
    const auto ints = G.enumerate_tp_orbits_int(40);
    CHECK(ints.size() == all.size());
  }
}

TEST_CASE("total positivity agrees with certified embeddings") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> d(-1000, 1000);
  for (int m : supported_radicands()) {
    const FieldContext& F = make_field(m);
    for (int i = 0; i < 300; ++i) {
      const FieldElem a{Rational(d(rng), 1 + std::abs(d(rng))), Rational(d(rng), 1 + std::abs(d(rng)))};
      if (a.is_zero()) continue;
      bool pos = true;
      for (int k = 0; k < 2; ++k) {
        const auto [lo, hi] = F.embed_interval(a, k, 128);
        CHECK(lo <= hi);
        CHECK((lo > 0 || hi < 0));
        pos = pos && lo > 0;
      }
      CHECK(pos == F.is_totally_positive(a));
    }
  }
}

TEST_CASE("element serialization round-trips") {
  const FieldElem a{Rational(-3, 7), Rational(5, 2)};
  CHECK(parse_elem(format_elem(a)) == a);
  CHECK(parse_elem("1,0") == FieldElem(1));
}
