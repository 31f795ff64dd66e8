#include "hilbert/ideals.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numeric>

#include "hilbert/arith.hpp"
#include "hilbert/error.hpp"

namespace hilbert {

const char* prime_kind_name(PrimeKind kind) {
  switch (kind) {
    case PrimeKind::Split: return "split";
    case PrimeKind::Inert: return "inert";
    case PrimeKind::Ramified: return "ramified";
  }
  return "?";
}

Ideal IdealArith::hnf(const std::vector<OElem>& gens) const {
  // Row-reduce the generating set to {(A, 0), (B, C)}.
  OElem w{0, 0};
  std::int64_t A = 0;
  for (OElem v : gens) {
    if (v.y == 0) {
      A = std::gcd(A, std::llabs(v.x));
      continue;
    }
    if (w.y == 0) {
      A = std::gcd(A, std::llabs(w.x));
      w = v;
      continue;
    }
    std::int64_t u = 0, s = 0;
    const std::int64_t g = arith::ext_gcd(w.y, v.y, u, s);
    const OElem merged = u * w + s * v;
    const OElem killed = (v.y / g) * w - (w.y / g) * v;
    A = std::gcd(A, std::llabs(killed.x));
    w = merged;
  }
  if (w.y < 0) w = -w;
  if (A == 0 || w.y == 0) throw Error(ErrorCode::ZeroGenerator, "lattice is not of full rank");
  const std::int64_t C = w.y;
  const std::int64_t B = arith::floor_mod(w.x, A);
  if (A % C != 0 || B % C != 0) throw Error(ErrorCode::DomainError, "lattice is not an ideal");
  Ideal out;
  out.g = C;
  out.a = A / C;
  out.b = B / C;
  if (out.b >= out.a) out.b %= out.a;
  return out;
}

std::pair<OElem, OElem> IdealArith::basis(const Ideal& I) const {
  return {OElem{I.g * I.a, 0}, OElem{I.g * I.b, I.g}};
}

Ideal IdealArith::from_generator(OElem x) const {
  if (x.is_zero()) throw Error(ErrorCode::ZeroGenerator, "ideal generated by zero");
  Ideal I = hnf({x, F_.mul(x, OElem{0, 1})});
  return with_generator(I, x);
}

Ideal IdealArith::from_generator(const FieldElem& x) const {
  if (x.is_zero()) throw Error(ErrorCode::ZeroGenerator, "ideal generated by zero");
  return from_generator(F_.to_int(x));
}

Ideal IdealArith::mul(const Ideal& I, const Ideal& J) const {
  const auto [a1, a2] = basis(I);
  const auto [b1, b2] = basis(J);
  Ideal out = hnf({F_.mul(a1, b1), F_.mul(a1, b2), F_.mul(a2, b1), F_.mul(a2, b2)});
  if (I.tp_gen && J.tp_gen) out.tp_gen = F_.tp_orbit_rep(F_.mul(*I.tp_gen, *J.tp_gen)).first;
  return out;
}

Ideal IdealArith::gcd(const Ideal& I, const Ideal& J) const {
  const auto [a1, a2] = basis(I);
  const auto [b1, b2] = basis(J);
  return hnf({a1, a2, b1, b2});
}

bool IdealArith::contains(const Ideal& I, OElem x) const {
  if (x.y % I.g != 0) return false;
  const std::int64_t k = x.y / I.g;
  return (x.x - k * I.g * I.b) % (I.g * I.a) == 0;
}

bool IdealArith::divides(const Ideal& J, const Ideal& I) const {
  const auto [a1, a2] = basis(I);
  return contains(J, a1) && contains(J, a2);
}

Ideal IdealArith::conj(const Ideal& I) const {
  const auto [a1, a2] = basis(I);
  Ideal out = hnf({F_.conj(a1), F_.conj(a2)});
  if (I.tp_gen) out.tp_gen = F_.tp_orbit_rep(F_.conj(*I.tp_gen)).first;
  return out;
}

Ideal IdealArith::quotient(const Ideal& I, const Ideal& J) const {
  if (!divides(J, I)) throw Error(ErrorCode::NotDivisible, "ideal quotient is not integral");
  const std::int64_t nj = J.norm();
  const auto [a1, a2] = basis(I);
  const auto [b1, b2] = basis(conj(J));
  std::vector<OElem> gens;
  for (OElem p : {F_.mul(a1, b1), F_.mul(a1, b2), F_.mul(a2, b1), F_.mul(a2, b2)}) {
    if (p.x % nj != 0 || p.y % nj != 0) throw Error(ErrorCode::NotDivisible, "ideal quotient is not integral");
    gens.push_back(OElem{p.x / nj, p.y / nj});
  }
  return with_generator(hnf(gens));
}

Ideal IdealArith::pow(const Ideal& I, int e) const {
  if (e < 0) throw Error(ErrorCode::DomainError, "negative ideal power");
  Ideal out = unit();
  for (int i = 0; i < e; ++i) out = mul(out, I);
  return out;
}

OElem IdealArith::tp_generator(const Ideal& I) const {
  if (I.tp_gen) return *I.tp_gen;
  const auto [a1, a2] = basis(I);
  OElem u, v;
  OElem gen = F_.ext_gcd(a1, a2, u, v);
  if (std::llabs(F_.norm(gen)) != I.norm()) throw Error(ErrorCode::NoGenerator, "gcd does not generate the ideal");
  if (F_.norm(gen) < 0) gen = F_.mul(gen, F_.to_int(F_.fund_unit()));
  if (F_.trace(gen) < 0) gen = -gen;
  if (!F_.is_totally_positive(gen)) throw Error(ErrorCode::NoGenerator, "no totally positive generator");
  return F_.tp_orbit_rep(gen).first;
}

Ideal IdealArith::with_generator(Ideal I) const {
  I.tp_gen = tp_generator(I);
  return I;
}

Ideal IdealArith::with_generator(Ideal I, OElem gen) const {
  if (F_.norm(gen) < 0) gen = F_.mul(gen, F_.to_int(F_.fund_unit()));
  if (F_.trace(gen) < 0) gen = -gen;
  I.tp_gen = F_.tp_orbit_rep(gen).first;
  return I;
}

std::vector<PrimeIdealData> IdealArith::primes_above(std::int64_t p) const {
  if (!arith::is_prime(p)) throw Error(ErrorCode::DomainError, "not a rational prime: " + std::to_string(p));
  const std::int64_t t = F_.omega_trace();
  const std::int64_t n = F_.omega_norm();
  std::vector<std::int64_t> roots;
  for (std::int64_t r = 0; r < p; ++r) {
    if (arith::floor_mod(r * r + t * r + n, p) == 0) roots.push_back(r);
  }
  const int chi = arith::kronecker(F_.disc(), p);
  std::vector<PrimeIdealData> out;
  if (roots.empty()) {
    if (chi != -1) throw Error(ErrorCode::DomainError, "splitting type disagrees with the Kronecker symbol");
    out.push_back({p, PrimeKind::Inert, with_generator(Ideal{p, 1, 0, std::nullopt}), 2});
  } else if (roots.size() == 1) {
    if (chi != 0) throw Error(ErrorCode::DomainError, "splitting type disagrees with the Kronecker symbol");
    out.push_back({p, PrimeKind::Ramified, with_generator(Ideal{1, p, roots[0], std::nullopt}), 1});
  } else {
    if (chi != 1) throw Error(ErrorCode::DomainError, "splitting type disagrees with the Kronecker symbol");
    for (std::int64_t r : roots) out.push_back({p, PrimeKind::Split, with_generator(Ideal{1, p, r, std::nullopt}), 1});
  }
  return out;
}

std::vector<std::pair<PrimeIdealData, int>> IdealArith::factor(const Ideal& I) const {
  std::vector<std::pair<PrimeIdealData, int>> out;
  Ideal rest = I;
  for (const auto& [p, e] : arith::factor(I.norm())) {
    (void)e;
    for (const PrimeIdealData& P : primes_above(p)) {
      int k = 0;
      while (divides(P.ideal, rest)) {
        rest = quotient(rest, P.ideal);
        ++k;
      }
      if (k > 0) out.emplace_back(P, k);
    }
  }
  if (!rest.is_unit()) throw Error(ErrorCode::DomainError, "incomplete ideal factorization");
  return out;
}

std::vector<Ideal> IdealArith::enumerate(std::int64_t max_norm) const {
  std::vector<Ideal> primes;
  for (std::int64_t p : arith::primes_up_to(max_norm)) {
    for (const PrimeIdealData& P : primes_above(p)) {
      if (P.ideal.norm() <= max_norm) primes.push_back(P.ideal);
    }
  }
  std::sort(primes.begin(), primes.end());
  std::vector<Ideal> out;
  std::function<void(std::size_t, const Ideal&)> walk = [&](std::size_t start, const Ideal& cur) {
    out.push_back(cur);
    for (std::size_t i = start; i < primes.size(); ++i) {
      if (cur.norm() * primes[i].norm() > max_norm) break;
      walk(i, mul(cur, primes[i]));
    }
  };
  if (max_norm >= 1) walk(0, unit());
  std::sort(out.begin(), out.end());
  return out;
}

Rational IdealArith::sigma(const Ideal& I, long r) const {
  Rational out = 1;
  for (const auto& [P, e] : factor(I)) {
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

Real IdealArith::sigma_real(const Ideal& I, const Real& r) const {
  Real out = 1;
  for (const auto& [P, e] : factor(I)) {
    const Real q = boost::multiprecision::pow(Real(P.ideal.norm()), r);
    Real s = 0, term = 1;
    for (int i = 0; i <= e; ++i) {
      s += term;
      term *= q;
    }
    out *= s;
  }
  return out;
}

std::vector<Ideal> IdealArith::divisors(const Ideal& I) const {
  std::vector<Ideal> out{unit()};
  for (const auto& [P, e] : factor(I)) {
    const std::size_t base = out.size();
    Ideal pk = unit();
    for (int k = 1; k <= e; ++k) {
      pk = mul(pk, P.ideal);
      for (std::size_t i = 0; i < base; ++i) out.push_back(mul(out[i], pk));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<OElem> IdealArith::residues(const Ideal& q) const {
  std::vector<OElem> out;
  out.reserve(static_cast<std::size_t>(q.norm()));
  for (std::int64_t j = 0; j < q.g; ++j) {
    for (std::int64_t i = 0; i < q.g * q.a; ++i) out.push_back(OElem{i, j});
  }
  return out;
}

OElem IdealArith::reduce(OElem x, const Ideal& q) const {
  const std::int64_t k = arith::floor_div(x.y, q.g);
  x.x -= k * q.g * q.b;
  x.y -= k * q.g;
  x.x = arith::floor_mod(x.x, q.g * q.a);
  return x;
}

bool IdealArith::is_unit_mod(OElem x, const Ideal& q) const {
  if (q.is_unit()) return true;
  if (contains(q, x)) return false;
  return gcd(q, from_generator(x)).is_unit();
}

OElem IdealArith::inv_mod(OElem x, const Ideal& q) const {
  if (q.is_unit()) return OElem{0, 0};
  if (x.is_zero()) throw Error(ErrorCode::NotInvertible, "zero is not invertible");
  OElem u, v;
  const OElem d = F_.ext_gcd(x, tp_generator(q), u, v);
  if (std::llabs(F_.norm(d)) != 1) throw Error(ErrorCode::NotInvertible, "element shares a factor with the modulus");
  return reduce(F_.mul(u, F_.pow(d, -1)), q);
}

FieldElem IdealArith::inv_mod(const FieldElem& x, const Ideal& q) const {
  return F_.to_field(inv_mod(F_.to_int(x), q));
}

std::int64_t IdealArith::ideal_count_oracle(std::int64_t n) const {
  std::int64_t c = 0;
  for (std::int64_t e : arith::divisors(n)) c += arith::kronecker(F_.disc(), e);
  return c;
}

}  // namespace hilbert
