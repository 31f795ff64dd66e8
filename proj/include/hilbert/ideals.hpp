#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "hilbert/quadfield.hpp"

namespace hilbert {

/// Integral ideal g*(Z*a + Z*(b + omega)) in Hermite normal form, 0 <= b < a.
/// Equality and ordering ignore the cached generator; ordering is by norm first.
struct Ideal {
  std::int64_t g = 1;
  std::int64_t a = 1;
  std::int64_t b = 0;
  std::optional<OElem> tp_gen;

  std::int64_t norm() const { return g * g * a; }
  bool is_unit() const { return g == 1 && a == 1; }

  friend bool operator==(const Ideal& x, const Ideal& y) { return x.g == y.g && x.a == y.a && x.b == y.b; }
  friend bool operator<(const Ideal& x, const Ideal& y) {
    if (x.norm() != y.norm()) return x.norm() < y.norm();
    if (x.g != y.g) return x.g < y.g;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  }
};

enum class PrimeKind { Split, Inert, Ramified };

struct PrimeIdealData {
  std::int64_t p = 0;
  PrimeKind kind = PrimeKind::Inert;
  Ideal ideal;
  int residue_degree = 1;
};

const char* prime_kind_name(PrimeKind kind);

/// Ideal arithmetic over a fixed field. Stateless apart from the field reference.
class IdealArith {
 public:
  explicit IdealArith(const FieldContext& field) : F_(field) {}

  const FieldContext& field() const { return F_; }

  Ideal unit() const { return with_generator(Ideal{}, OElem{1, 0}); }
  Ideal from_generator(const FieldElem& x) const;
  Ideal from_generator(OElem x) const;
  /// Z-basis (g*a, g*(b + omega)).
  std::pair<OElem, OElem> basis(const Ideal& I) const;

  Ideal mul(const Ideal& I, const Ideal& J) const;
  Ideal gcd(const Ideal& I, const Ideal& J) const;
  /// I / J, requires J | I.
  Ideal quotient(const Ideal& I, const Ideal& J) const;
  /// J divides I, i.e. I is contained in J.
  bool divides(const Ideal& J, const Ideal& I) const;
  bool contains(const Ideal& I, OElem x) const;
  Ideal conj(const Ideal& I) const;
  Ideal pow(const Ideal& I, int e) const;

  std::vector<PrimeIdealData> primes_above(std::int64_t p) const;
  std::vector<std::pair<PrimeIdealData, int>> factor(const Ideal& I) const;
  /// All ideals with norm <= max_norm, sorted, each carrying its generator.
  std::vector<Ideal> enumerate(std::int64_t max_norm) const;

  /// Sum over divisors of N(divisor)^r.
  Rational sigma(const Ideal& I, long r) const;
  /// Real-exponent divisor sum, big-float.
  Real sigma_real(const Ideal& I, const Real& r) const;
  std::vector<Ideal> divisors(const Ideal& I) const;

  /// Totally positive canonical generator of I.
  OElem tp_generator(const Ideal& I) const;
  Ideal with_generator(Ideal I) const;
  Ideal with_generator(Ideal I, OElem gen) const;

  // Residue ring O / q.
  std::vector<OElem> residues(const Ideal& q) const;
  OElem reduce(OElem x, const Ideal& q) const;
  bool is_unit_mod(OElem x, const Ideal& q) const;
  OElem inv_mod(OElem x, const Ideal& q) const;
  FieldElem inv_mod(const FieldElem& x, const Ideal& q) const;

  /// Number of ideals of norm exactly n, via sum_{e | n} chi_D(e).
  std::int64_t ideal_count_oracle(std::int64_t n) const;

 private:
  const FieldContext& F_;

  Ideal hnf(const std::vector<OElem>& gens) const;
};

}  // namespace hilbert
