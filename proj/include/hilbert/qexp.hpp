#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

#include "hilbert/ideals.hpp"

namespace hilbert {

/// Coefficient value: an exact element of F (read through sigma_1) or a complex float.
struct Coeff {
  bool exact = true;
  FieldElem e;
  Complex z{0.0, 0.0};

  static Coeff exact_value(FieldElem v) { return Coeff{true, std::move(v), {}}; }
  static Coeff numeric(Complex v) { return Coeff{false, FieldElem(0), v}; }

  bool is_zero() const { return exact ? e.is_zero() : z == Complex(0.0, 0.0); }
  Complex value(const FieldContext& F) const;
};

Coeff coeff_add(const FieldContext& F, const Coeff& a, const Coeff& b);
Coeff coeff_mul(const FieldContext& F, const Coeff& a, const Coeff& b);

using Point = std::array<Complex, 2>;

/// Truncated Fourier expansion (2 pi i)^p [c0 + sum_nu a(nu) e(nu z)].
/// Completeness: a(nu) is available for every totally positive nu with Tr(nu) <= trace_bound,
/// so every orbit meeting that region has its canonical representative stored.
/// Values on a translate follow a(eps nu) = eps^w a(nu) with w = (k1 - k2)/2.
struct QExpansion {
  const FieldContext* F = nullptr;
  int k1 = 0;
  int k2 = 0;
  Ideal level;
  Coeff const_term;
  std::map<FieldElem, Coeff> coeffs;
  std::int64_t trace_bound = 0;
  long prefactor_pow = 0;
  bool exact = true;
  // Declared growth |a(nu)| <= bound_C * Tr(nu)^bound_exp, used for tail bounds.
  double bound_C = 1.0;
  double bound_exp = 0.0;

  const FieldContext& field() const { return *F; }
  int unit_char() const { return (k1 - k2) / 2; }
  /// Coefficient at any totally positive nu (or 0); throws InsufficientTruncation
  /// when the orbit is not stored and Tr(nu) exceeds the bound.
  Coeff at(const FieldElem& nu) const;
  Coeff at(OElem nu) const;
};

/// Canonical representatives of every orbit containing an element of trace <= T.
std::vector<OElem> orbit_reps_meeting(const FieldContext& F, std::int64_t T);

QExpansion constant_qexp(const FieldContext& F, int k, const Coeff& c, std::int64_t T);

struct EvalResult {
  Complex value;
  double tail_bound = 0.0;
};

/// The j minimising Tr(eps+^j nu Im z) for nu with embeddings (s1, s2), rounded.
long unit_peak(const FieldContext& F, double s1, double s2, const Point& z);

/// Evaluates sum a(nu) sigma_1(nu)^l1 sigma_2(nu)^l2 e(nu z), times (2 pi i)^(p + l1 + l2).
EvalResult qexp_eval(const QExpansion& f, const Point& z, std::array<int, 2> deriv = {0, 0});

QExpansion rankin_cohen(const QExpansion& f, const QExpansion& g, std::array<int, 2> n);
QExpansion scale(const QExpansion& f, const Coeff& alpha);
QExpansion add(const QExpansion& f, const QExpansion& g);

/// 2x2 matrix over F acting on the upper half plane squared.
struct Matrix2 {
  FieldElem a, b, c, d;
};

Point act(const FieldContext& F, const Matrix2& g, const Point& z);
/// Throws NotInGroup unless a, d in O, b in d^-1, c in (delta) level, det a totally positive unit.
void check_in_gamma0(const FieldContext& F, const Matrix2& g, const Ideal& level);
/// det^{-k/2} N(cz + d)^k, componentwise weights.
Complex automorphy_factor(const FieldContext& F, const Matrix2& g, const Point& z, int k1, int k2);

struct DefectResult {
  double defect = 0.0;
  double tail = 0.0;
  Complex lhs;
  Complex rhs;
};

DefectResult modularity_defect(const QExpansion& f, const Matrix2& g, const Point& z);

nlohmann::json qexp_to_json(const QExpansion& f);
nlohmann::json coeff_to_json(const Coeff& c);

void check_upper_half_plane(const Point& z);

}  // namespace hilbert
