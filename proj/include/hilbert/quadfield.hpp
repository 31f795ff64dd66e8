#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hilbert/numeric.hpp"

namespace hilbert {

/// Exact element x + y*omega of F, rational coordinates on the integral basis (1, omega).
struct FieldElem {
  Rational x;
  Rational y;

  FieldElem() = default;
  FieldElem(Rational x_, Rational y_) : x(std::move(x_)), y(std::move(y_)) {
    x.canonicalize();
    y.canonicalize();
  }
  FieldElem(long v) : x(v), y(0) {}  // NOLINT(google-explicit-constructor)

  bool is_zero() const { return x == 0 && y == 0; }
  bool is_integral() const { return x.get_den() == 1 && y.get_den() == 1; }

  friend FieldElem operator+(const FieldElem& a, const FieldElem& b) { return {a.x + b.x, a.y + b.y}; }
  friend FieldElem operator-(const FieldElem& a, const FieldElem& b) { return {a.x - b.x, a.y - b.y}; }
  friend FieldElem operator-(const FieldElem& a) { return {-a.x, -a.y}; }
  friend FieldElem operator*(const Rational& s, const FieldElem& a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const FieldElem& a, const FieldElem& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator<(const FieldElem& a, const FieldElem& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  }
};

/// Element of the ring of integers with machine-word coordinates, used in hot loops.
struct OElem {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend OElem operator+(OElem a, OElem b) { return {a.x + b.x, a.y + b.y}; }
  friend OElem operator-(OElem a, OElem b) { return {a.x - b.x, a.y - b.y}; }
  friend OElem operator-(OElem a) { return {-a.x, -a.y}; }
  friend OElem operator*(std::int64_t s, OElem a) { return {s * a.x, s * a.y}; }
  friend auto operator<=>(const OElem&, const OElem&) = default;
  bool is_zero() const { return x == 0 && y == 0; }
};

struct ExtGcdResult {
  FieldElem g;
  FieldElem u;
  FieldElem v;
};

/// All constants of a fixed real quadratic field F = Q(sqrt m) of narrow class number one.
/// Instances are immutable and live for the whole program (see make_field).
class FieldContext {
 public:
  explicit FieldContext(int m);

  int radicand() const { return m_; }
  std::int64_t disc() const { return disc_; }
  /// omega^2 = t*omega - n with t = Tr(omega), n = N(omega).
  std::int64_t omega_trace() const { return t_; }
  std::int64_t omega_norm() const { return n_; }
  long embed_prec() const { return embed_prec_; }

  FieldElem omega() const { return {0, 1}; }
  const FieldElem& fund_unit() const { return fund_unit_; }
  const FieldElem& tp_unit() const { return tp_unit_; }
  const FieldElem& diff_gen() const { return diff_gen_; }
  OElem tp_unit_int() const { return tp_unit_int_; }
  OElem diff_gen_int() const { return diff_gen_int_; }

  // Exact arithmetic.
  FieldElem mul(const FieldElem& a, const FieldElem& b) const;
  FieldElem conj(const FieldElem& a) const;
  FieldElem inv(const FieldElem& a) const;
  FieldElem div(const FieldElem& a, const FieldElem& b) const;
  FieldElem pow(const FieldElem& a, long e) const;
  Rational norm(const FieldElem& a) const;
  Rational trace(const FieldElem& a) const;
  bool is_totally_positive(const FieldElem& a) const;
  /// Nonzero and a divides b in O (a, b integral).
  bool divides(const FieldElem& a, const FieldElem& b) const;

  OElem mul(OElem a, OElem b) const;
  OElem conj(OElem a) const { return {a.x + a.y * t_, -a.y}; }
  std::int64_t norm(OElem a) const { return a.x * a.x + t_ * a.x * a.y + n_ * a.y * a.y; }
  std::int64_t trace(OElem a) const { return 2 * a.x + t_ * a.y; }
  bool is_totally_positive(OElem a) const { return norm(a) > 0 && trace(a) > 0; }
  bool divides(OElem a, OElem b) const;
  OElem pow(OElem a, long e) const;  // e >= 0, or a a unit
  FieldElem to_field(OElem a) const { return {a.x, a.y}; }
  /// Throws DomainError when a is not integral or does not fit in 64 bits.
  OElem to_int(const FieldElem& a) const;

  // Embeddings. Index 0 is sigma_1 (sqrt m > 0), index 1 is sigma_2.
  double embed(const FieldElem& a, int i) const;
  double embed(OElem a, int i) const { return static_cast<double>(a.x) + static_cast<double>(a.y) * omega_embed_[i]; }
  Real embed_real(const FieldElem& a, int i) const;
  /// Certified enclosure [lo, hi] of sigma_i(a) at the given precision.
  std::pair<Real, Real> embed_interval(const FieldElem& a, int i, long bits) const;

  // Totally positive unit orbits. The canonical representative of nu*O^{x+}
  // is the member with 1 <= sigma_1/sigma_2 < sigma_1(eps+)/sigma_2(eps+).
  bool in_window(const FieldElem& nu) const;
  bool in_window(OElem nu) const;
  /// Returns (nu0, j) with nu = eps+^j * nu0 and nu0 in the window.
  std::pair<FieldElem, long> tp_orbit_rep(const FieldElem& nu) const;
  std::pair<OElem, long> tp_orbit_rep(OElem nu) const;
  /// Canonical orbit representatives with trace <= bound, sorted by (Tr, N).
  std::vector<FieldElem> enumerate_tp_orbits(const Rational& trace_bound) const;
  std::vector<OElem> enumerate_tp_orbits_int(std::int64_t trace_bound) const;
  /// Every totally positive lattice point with trace <= bound (all unit translates).
  std::vector<OElem> enumerate_tp_points(std::int64_t trace_bound) const;

  FieldElem tp_unit_pow(long j) const;
  OElem tp_unit_pow_int(long j) const;

  /// Norm-Euclidean extended gcd: u*a + v*b = g and (g) = (a) + (b).
  ExtGcdResult ext_gcd(const FieldElem& a, const FieldElem& b) const;
  /// Machine-word version, returns g and sets u, v.
  OElem ext_gcd(OElem a, OElem b, OElem& u, OElem& v) const;

  std::string describe(const FieldElem& a) const;

 private:
  int m_;
  std::int64_t disc_;
  std::int64_t t_;
  std::int64_t n_;
  long embed_prec_ = 192;
  double omega_embed_[2];
  double log_ratio_unit_;  // log(sigma_1(eps+)/sigma_2(eps+))
  FieldElem fund_unit_;
  FieldElem tp_unit_;
  FieldElem diff_gen_;
  OElem tp_unit_int_;
  OElem diff_gen_int_;

  OElem euclid_remainder(OElem a, OElem b) const;
};

/// Supported radicands: norm-Euclidean with a unit of norm -1.
const std::vector<int>& supported_radicands();

/// Returns the interned context for Q(sqrt m). Throws UnsupportedField.
const FieldContext& make_field(int m);

/// JSON-friendly rational pair "x/xd,y/yd".
std::string format_elem(const FieldElem& a);
FieldElem parse_elem(const std::string& text);

}  // namespace hilbert
