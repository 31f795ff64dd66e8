#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hilbert/ideals.hpp"

namespace hilbert {

/// Every ideal of norm <= max_norm with its factorization. Shared by all series
/// of the same field and bound.
struct IdealTable {
  std::int64_t max_norm = 0;
  std::vector<Ideal> ideals;
  std::map<Ideal, std::size_t> index;
  std::vector<std::vector<std::pair<PrimeIdealData, int>>> factors;

  std::optional<std::size_t> find(const Ideal& I) const;
};

const IdealTable& ideal_table(const FieldContext& F, std::int64_t max_norm);

/// Ideal-indexed coefficients, complete up to max_norm. T is Rational or Real.
template <class T>
class IdealCoeffSeries {
 public:
  IdealCoeffSeries(const FieldContext& F, std::int64_t max_norm, long weight = 0, std::string label = {});

  const FieldContext& field() const { return *F_; }
  std::int64_t max_norm() const { return table_->max_norm; }
  const IdealTable& table() const { return *table_; }
  const std::vector<Ideal>& ideals() const { return table_->ideals; }
  const std::vector<T>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  long weight = 0;
  std::string label;

  /// Throws InsufficientTruncation when N(I) > max_norm.
  const T& at(const Ideal& I) const;
  void set(const Ideal& I, T value);
  const T& operator[](std::size_t i) const { return values_[i]; }
  T& operator[](std::size_t i) { return values_[i]; }

  /// Same coefficients on a smaller bound.
  IdealCoeffSeries truncate(std::int64_t new_max) const;

 private:
  const FieldContext* F_;
  const IdealTable* table_;
  std::vector<T> values_;

  std::size_t slot(const Ideal& I) const;
};

using ExactSeries = IdealCoeffSeries<Rational>;
using RealSeries = IdealCoeffSeries<Real>;

// Standard series.
ExactSeries unit_series(const FieldContext& F, std::int64_t max_norm);  // 1 at O, else 0
ExactSeries one_series(const FieldContext& F, std::int64_t max_norm);   // zeta_F coefficients
ExactSeries sigma_series(const FieldContext& F, long r, std::int64_t max_norm);
RealSeries to_real(const ExactSeries& A);

template <class T>
IdealCoeffSeries<T> dirichlet_convolve(const IdealCoeffSeries<T>& A, const IdealCoeffSeries<T>& B);
/// Coefficient N(m)^r * A(m).
ExactSeries shift(const ExactSeries& A, long r);
RealSeries shift(const RealSeries& A, const Real& r);

/// Hecke-multiplicative series from its values on prime ideals.
ExactSeries hecke_extend(const FieldContext& F, const std::map<Ideal, Rational>& prime_values, long weight,
                         std::int64_t max_norm);

/// c(a, T_m f) = sum over r containing a + m of N(r)^{k-1} c(a m / r^2), level O.
template <class T>
IdealCoeffSeries<T> hecke_apply(const Ideal& m, const IdealCoeffSeries<T>& f, long k);

/// First pair (m, n) with N(m)N(n) <= bound violating the weight-w product relation.
std::optional<std::pair<Ideal, Ideal>> hecke_relation_failure(const ExactSeries& f, long w, std::int64_t bound);

struct NumericValue {
  Real value;
  Real tail_bound;
};

/// Dedekind zeta of F for real s > 1 as zeta(s) L(s, chi_D).
Real zeta_F_numeric(const FieldContext& F, const Real& s, long prec_bits);
/// Euler product over all primes p <= x with an explicit relative tail bound.
NumericValue zeta_F_euler(const FieldContext& F, const Real& s, std::int64_t x);
/// Direct ideal sum with a tail bound from sum_{n <= t} #{N(a) = n} <= t (1 + log t).
NumericValue zeta_F_direct(const FieldContext& F, const Real& s, std::int64_t x);
Real hurwitz_zeta(const Real& s, const Real& a);
Real riemann_zeta(const Real& s);
Rational bernoulli(unsigned n);

/// Bound on sum_{N(a) > x} N(a)^{-sigma} for sigma > 1.
Real ideal_tail_bound(const Real& sigma, std::int64_t x);

/// L(s, f) with |c(a)| <= C N(a)^growth declared by the caller.
template <class T>
NumericValue L_numeric(const IdealCoeffSeries<T>& f, const Real& s, const Real& growth, const Real& C = Real(1));
template <class T>
NumericValue Lambda_numeric(const IdealCoeffSeries<T>& f, const Real& s, const Real& growth, const Real& C = Real(1));
/// sum c(n,f) c(n,g) N(n)^{-s} for real coefficients.
template <class T>
NumericValue rankin_selberg_numeric(const IdealCoeffSeries<T>& f, const IdealCoeffSeries<T>& g, const Real& s,
                                    const Real& growth, const Real& C = Real(1));

struct Thm45Report {
  bool pass = false;
  std::size_t checked = 0;
  std::optional<Ideal> first_failure;
  Rational lhs_at_failure;
  Rational rhs_at_failure;
};

/// Checks (sigma_{l-1} c) * Z = c * shift(c, l-1) exactly, Z(a^2) = N(a)^{l+m-2}.
Thm45Report verify_thm45_identity(const ExactSeries& f, long l, long m);

nlohmann::json ideal_to_json(const Ideal& I);
Ideal ideal_from_json(const FieldContext& F, const nlohmann::json& j);
nlohmann::json series_to_json(const ExactSeries& A);
nlohmann::json series_to_json(const RealSeries& A);
ExactSeries exact_series_from_json(const FieldContext& F, const nlohmann::json& j);

}  // namespace hilbert
