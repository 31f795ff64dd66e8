#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hilbert/lseries.hpp"
#include "hilbert/modforms.hpp"

namespace hilbert {

/// Outcome of one identity check. pass is defect <= tolerance.
struct KernelReport {
  std::string identity;
  nlohmann::json parameters = nlohmann::json::object();
  nlohmann::json lhs;
  nlohmann::json rhs;
  double defect = 0.0;
  double tolerance = 0.0;
  nlohmann::json settings = nlohmann::json::object();
  nlohmann::json details = nlohmann::json::object();
  std::vector<KernelReport> components;
  bool pass = false;
};

nlohmann::json report_to_json(const KernelReport& r);

/// Truncation settings shared by the numeric orchestrators.
struct KernelSettings {
  std::int64_t trace_bound = 16;
  TruncationPolicy policy;
  DirectCutoffs cut;
  double tol = 1e-2;
};

nlohmann::json settings_to_json(const KernelSettings& s);

// ---------------------------------------------------------------- exact helpers

/// Finite sum of q * sqrt(r) over squarefree r: exact values of N^e for half-integral e.
class RadExpr {
 public:
  RadExpr() = default;
  explicit RadExpr(const Rational& q);

  /// n^e for n >= 1; throws DomainError unless 2e is an integer.
  static RadExpr power(std::int64_t n, const Rational& e);

  RadExpr operator+(const RadExpr& o) const;
  RadExpr operator*(const RadExpr& o) const;
  bool operator==(const RadExpr& o) const { return terms_ == o.terms_; }
  bool operator!=(const RadExpr& o) const { return !(*this == o); }

  double to_double() const;
  std::string str() const;

 private:
  std::map<std::int64_t, Rational> terms_;  // squarefree radicand -> coefficient, no zeros
  void add_term(std::int64_t r, const Rational& q);
};

/// q * pi^a * sqrt(D)^b * i^c * prod zeta_F(x)^e with D symbolic and c in {0, 1, 2, 3} folded to {0, 1}.
struct Monomial {
  Rational q{1};
  long pi_pow = 0;
  long sqrtD_pow = 0;
  int i_pow = 0;
  std::map<long, long> zeta_pows;

  Monomial operator*(const Monomial& o) const;
  Monomial pow(long e) const;
  Monomial inverse() const;
  bool operator==(const Monomial& o) const;
  std::string str() const;
};

/// Monomial with rational part q only.
Monomial mono_rational(const Rational& q);
Monomial mono_pi(long a);
Monomial mono_i(int c);
Monomial mono_zeta(long x, long e = 1);
Monomial mono_sqrtD(long b);

// ---------------------------------------------------------------- adelic Poincare series

/// sqrt(D) N(m)^{k-1} (4 pi)^{2(k-1)} / Gamma(k-1)^2.
Real adelic_poincare_scale(const FieldContext& F, const Ideal& m, int k);

struct KernelExpansion {
  QExpansion series;
  double tail_estimate = 0.0;
  double empirical_C = 0.0;
  std::size_t terms = 0;
};

/// sum_{N(m) <= M} N(m)^{s-k} P_m, s <= -1/2.
KernelExpansion cohen_kernel_qexp(const FieldContext& F, double s, int k, std::int64_t T, std::int64_t M,
                                  const TruncationPolicy& policy);

/// zeta_F(k + 1 - s - w) sum_{N(m) <= M} N(m)^{s-k} sigma_{w-s}(m) P_m, s, w < -5/4.
KernelExpansion double_eisenstein_qexp(const FieldContext& F, double s, double w, int k, std::int64_t T,
                                       std::int64_t M, const TruncationPolicy& policy);

// ---------------------------------------------------------------- verifications

/// Coefficient of P_target in sum N(m)^s N(n)^t T_n P_m, collected per common divisor a,
/// against N(a)^{s+t+k-1} N(target)^s sigma_{t-s}(target). hecke_exponent defaults to k - 1.
KernelReport verify_prop53_rearrangement(const FieldContext& F, const Rational& s, const Rational& t, int k,
                                         const Ideal& target, std::int64_t a_norm_bound);
KernelReport verify_prop53_rearrangement(const FieldContext& F, const Rational& s, const Rational& t, int k,
                                         const Ideal& target, std::int64_t a_norm_bound, long hecke_exponent);

/// [E_k, g]_n at z against C(k+n-1, n) times the coset sum of the derivative g^(n) in weight k + l + 2n.
KernelReport verify_cor43(const QExpansion& g, int k, std::array<int, 2> n, const Point& z,
                          const KernelSettings& settings);
/// g = the normalised Eisenstein series of weight l.
KernelReport verify_cor43(const FieldContext& F, int k, int l, std::array<int, 2> n, const Point& z,
                          const KernelSettings& settings);

/// C(k+n-1, n)^2 (-2 pi i)^{2n} N(d)^{-1} sqrt(D) ((4 pi)^{1-m} Gamma(m-1))^2.
Real bracket_petersson_constant(const FieldContext& F, int k, int l, int n);

/// Constant times sum_{N(a) <= M} c(a, f) c(a, g) N(a)^{1+n-m}; |c(f) c(g)| <= C N^growth declared.
template <class T>
NumericValue bracket_petersson_rhs(const IdealCoeffSeries<T>& f, const IdealCoeffSeries<T>& g, int k, int l,
                                   std::array<int, 2> n, std::int64_t M, const Real& growth, const Real& C = Real(1));

/// Ratios |P_m(z)| / N(m)^{k-3/4} from direct coset sums, N(m) <= M.
KernelReport lemma51_bound_report(const FieldContext& F, int k, const Point& z, std::int64_t M,
                                  const DirectCutoffs& cut);

/// The constant of [E_k, E~_l]_n expressed in both routes; exact.
KernelReport thm54_constant_ledger(const FieldContext& F, int k, int l, int n);

/// Eisenstein bracket numerics, the shifted rearrangement and the constant ledger.
KernelReport verify_thm54(const FieldContext& F, int k, int l, int n, const Point& z, const KernelSettings& settings);

}  // namespace hilbert
