#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hilbert/lseries.hpp"
#include "hilbert/qexp.hpp"

namespace hilbert {

// ---------------------------------------------------------------- Eisenstein

enum class EisensteinNorm {
  Normalized,  // coefficients sigma_{k-1}((nu)), constant zeta_F(k)/K_k
  Classical,   // constant zeta_F(k), coefficients K_k sigma_{k-1}((nu))
  Coset,       // constant 1: the coset sum over Gamma_infty \ Gamma of N(cz+d)^{-k}
};

/// Fourier constant K_k = (2 pi)^{2k} / (Gamma(k)^2 D^{k - 1/2}) for even k.
Real eisenstein_constant(const FieldContext& F, int k);

/// Level (n) with n a totally positive generator; coefficients supported on n*O^+.
QExpansion eisenstein_qexp(const FieldContext& F, int k, const Ideal& level, std::int64_t T, EisensteinNorm norm,
                           long prec_bits = 192);

// ---------------------------------------------------------------- kernels

/// Ascending series with guard bits; throws ArgumentTooLarge beyond x_cap.
Real bessel_J(int order, const Real& x, long prec_bits, double x_cap = 64.0);

struct KloostermanValue {
  double re = 0.0;
  double im = 0.0;
  std::int64_t terms = 0;
};

/// Sum over x in (O/q)^x of e(Tr((nu x + mu x*)/c)) with q = (c / delta).
KloostermanValue kloosterman_sum(const FieldContext& F, OElem nu, OElem mu, const FieldElem& c);
void clear_kloosterman_cache();
std::size_t kloosterman_cache_size();

// ---------------------------------------------------------------- Poincare coefficients

struct TruncationPolicy {
  std::int64_t cmax = 100;  // bound on |N(c)|, c in the different
  int eps_window = 3;
  long prec = 192;
  double tol = 1e-10;
  std::int64_t cmax_limit = 3200;
  int eps_window_limit = 12;
  bool escalate = true;
};

struct ConvergenceReport {
  std::int64_t cmax_used = 0;
  int eps_window_used = 0;
  double last_increment = 0.0;
  int escalations = 0;
  bool converged = false;
  std::int64_t c_terms = 0;
};

struct PoincareCoeff {
  double value = 0.0;
  ConvergenceReport report;
};

/// c_k(nu, mu): coefficient at e(nu z) of P_mu(z; k, O, O).
PoincareCoeff poincare_coeff(const FieldContext& F, OElem nu, OElem mu, int k, const TruncationPolicy& policy);

/// Truncated P_mu expansion from the coefficient formula.
QExpansion poincare_qexp(const FieldContext& F, OElem mu, int k, std::int64_t T, const TruncationPolicy& policy,
                         ConvergenceReport* worst = nullptr);

// ---------------------------------------------------------------- direct coset sums

/// Embeddings of a coset matrix: entry[i] = sigma_{i+1}(entry).
struct EmbeddedMatrix {
  std::array<double, 2> a{}, b{}, c{}, d{};
};

/// Seed evaluated at gamma z; receives gamma and z so derivative seeds can use the transformation law.
using SeedFn = std::function<Complex(const EmbeddedMatrix& g, const Point& z, const Point& gz)>;

struct CosetRep {
  FieldElem a, b, c, d;
};

/// Complete (c, d) to a determinant-one matrix, c = delta c'. Throws CompletionFailure.
CosetRep complete_coset(const FieldContext& F, OElem cprime, OElem d);

/// Element of Gamma_0(O) with c = delta eps+^j, d the lattice point nearest -c Re z, and a left
/// translation by beta / delta. Keeps gamma z as high as c != 0 allows.
Matrix2 balanced_group_element(const FieldContext& F, const Point& z, long j, OElem beta);

struct DirectCutoffs {
  std::int64_t cmax = 200;  // bound on |N(c)|
  double d_box = 6.0;       // box half-width in units of |c_i| Im z_i + 1
  double trans_cutoff = 1e-18;
};

struct DirectResult {
  Complex value;
  double estimate = 0.0;
  Complex identity_term;
  std::int64_t cosets = 0;
};

/// Sum over Gamma_infty \ Gamma of prod_i (c_i z_i + d_i)^{-k_i} seed(gamma z).
DirectResult poincare_eval_direct(const FieldContext& F, const SeedFn& seed, std::array<int, 2> k, const Point& z,
                                  const DirectCutoffs& cut, bool include_identity = true);

/// Sum over eps in O^{x+} of e(eps mu w), stopping once terms fall below cutoff times the largest term.
Complex unit_sum_exp(const FieldContext& F, OElem mu, const Point& w, double cutoff = 1e-18);

SeedFn seed_constant(Complex c = {1.0, 0.0});
/// sum_t coeff_t sum_eps e(eps mu_t w)
SeedFn seed_qseries(const FieldContext& F, std::vector<std::pair<OElem, Complex>> terms, double cutoff = 1e-18);

// ---------------------------------------------------------------- seed tools

struct GrowthReport {
  double max_ratio = 0.0;
  FieldElem argmax;
  double exponent = 0.0;
};

/// max over the support of |a_nu| / N(nu)^{k/2 - 2 - eps}.
GrowthReport seed_growth(const FieldContext& F, const std::map<FieldElem, Complex>& phi, int k, double eps);

/// c_0 E_k (coset normalization) + sum c_mu P_mu from the coefficient formula.
QExpansion seed_lift(const FieldContext& F, const std::map<FieldElem, Complex>& phi, int k, std::int64_t T,
                     const TruncationPolicy& policy);

/// Derivatives of the parallel-weight form f at gamma z from derivatives at z:
/// returns (d^l f)(gamma z) for all l <= lmax given the table of (d^r f)(z), r <= lmax.
class DerivativeTransport {
 public:
  DerivativeTransport(int k, std::array<int, 2> lmax,
                      std::vector<std::vector<Complex>> derivs_at_z);
  Complex at(const EmbeddedMatrix& g, const Point& z, std::array<int, 2> l) const;

 private:
  int k_;
  std::array<int, 2> lmax_;
  std::vector<std::vector<Complex>> d_;  // d_[r1][r2] = (d1^r1 d2^r2 f)(z)
};

/// The seed e(mu w) sum_l (-1)^|l| C(k1+n-1, n-l) C(k2+n-1, l) (2 pi i mu)^{n-l} f^{(l)}(w), summed over units.
SeedFn theorem41_seed(const QExpansion& f, OElem mu, int k2, std::array<int, 2> n, const Point& z);

struct Theorem41Report {
  Complex lhs;
  Complex rhs;
  double defect = 0.0;
  double tolerance = 0.0;
  double lhs_tail = 0.0;
  double rhs_estimate = 0.0;
  bool pass = false;
  ConvergenceReport poincare;
};

Theorem41Report theorem41_verify(const QExpansion& f, bool f_cuspidal, OElem mu, int k2, std::array<int, 2> n,
                                 const Point& z, const TruncationPolicy& policy, const DirectCutoffs& cut,
                                 double rel_tol = 1e-6);

}  // namespace hilbert
