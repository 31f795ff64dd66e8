#include "hilbert/numeric.hpp"

#include <cmath>

#include "hilbert/error.hpp"

namespace hilbert {

namespace {
unsigned bits_to_digits10(long bits) {
  return static_cast<unsigned>(std::ceil(static_cast<double>(bits) * 0.30102999566398120)) + 1;
}
}  // namespace

PrecisionScope::PrecisionScope(long bits)
    : saved_digits10_(Real::default_precision()) {
  Real::default_precision(bits_to_digits10(bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_digits10_); }

long current_precision_bits() {
  return static_cast<long>(std::floor(Real::default_precision() / 0.30102999566398120));
}

Real with_precision(const Real& x, long bits) { return Real(x, bits_to_digits10(bits)); }

Real real_pi() {
  Real r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

Real to_real(const Rational& q) {
  Real num = to_real(Integer(q.get_num()));
  Real den = to_real(Integer(q.get_den()));
  return num / den;
}

Real to_real(const Integer& z) {
  Real r;
  mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
  return r;
}

double to_double(const Real& r) { return r.convert_to<double>(); }

Integer factorial(unsigned n) {
  Integer out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

Integer binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

Rational rational_pow(const Rational& base, long exponent) {
  if (exponent == 0) return 1;
  if (base == 0) {
    if (exponent < 0) throw Error(ErrorCode::DomainError, "zero to a negative power");
    return 0;
  }
  unsigned long e = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  Rational out = exponent > 0 ? Rational(num, den) : Rational(den, num);
  out.canonicalize();
  return out;
}

}  // namespace hilbert
