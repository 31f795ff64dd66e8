#pragma once

#include <complex>
#include <cstdint>

#include <boost/multiprecision/mpfr.hpp>
#include <gmpxx.h>

namespace hilbert {

using Integer = mpz_class;
using Rational = mpq_class;

/// Variable-precision binary float. Precision is taken from the calling
/// thread's default; see PrecisionScope.
using Real = boost::multiprecision::mpfr_float;

/// Hot-path complex arithmetic (evaluators, coset sums).
using Complex = std::complex<double>;

/// Sets the thread-default Real precision (in bits) for the scope lifetime.
class PrecisionScope {
 public:
  explicit PrecisionScope(long bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_digits10_;
};

long current_precision_bits();

/// Copy of x rounded to the given precision (copies otherwise keep the source precision).
Real with_precision(const Real& x, long bits);

Real real_pi();
Real to_real(const Rational& q);
Real to_real(const Integer& z);
double to_double(const Real& r);

/// n! and binomial coefficients, exact.
Integer factorial(unsigned n);
Integer binomial(long n, long k);

/// Rational power with integer exponent (negative allowed, base nonzero).
Rational rational_pow(const Rational& base, long exponent);

}  // namespace hilbert
