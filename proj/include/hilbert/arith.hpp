#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace hilbert::arith {

bool is_prime(std::int64_t n);
bool is_squarefree(std::int64_t n);
std::vector<std::int64_t> primes_up_to(std::int64_t n);

/// Prime factorization as (p, e) pairs, ascending in p. n >= 1.
std::vector<std::pair<std::int64_t, int>> factor(std::int64_t n);
std::vector<std::int64_t> divisors(std::int64_t n);

/// Kronecker symbol (d / n) for n >= 1.
int kronecker(std::int64_t d, std::int64_t n);

std::int64_t floor_div(std::int64_t a, std::int64_t b);
std::int64_t floor_mod(std::int64_t a, std::int64_t b);
std::int64_t isqrt(std::int64_t n);

/// Extended gcd on integers: returns g >= 0 with u*a + v*b = g.
std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& u, std::int64_t& v);

}  // namespace hilbert::arith
