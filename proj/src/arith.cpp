#include "hilbert/arith.hpp"

#include <cmath>
#include <cstdlib>

namespace hilbert::arith {

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

bool is_squarefree(std::int64_t n) {
  n = std::llabs(n);
  if (n == 0) return false;
  for (const auto& [p, e] : factor(n))
    if (e > 1) return false;
  return true;
}

std::vector<std::int64_t> primes_up_to(std::int64_t n) {
  std::vector<std::int64_t> out;
  if (n < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(n + 1), false);
  for (std::int64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::int64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

std::vector<std::pair<std::int64_t, int>> factor(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> out{1};
  for (const auto& [p, e] : factor(n)) {
    const std::size_t base = out.size();
    std::int64_t pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  return out;
}

int kronecker(std::int64_t d, std::int64_t n) {
  int result = 1;
  while (n % 2 == 0) {
    n /= 2;
    if (d % 2 == 0) return 0;
    const std::int64_t r = floor_mod(d, 8);
    if (r == 3 || r == 5) result = -result;
  }
  // Jacobi symbol (d / n), n odd.
  std::int64_t a = floor_mod(d, n);
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const std::int64_t r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

std::int64_t isqrt(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& u, std::int64_t& v) {
  std::int64_t u0 = 1, v0 = 0, u1 = 0, v1 = 1;
  while (b != 0) {
    const std::int64_t q = floor_div(a, b);
    std::int64_t t = a - q * b;
    a = b;
    b = t;
    t = u0 - q * u1;
    u0 = u1;
    u1 = t;
    t = v0 - q * v1;
    v0 = v1;
    v1 = t;
  }
  if (a < 0) {
    a = -a;
    u0 = -u0;
    v0 = -v0;
  }
  u = u0;
  v = v0;
  return a;
}

}  // namespace hilbert::arith
