#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ffmc/base/error.hpp"

namespace ffmc {

using Integer = boost::multiprecision::cpp_int;

inline std::string to_string(const Integer& x) { return x.str(); }

/// Exponent of the prime p in x. x must be nonzero.
inline int valuation(Integer x, std::uint64_t p) {
  if (x == 0) throw Error(ErrorCode::InvalidArgument, "valuation of zero is undefined");
  if (x < 0) x = -x;
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

inline Integer ipow(Integer base, std::uint64_t e) {
  Integer r = 1;
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

inline std::uint64_t upow(std::uint64_t base, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (base != 0 && r > UINT64_MAX / base) throw Error(ErrorCode::ResourceLimit, "integer power overflows 64 bits");
    r *= base;
  }
  return r;
}

inline std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

inline std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) { return a / gcd_u64(a, b) * b; }

/// Non-negative residue of a modulo m.
inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

/// Distinct prime divisors by trial division.
std::vector<std::uint64_t> prime_divisors(std::uint64_t n);
std::vector<Integer> prime_divisors(Integer n);

bool is_prime(std::uint64_t n);

/// Euler's totient.
std::uint64_t euler_phi(std::uint64_t n);

/// Moebius function.
int moebius(std::uint64_t n);

std::vector<std::uint64_t> divisors(std::uint64_t n);

}  // namespace ffmc
