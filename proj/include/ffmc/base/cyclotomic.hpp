#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ffmc/base/integer.hpp"

namespace ffmc {

/// Coefficients of the n-th cyclotomic polynomial, little-endian (cached).
const std::vector<Integer>& cyclotomic_polynomial(unsigned n);

/// Element of Z[zeta_n] = Z[x]/(Phi_n), stored reduced (length phi(n)).
class CyclotomicInteger {
 public:
  CyclotomicInteger() : CyclotomicInteger(1) {}
  explicit CyclotomicInteger(unsigned n);
  CyclotomicInteger(unsigned n, const Integer& v);
  /// Reduces an arbitrary coefficient vector modulo Phi_n.
  static CyclotomicInteger from_coeffs(unsigned n, std::vector<Integer> coeffs);
  static CyclotomicInteger zeta_power(unsigned n, std::int64_t k);

  unsigned order() const { return n_; }
  const std::vector<Integer>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_integer() const;
  Integer to_integer() const;  // requires is_integer()

  CyclotomicInteger operator+(const CyclotomicInteger& o) const;
  CyclotomicInteger operator-(const CyclotomicInteger& o) const;
  CyclotomicInteger operator-() const;
  CyclotomicInteger operator*(const CyclotomicInteger& o) const;
  CyclotomicInteger operator*(const Integer& s) const;
  CyclotomicInteger& operator+=(const CyclotomicInteger& o) { return *this = *this + o; }
  CyclotomicInteger& operator-=(const CyclotomicInteger& o) { return *this = *this - o; }
  CyclotomicInteger& operator*=(const CyclotomicInteger& o) { return *this = *this * o; }
  CyclotomicInteger pow(std::uint64_t e) const;

  friend bool operator==(const CyclotomicInteger& a, const CyclotomicInteger& b) {
    return a.n_ == b.n_ && a.c_ == b.c_;
  }
  friend bool operator!=(const CyclotomicInteger& a, const CyclotomicInteger& b) { return !(a == b); }

  /// Image in Z[zeta_m] for n | m, via zeta_n = zeta_m^{m/n}.
  CyclotomicInteger lift(unsigned m) const;
  /// Galois action zeta -> zeta^a, gcd(a, n) = 1.
  CyclotomicInteger galois(std::int64_t a) const;
  /// k with this == zeta_n^k, if any.
  std::optional<unsigned> root_of_unity_exponent() const;
  /// Exact division; throws unless the quotient lies in Z[zeta_n].
  CyclotomicInteger exact_div(const CyclotomicInteger& d) const;
  /// Norm down to Z.
  Integer norm() const;

  std::vector<std::string> to_strings() const;
  std::string to_string() const;

 private:
  unsigned n_;
  std::vector<Integer> c_;
  void reduce(std::vector<Integer>& v) const;
};

/// Both values lifted to Z[zeta_lcm].
unsigned common_order(unsigned a, unsigned b);

/// Element of (Z/M)[x]/(Phi_n).
class CyclotomicModular {
 public:
  CyclotomicModular() : CyclotomicModular(1, 1) {}
  CyclotomicModular(unsigned n, std::uint64_t modulus);
  CyclotomicModular(unsigned n, std::uint64_t modulus, std::vector<std::uint64_t> coeffs);
  static CyclotomicModular from_int(unsigned n, std::uint64_t modulus, std::int64_t v);

  unsigned order() const { return n_; }
  std::uint64_t modulus() const { return m_; }
  const std::vector<std::uint64_t>& coeffs() const { return c_; }

  bool is_zero() const;
  CyclotomicModular operator+(const CyclotomicModular& o) const;
  CyclotomicModular operator-(const CyclotomicModular& o) const;
  CyclotomicModular operator-() const;
  CyclotomicModular operator*(const CyclotomicModular& o) const;
  CyclotomicModular pow(std::uint64_t e) const;

  friend bool operator==(const CyclotomicModular& a, const CyclotomicModular& b) {
    return a.n_ == b.n_ && a.m_ == b.m_ && a.c_ == b.c_;
  }
  friend bool operator!=(const CyclotomicModular& a, const CyclotomicModular& b) { return !(a == b); }

  std::string to_string() const;

 private:
  unsigned n_;
  std::uint64_t m_;
  std::vector<std::uint64_t> c_;
  void check(const CyclotomicModular& o) const;
};

/// Coefficientwise reduction Z[zeta_n] -> (Z/l^N)[zeta_n].
struct CyclotomicReduction {
  unsigned n = 1;
  std::uint64_t ell = 2;
  unsigned N = 1;
  std::uint64_t modulus = 2;

  CyclotomicModular operator()(const CyclotomicInteger& x) const;
};

CyclotomicReduction cyclotomic_embed_check(unsigned n, std::uint64_t ell, unsigned N);

}  // namespace ffmc
