#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ffmc/base/cyclotomic.hpp"

namespace ffmc {

/// Polynomial in t over Z[zeta_n], little-endian, no trailing zeros.
struct CycPoly {
  unsigned n = 1;
  std::vector<CyclotomicInteger> c;

  CycPoly() = default;
  explicit CycPoly(unsigned order) : n(order) {}
  CycPoly(unsigned order, std::vector<CyclotomicInteger> coeffs) : n(order), c(std::move(coeffs)) { normalize(); }

  static CycPoly constant(const CyclotomicInteger& a) { return CycPoly(a.order(), {a}); }
  static CycPoly one(unsigned order) { return CycPoly(order, {CyclotomicInteger(order, 1)}); }
  static CycPoly from_integers(unsigned order, const std::vector<Integer>& coeffs);
  /// 1 - a t^d
  static CycPoly binomial(const CyclotomicInteger& a, unsigned d);

  void normalize() {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
  }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  CyclotomicInteger coeff(std::size_t i) const { return i < c.size() ? c[i] : CyclotomicInteger(n); }
  bool is_integral() const;
  std::vector<Integer> to_integers() const;

  friend bool operator==(const CycPoly& a, const CycPoly& b) { return a.n == b.n && a.c == b.c; }
  friend bool operator!=(const CycPoly& a, const CycPoly& b) { return !(a == b); }
};

CycPoly operator+(const CycPoly& a, const CycPoly& b);
CycPoly operator-(const CycPoly& a, const CycPoly& b);
CycPoly operator*(const CycPoly& a, const CycPoly& b);
CycPoly scale(const CycPoly& a, const CyclotomicInteger& s);
/// Product truncated to degree <= deg.
CycPoly mul_trunc(const CycPoly& a, const CycPoly& b, unsigned deg);
CycPoly truncate(const CycPoly& a, unsigned deg);
CycPoly lift(const CycPoly& a, unsigned m);
CyclotomicInteger eval(const CycPoly& a, const CyclotomicInteger& x);
/// a(s t)
CycPoly scale_variable(const CycPoly& a, const CyclotomicInteger& s);
/// Power series inverse of b (b(0) a unit +-1) to degree deg.
CycPoly inverse_series(const CycPoly& b, unsigned deg);
/// a / b when b(0) = +-1 and the division is exact.
std::optional<CycPoly> exact_quotient(const CycPoly& a, const CycPoly& b);
/// Lifts both to a common order.
void unify(CycPoly& a, CycPoly& b);

std::string to_string(const CycPoly& a);

}  // namespace ffmc
