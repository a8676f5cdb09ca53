#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ffmc/base/finite_field.hpp"

namespace ffmc {

/// Polynomial in t over F_q, little-endian, no trailing zeros.
struct FqPoly {
  std::vector<FieldElem> c;

  FqPoly() = default;
  explicit FqPoly(std::vector<FieldElem> coeffs) : c(std::move(coeffs)) { normalize(); }

  void normalize() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c.size()) - 1; }
  FieldElem lc() const { return c.empty() ? 0 : c.back(); }
  FieldElem coeff(std::size_t i) const { return i < c.size() ? c[i] : 0; }

  friend bool operator==(const FqPoly& a, const FqPoly& b) { return a.c == b.c; }
  friend bool operator!=(const FqPoly& a, const FqPoly& b) { return a.c != b.c; }
};

class PolyRing {
 public:
  explicit PolyRing(FiniteField field) : F_(std::move(field)) {}

  const FiniteField& field() const { return F_; }
  std::uint64_t q() const { return F_.order(); }

  FqPoly zero() const { return {}; }
  FqPoly one() const { return FqPoly({1}); }
  FqPoly t() const { return FqPoly({0, 1}); }
  FqPoly constant(FieldElem a) const { return FqPoly({a}); }
  FqPoly monomial(FieldElem a, unsigned k) const;
  FqPoly linear(FieldElem root) const;  // t - root

  FqPoly add(const FqPoly& a, const FqPoly& b) const;
  FqPoly sub(const FqPoly& a, const FqPoly& b) const;
  FqPoly neg(const FqPoly& a) const;
  FqPoly scale(const FqPoly& a, FieldElem s) const;
  FqPoly mul(const FqPoly& a, const FqPoly& b) const;
  FqPoly pow(const FqPoly& a, unsigned e) const;
  void divmod(const FqPoly& a, const FqPoly& b, FqPoly& quot, FqPoly& rem) const;
  FqPoly div(const FqPoly& a, const FqPoly& b) const;
  FqPoly mod(const FqPoly& a, const FqPoly& b) const;
  FqPoly mulmod(const FqPoly& a, const FqPoly& b, const FqPoly& m) const { return mod(mul(a, b), m); }
  FqPoly powmod(const FqPoly& a, const Integer& e, const FqPoly& m) const;
  /// Monic gcd (zero if both are zero).
  FqPoly gcd(const FqPoly& a, const FqPoly& b) const;
  FqPoly derivative(const FqPoly& a) const;
  FieldElem eval(const FqPoly& a, FieldElem x) const;
  FqPoly monic(const FqPoly& a) const;

  bool is_squarefree(const FqPoly& a) const;
  bool is_irreducible(const FqPoly& a) const;
  /// Res(a, b) = lc(a)^deg b * prod_{a(x)=0} b(x).
  FieldElem resultant(const FqPoly& a, const FqPoly& b) const;
  /// Monic irreducible factors with multiplicity, in (degree, index) order.
  std::vector<std::pair<FqPoly, unsigned>> factor(const FqPoly& a) const;
  FqPoly radical(const FqPoly& a) const;

  /// Index of a monic polynomial of degree d: sum_{i<d} packed(c_i) q^i.
  std::uint64_t index(const FqPoly& monic_poly) const;
  FqPoly from_index(std::uint64_t idx, unsigned degree) const;

  /// Accepts sums of terms like `3t^2`, `-t`, `{5}t^3`, `7`; `{k}` is the packed
  /// field element k, bare integers are reduced mod p.
  FqPoly parse(const std::string& text) const;
  std::string print(const FqPoly& a) const;
  std::string print_elem(FieldElem a) const;

 private:
  FiniteField F_;
};

}  // namespace ffmc
