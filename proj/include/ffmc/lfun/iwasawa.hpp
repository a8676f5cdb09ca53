#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ffmc/lfun/lfunction.hpp"
#include "ffmc/reps/character_group.hpp"

namespace ffmc::lfun {

/// (Z/l^N)[zeta_n][Gamma/Gamma^{l^M}], Gamma topologically generated by gamma.
struct IwasawaLevel {
  std::uint64_t ell = 2;
  unsigned N = 1;
  unsigned M = 1;
  unsigned n = 1;

  std::uint64_t modulus() const { return upow(ell, N); }
  std::uint64_t gamma_order() const { return upow(ell, M); }
  friend bool operator==(const IwasawaLevel& a, const IwasawaLevel& b) {
    return a.ell == b.ell && a.N == b.N && a.M == b.M && a.n == b.n;
  }
};

/// Element sum_j c_j gamma^j of the truncated group ring.
class GroupRingElement {
 public:
  GroupRingElement() = default;
  explicit GroupRingElement(const IwasawaLevel& level);
  static GroupRingElement one(const IwasawaLevel& level);

  const IwasawaLevel& level() const { return level_; }
  const std::vector<CyclotomicModular>& coeffs() const { return c_; }
  CyclotomicModular& operator[](std::size_t j) { return c_.at(j); }
  const CyclotomicModular& operator[](std::size_t j) const { return c_.at(j); }

  GroupRingElement operator+(const GroupRingElement& o) const;
  GroupRingElement operator-(const GroupRingElement& o) const;
  GroupRingElement operator*(const GroupRingElement& o) const;
  bool is_zero() const;
  /// Units are detected by solving u x = 1 over Z/l^N with unit pivots.
  std::optional<GroupRingElement> inverse() const;
  /// sum_j c_j zeta_r^{k j} in (Z/l^N)[zeta_lcm(n, r)], r | l^M.
  CyclotomicModular evaluate(unsigned r, std::uint64_t k) const;
  std::string to_string() const;

  friend bool operator==(const GroupRingElement& a, const GroupRingElement& b) {
    return a.level_ == b.level_ && a.c_ == b.c_;
  }
  friend bool operator!=(const GroupRingElement& a, const GroupRingElement& b) { return !(a == b); }

 private:
  IwasawaLevel level_;
  std::vector<CyclotomicModular> c_;
  void check(const GroupRingElement& o) const;
};

/// numerator / denominator; the pair is kept when the denominator is not a unit.
struct IwasawaElement {
  GroupRingElement numerator;
  GroupRingElement denominator;
  bool denominator_unit = true;

  /// numerator * denominator^{-1} when the denominator is a unit.
  std::optional<GroupRingElement> value() const;
  IwasawaElement operator*(const IwasawaElement& o) const;
  /// Exact equality of pairs (not of fractions).
  friend bool operator==(const IwasawaElement& a, const IwasawaElement& b) {
    return a.numerator == b.numerator && a.denominator == b.denominator;
  }
};

/// Coefficients mod l^N, t^k -> gamma^{-k}.
IwasawaElement substitute_gamma(const LPolynomial& L, std::uint64_t ell, unsigned N, unsigned M);

/// Element of (Z/l^N)[zeta_n] read in (Z/l^N)[zeta_m], n | m.
CyclotomicModular lift_modular(const CyclotomicModular& x, unsigned m);

/// Character tuple chi -> L_{Sigma_W, Sigma_V}(base * chi, t) over the dual of Delta.
struct NcL {
  reps::CharacterGroup group;
  CharacterRep base;
  TruncationSpec spec;
  LOptions options;
  std::vector<LPolynomial> entries;
};

NcL assemble_ncl(const reps::CharacterGroup& group, const CharacterRep& base, const TruncationSpec& spec,
                 const LOptions& opt = {});

struct InterpolationResult {
  bool pass = false;
  std::string lhs_numerator, lhs_denominator;
  std::string rhs_numerator, rhs_denominator;
};

/// psi: gamma -> zeta_r^k with r | l^M. Left: substitute_gamma of the tuple entry evaluated at psi.
/// Right: the Euler product of base * chi twisted by psi^{-1} on Frobenius, evaluated at t = 1.
InterpolationResult interpolation_check(const NcL& ncl, std::size_t chi_index, unsigned psi_order,
                                        std::uint64_t psi_exponent, std::uint64_t ell, unsigned N, unsigned M);

}  // namespace ffmc::lfun
