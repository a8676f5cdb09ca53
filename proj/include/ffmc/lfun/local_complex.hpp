#pragma once

#include <vector>

#include "ffmc/lfun/lfunction.hpp"

namespace ffmc::lfun {

using CycMatrix = std::vector<std::vector<CyclotomicInteger>>;

/// Two-term complex D^0 -> D^1 at a place of degree d, both terms equal to the
/// tamely-invariant space with Frobenius phi and a finite-order inertia generator tau
/// satisfying tau phi = phi tau^{q^d}. Differential id - tau; Frobenius acts on D^1
/// by phi * sum_{m < q^d} tau^m.
class LocalFactorComplex {
 public:
  LocalFactorComplex(unsigned order, std::uint64_t q, unsigned degree, CycMatrix phi, CycMatrix tau);
  /// Rank 1 on T^{I_v} (rank 0 at ramified places), tau trivial.
  static LocalFactorComplex from_character(const CharacterRep& chi, const Place& v);

  std::size_t rank() const { return phi_.size(); }
  const CycMatrix& frobenius_d0() const { return phi_; }
  const CycMatrix& frobenius_d1() const { return frob1_; }
  const CycMatrix& differential() const { return diff_; }
  /// Multiplicative order of tau.
  std::uint64_t tau_order() const { return tau_order_; }

  /// tau phi == phi tau^{q^d}
  bool relation_holds() const;
  /// differential * Frob_{D^0} == Frob_{D^1} * differential
  bool is_equivariant() const;
  /// det(1 - t^d Frob | D^1) / det(1 - t^d Frob | D^0)
  LPolynomial factor() const;

 private:
  unsigned n_;
  std::uint64_t q_;
  unsigned d_;
  CycMatrix phi_, tau_, frob1_, diff_;
  std::uint64_t tau_order_ = 1;
};

CycMatrix mat_mul(const CycMatrix& a, const CycMatrix& b);
CycMatrix mat_identity(unsigned order, std::size_t dim);
/// det(1 - t^d M) as a polynomial in t (Laplace expansion; small dimensions only).
CycPoly det_one_minus(const CycMatrix& M, unsigned d);

}  // namespace ffmc::lfun
