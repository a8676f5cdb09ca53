#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ffmc/base/place.hpp"
#include "ffmc/base/residue_field.hpp"
#include "ffmc/base/snf.hpp"

namespace ffmc::motives {

constexpr std::uint64_t kDefaultFieldCap = std::uint64_t{1} << 24;

/// F_{q^j} as a table-backed field, with the embedding of F_q.
class BigField {
 public:
  BigField(const FiniteField& base, unsigned j, std::uint64_t cap = kDefaultFieldCap);

  const FiniteField& base() const { return base_; }
  const FiniteField& field() const { return K_; }
  unsigned j() const { return j_; }
  std::uint64_t size() const { return K_.order(); }
  FieldElem embed(FieldElem c) const;
  FqPoly embed(const FqPoly& f) const;
  /// Geometric points of a place, ordered as the Frobenius orbit a, a^q, a^{q^2}, ...
  std::vector<FieldElem> roots(const Place& v) const;

 private:
  FiniteField base_, K_;
  unsigned j_;
  std::vector<FieldElem> base_image_;  // image of each packed element of F_q
};

/// Least j with n | q^j - 1 and deg v | j for every v.
unsigned minimal_degree(std::uint64_t q, const std::vector<Place>& places, std::uint64_t n);

/// Degree-0 part of Pic(P^1, m) over F_{q^j} for a reduced modulus m:
/// (prod of residue fields of m over F_{q^j})^x / F_{q^j}^x.
class RelativePicard {
 public:
  RelativePicard(const PolyRing& R, std::vector<Place> modulus, unsigned j = 1,
                 std::uint64_t cap = kDefaultFieldCap);

  const std::vector<Place>& modulus() const { return modulus_; }
  unsigned j() const { return j_; }
  std::uint64_t field_size() const { return field_size_; }
  /// Orders of the cyclic unit groups, one per component over F_{q^j}.
  const std::vector<Integer>& component_orders() const { return component_orders_; }
  const IntMatrix& relations() const { return relations_; }
  const std::vector<Integer>& invariants() const { return invariants_; }
  Integer order() const;
  /// Order of the n-torsion subgroup.
  Integer torsion_order(std::uint64_t n) const;

  /// Class of a function g in F_q[t] prime to m: its degree and its coordinates
  /// in the invariant-factor basis (one residue per invariant).
  struct Class {
    int degree = 0;
    std::vector<Integer> coords;
    friend bool operator==(const Class& a, const Class& b) = default;
  };
  Class class_of(const FqPoly& g) const;
  Class combine(const Class& a, const Class& b) const;

 private:
  PolyRing R_;
  std::vector<Place> modulus_;
  unsigned j_;
  std::uint64_t field_size_ = 0;
  std::unique_ptr<BigField> big_;
  std::vector<std::shared_ptr<ResidueField>> components_;  // null for infinity
  std::vector<Integer> component_orders_;
  IntMatrix relations_;
  SmithForm snf_;
  std::vector<Integer> invariants_;
  std::vector<std::size_t> invariant_slots_;
};

/// n-torsion of the Picard 1-motive [Div^0_{Z1} -> Pic^0(P^1, Z2)] over F_{q^j}, with the
/// q-power Frobenius. Basis: e_1..e_{s-1} spanning mu_n^{Z2} / mu_n, then lifts of
/// a_i - a_0 (i = 1..r-1) for the geometric points a_i of Z1.
class MotiveTorsion {
 public:
  MotiveTorsion(const PolyRing& R, std::vector<Place> Z1, std::vector<Place> Z2, std::uint64_t n,
                std::optional<unsigned> j = std::nullopt, std::uint64_t cap = kDefaultFieldCap);

  const std::vector<Place>& Z1() const { return Z1_; }
  const std::vector<Place>& Z2() const { return Z2_; }
  std::uint64_t n() const { return n_; }
  std::uint64_t q() const { return q_; }
  unsigned j() const { return j_; }
  unsigned r() const { return static_cast<unsigned>(a_.size()); }
  unsigned s() const { return static_cast<unsigned>(b_.size()); }
  unsigned dimension() const { return r() + s() - 2; }
  /// |H(M tensor^L Z/n)| from the indices of the lattices of the two-term complex.
  const Integer& order() const { return order_; }
  /// Frobenius on the basis, columns are images, entries mod n.
  const std::vector<std::vector<std::uint64_t>>& frobenius() const { return frob_; }
  /// det(t - Frob) mod n, little-endian.
  std::vector<std::uint64_t> charpoly() const;
  /// |ker(Frob - 1)|.
  Integer fixed_point_count() const;
  /// Least k >= 1 with Frob^k = 1.
  std::uint64_t frobenius_order() const;

  /// Coordinates of (lambda, x): lambda in the a_i - a_0 basis, x the exponent vector
  /// of the Z2 coordinates in the cyclic group <omega>, omega^n = generator of F_{q^j}^x.
  std::vector<std::uint64_t> decode(const std::vector<Integer>& lambda, const std::vector<Integer>& x) const;
  /// Element (lambda, x) of the i-th basis vector.
  std::pair<std::vector<Integer>, std::vector<Integer>> basis_element(std::size_t i) const;

 private:
  std::vector<Place> Z1_, Z2_;
  std::uint64_t n_, q_;
  unsigned j_;
  Integer Qm1_;
  std::vector<FieldElem> a_, b_;
  std::vector<bool> a_inf_, b_inf_;
  std::vector<std::size_t> pi_a_, pi_b_;
  std::vector<std::vector<Integer>> dl_;  // dl_[i-1][k] = log f_{a_i - a_0}(b_k)
  Integer order_;
  std::vector<std::vector<std::uint64_t>> frob_;

  std::pair<std::vector<Integer>, std::vector<Integer>> apply_frobenius(const std::vector<Integer>& lambda,
                                                                        const std::vector<Integer>& x) const;
};

struct CheckResult {
  bool pass = false;
  std::string detail;
};

/// Orders agree under Z1 <-> Z2 and charpoly_swap(t) * c0 = t^D charpoly(q / t) mod n.
CheckResult duality_order_check(const PolyRing& R, const std::vector<Place>& Z1, const std::vector<Place>& Z2,
                                std::uint64_t n, std::uint64_t cap = kDefaultFieldCap);

/// |(M_{inf, Z2, n})^{Frob = 1}| = |Pic^0(P^1, Z2)(F_q)[n]|.
CheckResult fixed_points_check(const PolyRing& R, const std::vector<Place>& Z2, std::uint64_t n,
                               std::uint64_t cap = kDefaultFieldCap);

/// Levels ell^1..ell^N over one field: the transition (lambda, g) -> (lambda, ell g) is onto
/// with kernel of order ell^D, and Frobenius at level ell^{k+1} reduces to level ell^k.
CheckResult tower_check(const PolyRing& R, const std::vector<Place>& Z1, const std::vector<Place>& Z2,
                        std::uint64_t ell, unsigned N, std::uint64_t cap = kDefaultFieldCap);

}  // namespace ffmc::motives
