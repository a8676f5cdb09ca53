#pragma once

#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "ffmc/base/cyclotomic.hpp"
#include "ffmc/base/place.hpp"
#include "ffmc/base/residue_field.hpp"

namespace ffmc::reps {

/// Squarefree monic finite part times infinity^(0 or 1).
struct Modulus {
  FqPoly finite_part;
  unsigned infinity_multiplicity = 0;

  unsigned degree() const { return static_cast<unsigned>(finite_part.degree()) + infinity_multiplicity; }
  friend bool operator==(const Modulus& a, const Modulus& b) {
    return a.finite_part == b.finite_part && a.infinity_multiplicity == b.infinity_multiplicity;
  }
};

Modulus make_modulus(const PolyRing& R, const FqPoly& finite_part, unsigned infinity_multiplicity);
bool divides(const PolyRing& R, const Modulus& m, const Place& v);

/// Frobenius data of a rank-1 character at one place.
struct LocalData {
  bool ramified = false;
  std::uint64_t exponent = 0;  // Frobenius acts by zeta_order^exponent
};

/// Configuration-level description of a character.
struct Descriptor {
  std::string kind = "trivial";  // kummer | rayclass | trivial
  std::string poly;              // f for kummer, finite part of the modulus for rayclass
  unsigned m = 1;
  unsigned infinity_multiplicity = 0;
  std::uint64_t power = 1;           // kummer: chi^power; rayclass: character index
  unsigned twist_zeta_order = 1;
  std::uint64_t twist_exponent = 0;
  int tate_weight = 0;
};

/// A finite-order character with values in mu_order; powers are evaluated directly.
class CharacterSource {
 public:
  virtual ~CharacterSource() = default;
  virtual unsigned order() const = 0;
  virtual LocalData local(const Place& v, std::uint64_t power) const = 0;
  virtual Modulus conductor(std::uint64_t power) const = 0;
  virtual std::string describe(std::uint64_t power) const = 0;
  /// Descriptor fields other than the twist/weight ones.
  virtual Descriptor descriptor(std::uint64_t power) const = 0;
};

/// m-th power residue symbol of f.
class KummerSource : public CharacterSource {
 public:
  KummerSource(const PolyRing& R, FqPoly f, unsigned m);

  unsigned order() const override { return m_; }
  LocalData local(const Place& v, std::uint64_t power) const override;
  Modulus conductor(std::uint64_t power) const override;
  std::string describe(std::uint64_t power) const override;
  Descriptor descriptor(std::uint64_t power) const override;

  const FqPoly& f() const { return f_; }
  /// Exponent s with Res(v, g)^((q-1)/m) = mu^s, mu = gamma^((q-1)/m) for the primitive gamma of F_q.
  std::uint64_t symbol_exponent(FieldElem norm) const;
  /// Symbol of f at a finite place coprime to f, through the norm Res(v, f) (memoized for low degrees).
  std::uint64_t symbol_at(const Place& v) const;

 private:
  PolyRing R_;
  FqPoly f_;
  unsigned m_;
  std::vector<std::pair<FqPoly, unsigned>> factors_;
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<std::uint64_t, std::uint32_t> memo_;
};

/// Primes of a squarefree modulus with their residue fields, shared by all
/// characters of one ray class group.
struct RayClassContext {
  PolyRing R;
  Modulus modulus;
  std::vector<FqPoly> primes;
  std::vector<std::shared_ptr<const ResidueField>> fields;

  RayClassContext(const PolyRing& ring, Modulus m);
};

/// One component character of (F_q[t]/P_i)^x per prime of the modulus.
class RayClassSource : public CharacterSource {
 public:
  /// exponents[i] in Z/(q^{deg P_i} - 1): chi(x) = prod zeta_{N_i}^{a_i dlog_i(x)}.
  RayClassSource(std::shared_ptr<const RayClassContext> ctx, std::vector<std::uint64_t> exponents,
                 std::uint64_t index);

  unsigned order() const override { return order_; }
  LocalData local(const Place& v, std::uint64_t power) const override;
  Modulus conductor(std::uint64_t power) const override;
  std::string describe(std::uint64_t power) const override;
  Descriptor descriptor(std::uint64_t power) const override;

  /// Exponent of chi^power on a unit residue class x mod the finite part.
  std::uint64_t exponent_on(const FqPoly& x, std::uint64_t power) const;
  bool is_even(std::uint64_t power) const;

 private:
  std::shared_ptr<const RayClassContext> ctx_;
  const PolyRing& R_;
  const Modulus& modulus_;
  const std::vector<FqPoly>& primes_;
  const std::vector<std::shared_ptr<const ResidueField>>& fields_;
  std::vector<std::uint64_t> exps_;
  std::uint64_t index_;
  unsigned order_;
  bool component_trivial(std::size_t i, std::uint64_t power) const;
};

/// Rank-1 representation: product of source powers, times a constant-field
/// twist v -> zeta_k^{a deg v}, times chi_cyc^w (Frobenius value q^{w deg v}).
class CharacterRep {
 public:
  struct Factor {
    std::shared_ptr<const CharacterSource> source;
    std::uint64_t power;
  };

  explicit CharacterRep(const PolyRing& R) : R_(R) {}
  CharacterRep(const PolyRing& R, std::vector<Factor> factors, unsigned twist_order, std::uint64_t twist_exponent,
               int weight);

  const PolyRing& ring() const { return R_; }
  std::uint64_t q() const { return R_.q(); }
  const std::vector<Factor>& factors() const { return factors_; }
  unsigned twist_order() const { return twist_order_; }
  std::uint64_t twist_exponent() const { return twist_exponent_; }
  int weight() const { return weight_; }

  /// n with all Frobenius root-of-unity parts in mu_n.
  unsigned value_order() const;
  Modulus conductor() const;
  /// True when no source contributes (the character is a constant-field twist of chi_cyc^w).
  bool is_geometrically_trivial() const;
  bool is_trivial() const { return is_geometrically_trivial() && twist_exponent_ % twist_order_ == 0 && weight_ == 0; }
  bool is_tame_everywhere() const;

  /// Root-of-unity part of Frobenius in Z/value_order(), or ramified.
  LocalData local(const Place& v) const;
  /// zeta^e q^{w deg v} in Z[zeta_value_order], or nullopt at ramified places.
  std::optional<CyclotomicInteger> frobenius_value(const Place& v) const;
  /// Frobenius value with the weight dropped (root of unity only).
  std::optional<CyclotomicInteger> root_value(const Place& v) const;

  std::string describe() const;
  Descriptor descriptor() const;

 private:
  PolyRing R_;
  std::vector<Factor> factors_;
  unsigned twist_order_ = 1;
  std::uint64_t twist_exponent_ = 0;
  int weight_ = 0;
};

CharacterRep trivial_character(const PolyRing& R);
CharacterRep kummer_character(const PolyRing& R, const FqPoly& f, unsigned m, std::uint64_t power = 1);
/// chi * zeta^{deg v} for a root of unity zeta.
CharacterRep constant_field_twist(const CharacterRep& chi, const CyclotomicInteger& zeta);
CharacterRep constant_field_twist(const CharacterRep& chi, unsigned zeta_order, std::uint64_t exponent);
/// Inverts the root-of-unity part and raises the cyclotomic weight by one.
CharacterRep dual_tate_twist(const CharacterRep& chi);
/// chi^{-1}: inverse root-of-unity part and weight -w.
CharacterRep dual(const CharacterRep& chi);
CharacterRep tate_twist(const CharacterRep& chi, int w);
CharacterRep power(const CharacterRep& chi, std::uint64_t j);
/// Product of two characters; factors of the same source merge, distinct sources
/// must have disjoint ramification.
CharacterRep multiply(const CharacterRep& a, const CharacterRep& b);

struct InertiaInvariants {
  unsigned rank = 0;
  std::optional<CyclotomicInteger> frobenius;
};
InertiaInvariants inertia_invariants(const CharacterRep& chi, const Place& v);

/// Materializes a descriptor.
CharacterRep character_from_descriptor(const PolyRing& R, const Descriptor& d);

}  // namespace ffmc::reps
