#pragma once

#include <vector>

#include "ffmc/base/snf.hpp"
#include "ffmc/reps/character.hpp"

namespace ffmc::reps {

/// Dual group of Delta = (F_q[t]/m)^x / F_q^x (or the full unit group when
/// infinity divides the modulus), or the Kummer group {chi^j}.
class CharacterGroup {
 public:
  std::string kind;  // rayclass | kummer
  Modulus modulus;
  std::vector<std::uint64_t> component_orders;  // q^{deg P_i} - 1 (rayclass) or m (kummer)
  AbelianInvariants structure;                   // invariant factors of Delta
  std::vector<CharacterRep> characters;          // index 0 is the trivial character
  std::vector<std::vector<std::uint64_t>> exponent_tuples;  // rayclass only

  std::size_t size() const { return characters.size(); }
  const CharacterRep& operator[](std::size_t i) const { return characters.at(i); }
  Integer order() const { return structure.order(); }
};

CharacterGroup character_group(const PolyRing& R, const Modulus& m);
CharacterGroup kummer_group(const PolyRing& R, const FqPoly& f, unsigned m);

}  // namespace ffmc::reps
