#include "ffmc/reps/character_group.hpp"

namespace ffmc::reps {

CharacterGroup character_group(const PolyRing& R, const Modulus& m) {
  const Modulus mod = make_modulus(R, m.finite_part, m.infinity_multiplicity);
  auto ctx = std::make_shared<const RayClassContext>(R, mod);
  CharacterGroup G;
  G.kind = "rayclass";
  G.modulus = mod;
  const std::size_t k = ctx->primes.size();
  std::uint64_t total = 1;
  for (const auto& K : ctx->fields) {
    G.component_orders.push_back(K->unit_order());
    total *= K->unit_order();
    if (total > (1u << 22)) throw Error(ErrorCode::ResourceLimit, "ray class group too large to enumerate");
  }

  // Delta: generators e_i of the cyclic components; constants killed when infinity is absent.
  IntMatrix rel;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Integer> row(k, 0);
    row[i] = G.component_orders[i];
    rel.push_back(row);
  }
  const FqPoly gamma = R.constant(R.field().primitive_element());
  std::vector<std::uint64_t> const_logs;
  for (const auto& K : ctx->fields) const_logs.push_back(K->dlog(gamma));
  if (mod.infinity_multiplicity == 0) {
    std::vector<Integer> row;
    for (auto x : const_logs) row.emplace_back(x);
    rel.push_back(row);
  }
  G.structure = abelian_invariants(rel, k);

  std::vector<std::uint64_t> a(k, 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t t = idx;
    for (std::size_t i = 0; i < k; ++i) {
      a[i] = t % G.component_orders[i];
      t /= G.component_orders[i];
    }
    if (mod.infinity_multiplicity == 0) {
      // Trivial on constants: sum a_i log_i(gamma) / N_i is an integer.
      Integer num = 0;
      Integer den = 1;
      for (auto N : G.component_orders) den *= N;
      for (std::size_t i = 0; i < k; ++i) num += Integer(a[i]) * const_logs[i] * (den / G.component_orders[i]);
      if (num % den != 0) continue;
    }
    auto src = std::make_shared<const RayClassSource>(ctx, a, G.characters.size());
    G.characters.emplace_back(R, std::vector<CharacterRep::Factor>{{src, 1}}, 1, 0, 0);
    G.exponent_tuples.push_back(a);
  }
  if (Integer(G.characters.size()) != G.structure.order())
    throw Error(ErrorCode::InternalCountError, "character count differs from the group order");
  return G;
}

CharacterGroup kummer_group(const PolyRing& R, const FqPoly& f, unsigned m) {
  auto src = std::make_shared<const KummerSource>(R, f, m);
  CharacterGroup G;
  G.kind = "kummer";
  G.modulus = src->conductor(1);
  G.component_orders = {m};
  G.structure.torsion = m > 1 ? std::vector<Integer>{Integer(m)} : std::vector<Integer>{};
  for (unsigned j = 0; j < m; ++j) G.characters.emplace_back(R, std::vector<CharacterRep::Factor>{{src, j}}, 1, 0, 0);
  return G;
}

CharacterRep character_from_descriptor(const PolyRing& R, const Descriptor& d) {
  CharacterRep base(R);
  if (d.kind == "kummer") {
    base = kummer_character(R, R.parse(d.poly), d.m, d.power);
  } else if (d.kind == "rayclass") {
    const FqPoly fin = R.parse(d.poly);
    CharacterGroup G = character_group(R, make_modulus(R, fin, d.infinity_multiplicity));
    if (d.power >= G.size())
      throw Error(ErrorCode::InvalidArgument, "ray class character index " + std::to_string(d.power) + " out of range (group order " +
                                                  std::to_string(G.size()) + ")");
    base = G[d.power];
  } else if (d.kind != "trivial") {
    throw Error(ErrorCode::InvalidArgument, "unknown character kind '" + d.kind + "'");
  }
  if (d.twist_zeta_order == 0) throw Error(ErrorCode::InvalidArgument, "twist_zeta_order must be >= 1");
  base = constant_field_twist(base, d.twist_zeta_order, d.twist_exponent);
  return tate_twist(base, d.tate_weight);
}

}  // namespace ffmc::reps
