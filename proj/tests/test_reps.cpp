#include <doctest.h>

#include <random>

#include "ffmc/base/residue_field.hpp"
#include "ffmc/reps/character_group.hpp"

using namespace ffmc;
using namespace ffmc::reps;

namespace {

FqPoly random_monic(const PolyRing& R, std::mt19937_64& rng, unsigned deg) {
  std::vector<FieldElem> c(deg + 1);
  for (auto& x : c) x = rng() % R.q();
  c[deg] = 1;
  return FqPoly(c);
}

// Euler's criterion computed directly in F_p.
int legendre(std::int64_t a, std::int64_t p) {
  a = mod_floor(a, p);
  if (a == 0) return 0;
  std::int64_t r = 1, b = a, e = (p - 1) / 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r == 1 ? 1 : -1;
}

CyclotomicInteger value_or_zero(const CharacterRep& chi, const Place& v) {
  auto x = chi.root_value(v);
  return x ? *x : CyclotomicInteger(chi.value_order());
}

}  // namespace

TEST_CASE("Kummer character examples") {
  PolyRing R(FiniteField::prime(5));
  auto chi = kummer_character(R, R.parse("t^3-t"), 2);
  CHECK(chi.root_value(parse_place(R, "t-2")) == CyclotomicInteger(2, 1));
  CHECK(!chi.root_value(parse_place(R, "t")).has_value());
  CHECK(chi.local(Place::infinity()).ramified);
  CyclotomicInteger sum(2);
  for (std::uint64_t c = 0; c < 5; ++c) sum += value_or_zero(chi, Place::finite(R.linear(c)));
  CHECK(sum == CyclotomicInteger(2, 2));
  // Oracle: Legendre symbols of c^3 - c.
  int direct = 0;
  for (int c = 0; c < 5; ++c) direct += legendre(c * c * c - c, 5);
  CHECK(direct == 2);
  CHECK(chi.conductor().degree() == 4);
  CHECK_THROWS_AS(kummer_character(R, R.parse("t"), 3), Error);
}

TEST_CASE("Legendre symbol oracle over F_p agrees on all degree-1 places") {
  for (std::int64_t p : {3, 5, 7, 11, 13}) {
    PolyRing R(FiniteField::prime(static_cast<std::uint32_t>(p)));
    auto f = R.parse("t^5+2t+1");
    auto chi = kummer_character(R, f, 2);
    for (std::int64_t c = 0; c < p; ++c) {
      const int expect = legendre(static_cast<std::int64_t>(R.eval(f, static_cast<FieldElem>(c))), p);
      auto v = chi.root_value(Place::finite(R.linear(static_cast<FieldElem>(c))));
      if (expect == 0) {
        CHECK(!v);
      } else {
        CHECK(*v == CyclotomicInteger(2, expect));
      }
    }
  }
}

TEST_CASE("power residue symbol via norms equals direct exponentiation in the residue field") {
  for (std::uint64_t q : {5ull, 7ull, 9ull, 13ull}) {
    PolyRing R(FiniteField::of_order(q));
    const auto& F = R.field();
    std::mt19937_64 rng(q);
    for (auto m : divisors(q - 1)) {
      if (m == 1) continue;
      FqPoly f = random_monic(R, rng, 3);
      f.c[0] = F.add(f.c[0], 1);
      KummerSource src(R, f, static_cast<unsigned>(m));
      const FieldElem mu = F.pow(F.primitive_element(), (q - 1) / m);
      for (const auto& v : enumerate_places(F, 3)) {
        if (v.infinite || R.mod(f, v.poly).is_zero()) continue;
        ResidueField K(R, v.poly);
        const std::uint64_t e = (K.size() - 1) / m;
        const FqPoly direct = K.pow(K.reduce(f), e);
        const auto s = src.local(v, 1).exponent;
        CHECK(direct == R.constant(F.pow(mu, s)));
      }
    }
  }
}

TEST_CASE("multiplicativity of the power residue symbol") {
  std::mt19937_64 rng(77);
  for (std::uint64_t q : {7ull, 13ull}) {
    PolyRing R(FiniteField::of_order(q));
    auto places = enumerate_places(R.field(), 3);
    for (int it = 0; it < 6; ++it) {
      FqPoly f = random_monic(R, rng, 1 + rng() % 4), g = random_monic(R, rng, 1 + rng() % 4);
      const unsigned m = q == 7 ? 3 : 4;
      auto cf = kummer_character(R, f, m), cg = kummer_character(R, g, m), cfg = kummer_character(R, R.mul(f, g), m);
      for (const auto& v : places) {
        if (v.infinite || R.mod(R.mul(f, g), v.poly).is_zero()) continue;
        CHECK((cf.local(v).exponent + cg.local(v).exponent) % m == cfg.local(v).exponent);
      }
    }
  }
}

TEST_CASE("reciprocity on principal divisors") {
  // For m | deg f and monic g = 1 mod rad(f): prod_{P|g} chi(P)^{ord_P g} = chi(inf)^{deg g}.
  std::mt19937_64 rng(5);
  PolyRing R(FiniteField::prime(13));
  const unsigned m = 4;
  for (int it = 0; it < 30; ++it) {
    FqPoly f = random_monic(R, rng, 4);
    f = R.scale(f, 1 + rng() % 12);
    if (!R.is_squarefree(f)) continue;
    auto src = std::make_shared<const KummerSource>(R, f, m);
    CharacterRep chi(R, {{src, 1}}, 1, 0, 0);
    const FqPoly rad = R.radical(f);
    FqPoly h = random_monic(R, rng, 1 + rng() % 3);
    FqPoly g = R.add(R.mul(rad, h), R.one());  // monic, = 1 mod rad f
    std::uint64_t lhs = 0;
    for (const auto& [P, e] : R.factor(g)) lhs += e * chi.local(Place::finite(P)).exponent;
    const std::uint64_t rhs = static_cast<std::uint64_t>(g.degree()) * chi.local(Place::infinity()).exponent;
    CHECK(lhs % m == rhs % m);
  }
}

TEST_CASE("constant field twists and duals") {
  PolyRing R(FiniteField::prime(5));
  auto chi = kummer_character(R, R.parse("t^3-t"), 2);
  auto same = constant_field_twist(chi, CyclotomicInteger(1, 1));
  auto places = enumerate_places(R.field(), 4);
  auto tw = constant_field_twist(chi, CyclotomicInteger(2, -1));
  auto dd = tate_twist(dual_tate_twist(dual_tate_twist(chi)), -2);
  auto tr = dual_tate_twist(trivial_character(R));
  for (const auto& v : places) {
    CHECK(same.root_value(v) == chi.root_value(v));
    CHECK(dd.frobenius_value(v) == chi.frobenius_value(v));
    auto a = chi.root_value(v), b = tw.root_value(v);
    CHECK(a.has_value() == b.has_value());
    if (a) CHECK(*b == (v.degree % 2 ? -*a : *a));
    CHECK(*tr.frobenius_value(v) == CyclotomicInteger(1, ipow(Integer(5), v.degree)));
    auto sd = dual_tate_twist(chi).frobenius_value(v);
    if (a) CHECK(*sd == *a * ipow(Integer(5), v.degree));
  }
}

TEST_CASE("inertia invariants") {
  PolyRing R(FiniteField::prime(5));
  auto chi = kummer_character(R, R.parse("t^3-t"), 2);
  CHECK(inertia_invariants(chi, parse_place(R, "t-2")).rank == 1);
  CHECK(inertia_invariants(chi, parse_place(R, "t")).rank == 0);
  auto tr = tate_twist(trivial_character(R), 2);
  auto inv = inertia_invariants(tr, parse_place(R, "t^2+2"));
  CHECK(inv.rank == 1);
  CHECK(*inv.frobenius == CyclotomicInteger(1, 625));
}

TEST_CASE("character group examples") {
  PolyRing R5(FiniteField::prime(5));
  auto G = character_group(R5, make_modulus(R5, R5.parse("t^2-t"), 0));
  CHECK(G.size() == 4);
  CHECK(G.structure.torsion == std::vector<Integer>{4});
  CHECK(character_group(R5, make_modulus(R5, R5.parse("t"), 0)).size() == 1);
  PolyRing R3(FiniteField::prime(3));
  auto G3 = character_group(R3, make_modulus(R3, R3.parse("t^2+1"), 0));
  CHECK(G3.size() == 4);
  CHECK(G3.structure.torsion == std::vector<Integer>{4});
  CHECK_THROWS_AS(make_modulus(R5, R5.parse("t^2"), 0), Error);
  auto Ginf = character_group(R5, make_modulus(R5, R5.parse("t^2-t"), 1));
  CHECK(Ginf.size() == 16);
}

TEST_CASE("character table orthogonality") {
  for (std::uint64_t q : {3ull, 5ull}) {
    PolyRing R(FiniteField::prime(static_cast<std::uint32_t>(q)));
    for (const char* mod : {"t^2-t", "t^3-t", "t^2+1", "t^3+t+2"}) {
      FqPoly fin = R.parse(mod);
      if (!R.is_squarefree(fin)) continue;
      for (unsigned inf : {0u, 1u}) {
        auto G = character_group(R, make_modulus(R, fin, inf));
        const unsigned n = [&] {
          unsigned acc = 1;
          for (const auto& chi : G.characters) acc = common_order(acc, chi.value_order());
          return acc;
        }();
        // Units mod the finite part.
        std::vector<FqPoly> units;
        for (std::uint64_t i = 0; i < upow(q, fin.degree()); ++i) {
          FqPoly x = R.mod(R.from_index(i, fin.degree()), fin);
          if (R.gcd(x, fin).degree() == 0 && !x.is_zero()) units.push_back(x);
        }
        auto val = [&](std::size_t c, const FqPoly& x) {
          auto src = std::dynamic_pointer_cast<const RayClassSource>(G[c].factors()[0].source);
          return CyclotomicInteger::zeta_power(G[c].value_order(), static_cast<std::int64_t>(src->exponent_on(x, 1))).lift(n);
        };
        for (std::size_t a = 0; a < G.size(); ++a)
          for (std::size_t b = 0; b < G.size(); ++b) {
            CyclotomicInteger s(n);
            for (const auto& x : units) s += val(a, x) * val(b, x).galois(-1);
            if (a == b)
              CHECK(s == CyclotomicInteger(n, static_cast<long>(units.size())));
            else
              CHECK(s.is_zero());
          }
        if (inf == 0) {
          // Column orthogonality at places of degree <= 2.
          for (const auto& v : enumerate_places(R.field(), 2)) {
            if (v.infinite || R.gcd(v.poly, fin).degree() > 0) continue;
            CyclotomicInteger s(n);
            for (const auto& chi : G.characters) s += chi.root_value(v)->lift(n);
            const bool trivial_class = R.mod(v.poly, fin).degree() <= 0;
            CHECK(s == CyclotomicInteger(n, trivial_class ? static_cast<long>(G.size()) : 0));
          }
        }
      }
    }
  }
}

TEST_CASE("descriptors round trip") {
  PolyRing R(FiniteField::prime(7));
  Descriptor d;
  d.kind = "kummer";
  d.poly = "t^3+2";
  d.m = 3;
  d.power = 2;
  d.twist_zeta_order = 4;
  d.twist_exponent = 1;
  d.tate_weight = 1;
  auto chi = character_from_descriptor(R, d);
  auto back = chi.descriptor();
  CHECK(back.kind == "kummer");
  CHECK(back.poly == "t^3+2");
  CHECK(back.power == 2);
  CHECK(back.twist_zeta_order == 4);
  CHECK(back.twist_exponent == 1);
  CHECK(back.tate_weight == 1);
  Descriptor bad;
  bad.kind = "weird";
  CHECK_THROWS_AS(character_from_descriptor(R, bad), Error);
}
