#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "ffmc/base/cyc_poly.hpp"
#include "ffmc/base/cyclotomic.hpp"
#include "ffmc/base/place.hpp"
#include "ffmc/base/residue_field.hpp"

using namespace ffmc;

namespace {

FqPoly random_poly(const PolyRing& R, std::mt19937_64& rng, int max_deg) {
  std::vector<FieldElem> c(rng() % (max_deg + 1) + 1);
  for (auto& x : c) x = rng() % R.q();
  return FqPoly(c);
}

// Irreducibility by trial division with every monic polynomial of degree <= d/2.
bool brute_irreducible(const PolyRing& R, const FqPoly& f) {
  const int d = f.degree();
  for (int k = 1; 2 * k <= d; ++k) {
    const std::uint64_t count = upow(R.q(), k);
    for (std::uint64_t i = 0; i < count; ++i)
      if (R.mod(f, R.from_index(i, k)).is_zero()) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("prime field arithmetic") {
  auto F = FiniteField::prime(7);
  CHECK(F.order() == 7);
  CHECK(F.add(5, 4) == 2);
  CHECK(F.mul(3, 5) == 1);
  CHECK(F.inv(3) == 5);
  CHECK(F.neg(2) == 5);
  CHECK(F.primitive_element() == 3);
  CHECK(F.from_int(-1) == 6);
}

TEST_CASE("extension field moduli are least in natural order") {
  CHECK(FiniteField::create(3, 2).modulus() == std::vector<std::uint32_t>{1, 0, 1});
  CHECK(FiniteField::create(2, 2).modulus() == std::vector<std::uint32_t>{1, 1, 1});
  CHECK(FiniteField::create(2, 3).modulus() == std::vector<std::uint32_t>{1, 1, 0, 1});
  CHECK_THROWS_AS(FiniteField::with_modulus(3, {2, 0, 1}), Error);  // x^2 - 1 splits
  CHECK_THROWS_AS(FiniteField::of_order(12), Error);
}

TEST_CASE("field axioms on random triples") {
  std::mt19937_64 rng(11);
  for (std::uint64_t q : {4ull, 8ull, 9ull, 25ull, 27ull, 49ull, 121ull, 1024ull, 6561ull}) {
    auto F = FiniteField::of_order(q);
    auto Fslow = FiniteField::of_order(q, TableMode::None);
    for (int it = 0; it < 300; ++it) {
      FieldElem a = rng() % q, b = rng() % q, c = rng() % q;
      CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
      CHECK(F.mul(a, b) == Fslow.mul(a, b));
      CHECK(F.add(a, b) == Fslow.add(a, b));
      CHECK(F.add(a, F.neg(a)) == 0);
      if (a) {
        CHECK(F.mul(a, F.inv(a)) == 1);
        CHECK(Fslow.mul(a, Fslow.inv(a)) == 1);
        CHECK(F.exp(F.log(a)) == a);
        CHECK(F.pow(a, q - 1) == 1);
      }
    }
  }
}

TEST_CASE("Ben-Or and exhaustive irreducibility agree on degree 5 over F_2 and F_3") {
  for (std::uint32_t p : {2u, 3u}) {
    PolyRing R(FiniteField::prime(p));
    for (std::uint64_t idx = 0; idx < upow(p, 5); ++idx) {
      FqPoly f = R.from_index(idx, 5);
      std::vector<std::uint32_t> c(f.c.begin(), f.c.end());
      CHECK(is_irreducible_over_prime_field(p, c) == brute_irreducible(R, f));
    }
  }
}

TEST_CASE("polynomial parse and print") {
  PolyRing R(FiniteField::prime(5));
  CHECK(R.print(R.parse("t^3-t")) == "t^3+4t");
  CHECK(R.parse("t^3 - t") == FqPoly({0, 4, 0, 1}));
  CHECK(R.parse("2*t^2+7") == FqPoly({2, 0, 2}));
  CHECK(R.parse("-1").c == std::vector<FieldElem>{4});
  CHECK(R.print(R.zero()) == "0");
  CHECK_THROWS_AS(R.parse("t^^2"), Error);
  CHECK_THROWS_AS(R.parse("x+1"), Error);
  PolyRing R9(FiniteField::of_order(9));
  CHECK(R9.print(R9.parse("{4}t^2+t")) == "{4}t^2+t");

  std::mt19937_64 rng(3);
  for (std::uint64_t q : {2ull, 5ull, 9ull, 13ull}) {
    PolyRing Rq(FiniteField::of_order(q));
    for (int it = 0; it < 200; ++it) {
      FqPoly f = random_poly(Rq, rng, 7);
      CHECK(Rq.parse(Rq.print(f)) == f);
    }
  }
}

TEST_CASE("polynomial ring identities") {
  std::mt19937_64 rng(5);
  for (std::uint64_t q : {2ull, 3ull, 4ull, 7ull, 9ull}) {
    PolyRing R(FiniteField::of_order(q));
    for (int it = 0; it < 100; ++it) {
      FqPoly a = random_poly(R, rng, 8), b = random_poly(R, rng, 5);
      if (b.is_zero()) continue;
      FqPoly qq, r;
      R.divmod(a, b, qq, r);
      CHECK(R.add(R.mul(qq, b), r) == a);
      CHECK(r.degree() < b.degree());
      FqPoly g = R.gcd(a, b);
      if (!g.is_zero()) {
        CHECK(R.mod(a, g).is_zero());
        CHECK(R.mod(b, g).is_zero());
      }
      if (!a.is_zero()) {
        FqPoly prod = R.constant(a.lc());
        for (auto& [f, m] : R.factor(a)) {
          CHECK(R.is_irreducible(f));
          prod = R.mul(prod, R.pow(f, m));
        }
        CHECK(prod == a);
      }
    }
  }
}

TEST_CASE("resultant against product of values at roots") {
  // For split a = prod (t - r_i): Res(a, b) = prod b(r_i).
  std::mt19937_64 rng(17);
  PolyRing R(FiniteField::of_order(11));
  const auto& F = R.field();
  for (int it = 0; it < 200; ++it) {
    FqPoly a = R.one();
    FieldElem expected = 1;
    FqPoly b = random_poly(R, rng, 6);
    if (b.is_zero()) continue;
    const int k = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < k; ++i) {
      FieldElem r = rng() % 11;
      a = R.mul(a, R.linear(r));
      expected = F.mul(expected, R.eval(b, r));
    }
    CHECK(R.resultant(a, b) == expected);
    const FieldElem sign = (a.degree() * b.degree()) % 2 ? F.neg(1) : 1;
    CHECK(R.resultant(b, a) == F.mul(sign, expected));
  }
}

TEST_CASE("enumerate_places examples") {
  auto F3 = FiniteField::prime(3);
  PlaceTable t3(F3, 3);
  CHECK(t3.finite_count(1) == 3);
  CHECK(t3.finite_count(2) == 3);
  CHECK(t3.finite_count(3) == 8);
  auto places = t3.places();
  CHECK(places.front().infinite);
  CHECK(places.size() == 1 + 3 + 3 + 8);

  auto P2 = enumerate_places(FiniteField::prime(2), 2);
  PolyRing R2(FiniteField::prime(2));
  std::vector<std::string> deg2;
  for (auto& v : P2)
    if (v.degree == 2) deg2.push_back(place_to_string(R2, v));
  CHECK(deg2 == std::vector<std::string>{"t^2+t+1"});

  PolyRing R5(FiniteField::prime(5));
  std::vector<std::string> names;
  for (auto& v : enumerate_places(FiniteField::prime(5), 1)) names.push_back(place_to_string(R5, v));
  CHECK(names == std::vector<std::string>{"inf", "t", "t+1", "t+2", "t+3", "t+4"});

  CHECK_THROWS_AS(PlaceTable(F3, 17), Error);
  CHECK_THROWS_AS(PlaceTable(F3, 0), Error);
}

TEST_CASE("place sieve agrees with trial division") {
  for (std::uint64_t q : {2ull, 3ull, 4ull, 5ull, 8ull, 9ull}) {
    auto F = FiniteField::of_order(q);
    PolyRing R(F);
    const unsigned maxd = q <= 3 ? 6 : (q <= 5 ? 4 : 3);
    PlaceTable table(F, maxd);
    for (unsigned d = 1; d <= maxd; ++d) {
      std::vector<std::uint64_t> expect;
      for (std::uint64_t i = 0; i < upow(q, d); ++i)
        if (brute_irreducible(R, R.from_index(i, d))) expect.push_back(i);
      CHECK(table.indices(d) == expect);
    }
  }
}

TEST_CASE("necklace formula") {
  for (std::uint64_t q : {2ull, 3ull, 4ull, 5ull, 7ull, 9ull, 16ull}) {
    auto F = FiniteField::of_order(q);
    const unsigned maxd = q <= 3 ? 10 : (q <= 9 ? 6 : 4);
    PlaceTable table(F, maxd);
    for (unsigned m = 1; m <= maxd; ++m) {
      std::uint64_t total = 0;
      for (auto d : divisors(m)) total += d * table.finite_count(static_cast<unsigned>(d));
      CHECK(total == upow(q, m));
    }
  }
}

TEST_CASE("parallel sieve matches serial") {
  auto F = FiniteField::of_order(5);
  PlaceTable a(F, 6, 1), b(F, 6, 4);
  CHECK(a == b);
}

TEST_CASE("residue_value") {
  PolyRing R(FiniteField::prime(5));
  auto f = R.parse("t^3-t");
  CHECK(residue_value(R, f, parse_place(R, "t-2")) == R.one());
  CHECK(residue_value(R, R.t(), parse_place(R, "t")).is_zero());
  CHECK(residue_value(R, R.one(), parse_place(R, "t^2+2")) == R.one());
  CHECK_THROWS_AS(residue_value(R, f, Place::infinity()), Error);
  CHECK_THROWS_AS(parse_place(R, "t^2-1"), Error);

  std::mt19937_64 rng(9);
  auto places = enumerate_places(R.field(), 3);
  for (int it = 0; it < 200; ++it) {
    FqPoly a = random_poly(R, rng, 7), b = random_poly(R, rng, 7);
    const Place& v = places[1 + rng() % (places.size() - 1)];
    CHECK(residue_value(R, R.mul(a, b), v) ==
          R.mod(R.mul(residue_value(R, a, v), residue_value(R, b, v)), v.poly));
  }
}

TEST_CASE("residue field discrete logs") {
  PolyRing R(FiniteField::prime(3));
  ResidueField K(R, R.parse("t^2+1"));
  CHECK(K.size() == 9);
  for (std::uint64_t i = 1; i < 9; ++i) {
    FqPoly x = K.unpack(i);
    CHECK(K.pow(K.generator(), K.dlog(x)) == x);
  }
}

TEST_CASE("place cache round trip") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ffmc_test_cache";
  fs::remove_all(dir);
  auto F = FiniteField::prime(3);
  PlaceTable t = load_or_build_places(dir.string(), F, 3);
  PlaceTable again = load_or_build_places(dir.string(), F, 3);
  CHECK(t == again);
  CHECK(again == PlaceTable(F, 3));
  const fs::path file = *fs::directory_iterator(dir);
  std::ifstream in(file);
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "# ffmc-places p=3 e=1 modulus=0,1 max_degree=3");
  CHECK(first == "1\tinf");
  in.close();
  {
    std::ofstream out(file, std::ios::trunc);
    out << "# garbage\n";
  }
  CHECK_THROWS_AS(read_place_cache(file.string(), F), Error);
  CHECK(load_or_build_places(dir.string(), F, 3) == t);
  fs::remove_all(dir);
}

TEST_CASE("cyclotomic polynomials and zeta order") {
  CHECK(cyclotomic_polynomial(1) == std::vector<Integer>{-1, 1});
  CHECK(cyclotomic_polynomial(4) == std::vector<Integer>{1, 0, 1});
  CHECK(cyclotomic_polynomial(6) == std::vector<Integer>{1, -1, 1});
  for (unsigned n = 1; n <= 30; ++n) {
    auto z = CyclotomicInteger::zeta_power(n, 1);
    CyclotomicInteger one(n, 1);
    CHECK(z.pow(n) == one);
    for (unsigned k = 1; k < n; ++k) CHECK(z.pow(k) != one);
    CHECK(z.root_of_unity_exponent() == (n == 1 ? 0u : 1u));
  }
}

TEST_CASE("cyclotomic ring axioms") {
  std::mt19937_64 rng(21);
  auto rnd = [&](unsigned n) {
    std::vector<Integer> c(n);
    for (auto& x : c) x = static_cast<long>(rng() % 41) - 20;
    return CyclotomicInteger::from_coeffs(n, c);
  };
  for (unsigned n : {1u, 2u, 3u, 4u, 5u, 8u, 9u, 12u}) {
    for (int it = 0; it < 50; ++it) {
      auto a = rnd(n), b = rnd(n), c = rnd(n);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * b == b * a);
      CHECK(a * (b + c) == a * b + a * c);
      if (!b.is_zero()) CHECK((a * b).exact_div(b) == a);
      CHECK(a.lift(2 * n) * b.lift(2 * n) == (a * b).lift(2 * n));
    }
  }
}

TEST_CASE("cyclotomic reduction") {
  auto red = cyclotomic_embed_check(1, 3, 2);
  CHECK(red(CyclotomicInteger(1, 7)).coeffs() == std::vector<std::uint64_t>{7});
  CHECK(red(CyclotomicInteger(1, 16)).coeffs() == std::vector<std::uint64_t>{7});
  auto red4 = cyclotomic_embed_check(4, 3, 1);
  auto x = CyclotomicInteger::zeta_power(4, 1) + CyclotomicInteger(4, 2);
  CHECK(red4(x).coeffs() == std::vector<std::uint64_t>{2, 1});
  auto red2 = cyclotomic_embed_check(2, 5, 1);
  auto z2 = CyclotomicInteger::zeta_power(2, 1);
  CHECK(red2((CyclotomicInteger(2, 1) - z2) * (CyclotomicInteger(2, 1) + z2)).is_zero());
  CHECK_THROWS_AS(cyclotomic_embed_check(4, 3, 0), Error);

  std::mt19937_64 rng(8);
  for (unsigned n : {3u, 4u, 6u, 9u}) {
    auto r = cyclotomic_embed_check(n, 3, 2);
    for (int it = 0; it < 50; ++it) {
      std::vector<Integer> ca(n), cb(n);
      for (auto& v : ca) v = static_cast<long>(rng() % 1000) - 500;
      for (auto& v : cb) v = static_cast<long>(rng() % 1000) - 500;
      auto a = CyclotomicInteger::from_coeffs(n, ca), b = CyclotomicInteger::from_coeffs(n, cb);
      CHECK(r(a * b) == r(a) * r(b));
      CHECK(r(a + b) == r(a) + r(b));
    }
  }
}

TEST_CASE("cyclotomic polynomial helpers") {
  auto p = CycPoly::from_integers(1, {1, -1});
  auto inv = inverse_series(p, 5);
  CHECK(inv == CycPoly::from_integers(1, {1, 1, 1, 1, 1, 1}));
  auto prod = CycPoly::from_integers(1, {1, 2, 5}) * p;
  CHECK(exact_quotient(prod, p) == CycPoly::from_integers(1, {1, 2, 5}));
  CHECK(!exact_quotient(CycPoly::from_integers(1, {1, 2, 5}), p).has_value());
  CHECK(to_string(CycPoly::from_integers(1, {1, -2, 5})) == "1-2t+5t^2");
}
