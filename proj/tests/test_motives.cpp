#include <doctest.h>

#include <random>
#include <set>

#include "ffmc/motives/picard.hpp"

using namespace ffmc;
using namespace ffmc::motives;

namespace {

Place P(const PolyRing& R, const char* s) { return parse_place(R, s); }

using PolyN = std::vector<std::uint64_t>;

PolyN mulp(const PolyN& a, const PolyN& b, std::uint64_t n) {
  PolyN c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % n;
  return c;
}

// Exact division of a by the monic t - c over Z/n.
PolyN div_linear(const PolyN& a, std::uint64_t c, std::uint64_t n) {
  PolyN q(a.size() - 1, 0);
  std::uint64_t carry = 0;
  for (std::size_t i = a.size(); i-- > 1;) {
    carry = (a[i] + carry * c) % n;
    q[i - 1] = carry;
  }
  CHECK((a[0] + carry * c) % n == 0);
  return q;
}

// Frobenius permutes the geometric points of a degree-d place in one d-cycle and
// multiplies roots of unity by q, so the characteristic polynomial of the motive is
// prod (t^d - q^d) / (t - q) over Z2 times prod (t^d - 1) / (t - 1) over Z1.
PolyN expected_charpoly(const std::vector<Place>& Z1, const std::vector<Place>& Z2, std::uint64_t q, std::uint64_t n) {
  auto block = [&](const std::vector<Place>& Z, std::uint64_t scale) {
    PolyN acc{1 % n};
    for (const auto& v : Z) {
      PolyN f(v.degree + 1, 0);
      std::uint64_t sd = 1;
      for (unsigned i = 0; i < v.degree; ++i) sd = sd * scale % n;
      f[0] = (n - sd) % n;
      f[v.degree] = 1 % n;
      acc = mulp(acc, f, n);
    }
    return div_linear(acc, scale % n, n);
  };
  return mulp(block(Z2, q), block(Z1, 1), n);
}

// Order of the quotient S / T by enumeration: lambda in [0, n)^{r-1} and x in (Z/N')^s with x_0 = 0,
// counted when n x - u(lambda) is constant mod N'.
std::uint64_t enumerate_order(const MotiveTorsion& M, std::uint64_t field_size) {
  const std::uint64_t n = M.n(), Np = n * (field_size - 1);
  const unsigned r = M.r(), s = M.s();
  std::vector<std::vector<Integer>> U(r - 1);
  for (unsigned i = 0; i + 1 < r; ++i) U[i] = M.basis_element(s - 1 + i).second;
  std::uint64_t total = 0;
  std::vector<std::uint64_t> lam(r - 1, 0);
  while (true) {
    std::vector<std::uint64_t> x(s, 0);
    while (true) {
      bool ok = true;
      Integer c0;
      for (unsigned k = 0; k < s && ok; ++k) {
        Integer v = Integer(n) * x[k];
        for (unsigned i = 0; i + 1 < r; ++i) v -= Integer(n) * U[i][k] * lam[i];
        v %= Np;
        if (v < 0) v += Np;
        if (k == 0)
          c0 = v;
        else if (v != c0)
          ok = false;
      }
      if (ok) ++total;
      unsigned k = 1;
      while (k < s && ++x[k] == Np) x[k++] = 0;
      if (k >= s) break;
    }
    unsigned i = 0;
    while (i + 1 < r && ++lam[i] == n) lam[i++] = 0;
    if (i + 1 >= r) break;
  }
  return total;
}

// Brute-force structure of (F_q[t]/m)^x / F_q^x: number of classes x with x^n constant.
std::uint64_t brute_torsion(const PolyRing& R, const FqPoly& m, std::uint64_t n) {
  const unsigned d = static_cast<unsigned>(m.degree());
  const std::uint64_t q = R.q();
  std::uint64_t units = 0, hits = 0;
  const std::uint64_t total = upow(q, d);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::vector<FieldElem> c(d);
    std::uint64_t v = idx;
    for (unsigned i = 0; i < d; ++i) {
      c[i] = v % q;
      v /= q;
    }
    const FqPoly x(c);
    if (x.is_zero() || R.gcd(x, m).degree() != 0) continue;
    ++units;
    if (R.powmod(x, Integer(n), m).degree() <= 0) ++hits;
  }
  CHECK(units % (q - 1) == 0);
  return hits / (q - 1);
}

}  // namespace

TEST_CASE("relative Picard examples") {
  PolyRing R5(FiniteField::prime(5));
  const RelativePicard A(R5, {P(R5, "t"), P(R5, "t-1")});
  CHECK(A.order() == 4);
  CHECK(A.invariants() == std::vector<Integer>{4});
  const RelativePicard B(R5, {P(R5, "t")});
  CHECK(B.order() == 1);
  CHECK(B.invariants().empty());
  PolyRing R3(FiniteField::prime(3));
  const RelativePicard C(R3, {P(R3, "t^2+1")});
  CHECK(C.order() == 4);
  CHECK(C.invariants() == std::vector<Integer>{4});
  const RelativePicard C2(R3, {P(R3, "t^2+1")}, 2);
  CHECK(C2.component_orders().size() == 2);
  CHECK(C2.order() == 8);
  const RelativePicard Dinf(R5, {P(R5, "inf"), P(R5, "t")});
  CHECK(Dinf.order() == 4);
  CHECK_THROWS_AS(RelativePicard(R5, {P(R5, "t"), P(R5, "t")}), Error);
}

TEST_CASE("relative Picard torsion against brute force") {
  std::mt19937_64 rng(3);
  for (std::uint64_t q : {3, 4, 5, 7}) {
    PolyRing R(FiniteField::of_order(q));
    const auto places = enumerate_places(R.field(), 2);
    for (int trial = 0; trial < 6; ++trial) {
      std::vector<Place> Z;
      FqPoly m = R.one();
      unsigned deg = 0;
      for (const auto& v : places) {
        if (v.infinite || rng() % 3 != 0 || deg + v.degree > 4) continue;
        Z.push_back(v);
        m = R.mul(m, v.poly);
        deg += v.degree;
      }
      if (Z.empty()) continue;
      const RelativePicard G(R, Z);
      CAPTURE(R.print(m));
      Integer units = 1;
      for (const auto& o : G.component_orders()) units *= o;
      CHECK(G.order() == units / (q - 1));
      for (std::uint64_t n = 1; n <= 12; ++n) CHECK(G.torsion_order(n) == brute_torsion(R, m, n));
    }
  }
}

TEST_CASE("class map is a homomorphism and kills constants") {
  PolyRing R(FiniteField::prime(7));
  const RelativePicard G(R, {P(R, "t"), P(R, "t-1"), P(R, "t^2+1")});
  std::mt19937_64 rng(9);
  auto random_unit = [&] {
    while (true) {
      FqPoly g = R.from_index(rng() % 343, 3);
      if (g.coeff(0) != 0 && R.eval(g, 1) != 0 && R.mod(g, R.parse("t^2+1")).degree() >= 0) return g;
    }
  };
  for (int i = 0; i < 30; ++i) {
    const FqPoly a = random_unit(), b = random_unit();
    CHECK(G.class_of(R.mul(a, b)) == G.combine(G.class_of(a), G.class_of(b)));
    const auto ca = G.class_of(a), cs = G.class_of(R.scale(a, 3));
    CHECK(ca.coords == cs.coords);
  }
  CHECK_THROWS_AS(G.class_of(R.parse("t")), Error);
}

TEST_CASE("motive torsion examples") {
  PolyRing R(FiniteField::prime(5));
  const MotiveTorsion A(R, {P(R, "inf")}, {P(R, "t"), P(R, "t-1")}, 4);
  CHECK(A.order() == 4);
  CHECK(A.j() == 1);
  const MotiveTorsion B(R, {P(R, "inf"), P(R, "t-2")}, {P(R, "t"), P(R, "t-1")}, 4);
  CHECK(B.order() == 16);
  for (std::uint64_t n : {1, 2, 3, 4, 7}) {
    const MotiveTorsion C(R, {P(R, "inf")}, {P(R, "t")}, n);
    CHECK(C.order() == 1);
    CHECK(C.dimension() == 0);
  }
  // Kummer: x^4 = a in F_5 gives Frob(x) = x a, so the lift of (t-2) - inf moves by
  // (f(1) / f(0)) = (-1) / (-2) = 3 = 2^3 in mu_4 = <2>.
  CHECK(B.frobenius() == std::vector<std::vector<std::uint64_t>>{{1, 3}, {0, 1}});
  CHECK(B.fixed_point_count() == 4);
  CHECK(B.frobenius_order() == 4);
}

TEST_CASE("Frobenius extension data matches the Kummer formula") {
  // All points rational and mu_n in F_q: Frob(x) = x * a^{(q-1)/n} for x^n = a.
  for (std::uint64_t q : {5, 7, 13}) {
    PolyRing R(FiniteField::prime(static_cast<std::uint32_t>(q)));
    const FiniteField& F = R.field();
    for (std::uint64_t n : {2, 3, 4, 6}) {
      if ((q - 1) % n != 0) continue;
      const std::vector<Place> Z1{P(R, "inf"), P(R, "t-2"), P(R, "t-3")};
      const std::vector<Place> Z2{P(R, "t"), P(R, "t-1"), P(R, "t-4")};
      const MotiveTorsion M(R, Z1, Z2, n);
      REQUIRE(M.j() == 1);
      const FieldElem zeta = F.pow(F.primitive_element(), (q - 1) / n);
      auto log_zeta = [&](FieldElem x) {
        FieldElem z = 1;
        for (std::uint64_t e = 0; e < n; ++e, z = F.mul(z, zeta))
          if (z == x) return e;
        FAIL("not an n-th root of unity");
        return std::uint64_t{0};
      };
      const std::vector<FieldElem> a{2, 3}, b{0, 1, 4};
      for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 1; k < b.size(); ++k) {
          const FieldElem f0 = F.sub(b[0], a[i]), fk = F.sub(b[k], a[i]);
          const FieldElem ratio = F.pow(F.div(fk, f0), (q - 1) / n);
          CHECK(M.frobenius()[k - 1][2 + i] == log_zeta(ratio));
        }
    }
  }
}

TEST_CASE("order and characteristic polynomial against independent oracles") {
  PolyRing R5(FiniteField::prime(5));
  PolyRing R3(FiniteField::prime(3));
  struct Case {
    PolyRing* R;
    std::vector<const char*> z1, z2;
    std::uint64_t n;
  };
  std::vector<Case> cases = {
      {&R5, {"inf"}, {"t", "t-1"}, 2},
      {&R5, {"inf", "t-2"}, {"t", "t-1"}, 2},
      {&R5, {"inf", "t-2"}, {"t", "t^2+2"}, 2},
      {&R5, {"t^2+2"}, {"inf", "t-1"}, 3},
      {&R3, {"inf"}, {"t", "t-1", "t-2"}, 2},
      {&R3, {"inf", "t^2+1"}, {"t"}, 4},
      {&R3, {"t"}, {"t^2+1", "inf"}, 2},
  };
  for (const auto& c : cases) {
    std::vector<Place> Z1, Z2;
    for (auto s : c.z1) Z1.push_back(P(*c.R, s));
    for (auto s : c.z2) Z2.push_back(P(*c.R, s));
    const MotiveTorsion M(*c.R, Z1, Z2, c.n);
    CAPTURE(c.n);
    CHECK(M.order() == ipow(Integer(c.n), M.dimension()));
    CHECK(M.charpoly() == expected_charpoly(Z1, Z2, c.R->q(), c.n));
    const std::uint64_t size = upow(c.R->q(), M.j());
    if (upow(c.n * (size - 1), M.s() - 1) * upow(c.n, M.r() - 1) <= 2'000'000)
      CHECK(Integer(enumerate_order(M, size)) == M.order());
  }
}

TEST_CASE("duality, fixed points and tower examples") {
  PolyRing R5(FiniteField::prime(5));
  PolyRing R3(FiniteField::prime(3));
  const std::vector<Place> Z1{P(R5, "inf"), P(R5, "t-2")};
  const std::vector<Place> Z2{P(R5, "t"), P(R5, "t-1"), P(R5, "t-3")};
  const MotiveTorsion A(R5, Z1, Z2, 4), B(R5, Z2, Z1, 4);
  CHECK(A.order() == 64);
  CHECK(B.order() == 64);
  CHECK(duality_order_check(R5, Z1, Z2, 4).pass);
  CHECK(duality_order_check(R5, {P(R5, "inf")}, {P(R5, "t")}, 4).pass);
  CHECK(duality_order_check(R3, {P(R3, "inf"), P(R3, "t^2+1")}, {P(R3, "t")}, 2).pass);
  // q not 1 mod n: Frob is 1 on the lattice part and q on the torus part, so the two
  // characteristic polynomials are t - 1 and t - q.
  const MotiveTorsion L(R3, {P(R3, "t"), P(R3, "t+1")}, {P(R3, "inf")}, 4),
      T(R3, {P(R3, "inf")}, {P(R3, "t"), P(R3, "t+1")}, 4);
  CHECK(L.charpoly() == std::vector<std::uint64_t>{3, 1});
  CHECK(T.charpoly() == std::vector<std::uint64_t>{1, 1});
  CHECK(duality_order_check(R3, {P(R3, "t"), P(R3, "t+1")}, {P(R3, "inf")}, 4).pass);
  CHECK(duality_order_check(R5, {P(R5, "t"), P(R5, "t+1"), P(R5, "t^2+2")}, {P(R5, "inf")}, 8).pass);

  const auto f5 = fixed_points_check(R5, {P(R5, "t"), P(R5, "t-1")}, 4);
  CHECK(f5.pass);
  CHECK(MotiveTorsion(R5, {P(R5, "inf")}, {P(R5, "t"), P(R5, "t-1")}, 4).fixed_point_count() == 4);
  CHECK(fixed_points_check(R3, {P(R3, "t"), P(R3, "t-1")}, 4).pass);
  CHECK(MotiveTorsion(R3, {P(R3, "inf")}, {P(R3, "t"), P(R3, "t-1")}, 4).fixed_point_count() == 2);
  CHECK(fixed_points_check(R3, {P(R3, "t"), P(R3, "t-1")}, 1).pass);

  CHECK(tower_check(R5, Z1, Z2, 2, 3).pass);
  CHECK(tower_check(R3, {P(R3, "inf"), P(R3, "t^2+1")}, {P(R3, "t"), P(R3, "t-1")}, 2, 3).pass);
}

TEST_CASE("motive arguments") {
  PolyRing R(FiniteField::prime(5));
  try {
    MotiveTorsion(R, {P(R, "inf")}, {P(R, "t")}, 5);
    FAIL("expected Unsupported");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Unsupported);
  }
  CHECK_THROWS_AS(MotiveTorsion(R, {P(R, "t")}, {P(R, "t")}, 2), Error);
  CHECK_THROWS_AS(MotiveTorsion(R, {P(R, "t"), P(R, "t")}, {P(R, "inf")}, 2), Error);
  CHECK_THROWS_AS(MotiveTorsion(R, {}, {P(R, "t")}, 2), Error);
  CHECK_THROWS_AS(MotiveTorsion(R, {P(R, "inf")}, {P(R, "t^2+2")}, 2, 3), Error);
  CHECK_THROWS_AS(MotiveTorsion(R, {P(R, "inf")}, {P(R, "t")}, 2, 40), Error);
  CHECK(minimal_degree(5, {P(R, "t^2+2")}, 3) == 2);
  CHECK(minimal_degree(5, {P(R, "t-1")}, 8) == 2);
  CHECK(minimal_degree(5, {P(R, "t-1")}, 4) == 1);
}
