#include "ffmc/base/fq_poly.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <sstream>

namespace ffmc {

FqPoly PolyRing::monomial(FieldElem a, unsigned k) const {
  std::vector<FieldElem> c(k + 1, 0);
  c[k] = a;
  return FqPoly(std::move(c));
}

FqPoly PolyRing::linear(FieldElem root) const { return FqPoly({F_.neg(root), 1}); }

FqPoly PolyRing::add(const FqPoly& a, const FqPoly& b) const {
  const auto& big = a.c.size() >= b.c.size() ? a : b;
  const auto& small = a.c.size() >= b.c.size() ? b : a;
  std::vector<FieldElem> r = big.c;
  for (std::size_t i = 0; i < small.c.size(); ++i) r[i] = F_.add(r[i], small.c[i]);
  return FqPoly(std::move(r));
}

FqPoly PolyRing::neg(const FqPoly& a) const {
  std::vector<FieldElem> r(a.c.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = F_.neg(a.c[i]);
  return FqPoly(std::move(r));
}

FqPoly PolyRing::sub(const FqPoly& a, const FqPoly& b) const { return add(a, neg(b)); }

FqPoly PolyRing::scale(const FqPoly& a, FieldElem s) const {
  if (s == 0) return {};
  std::vector<FieldElem> r(a.c.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = F_.mul(a.c[i], s);
  return FqPoly(std::move(r));
}

FqPoly PolyRing::mul(const FqPoly& a, const FqPoly& b) const {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<FieldElem> r(a.c.size() + b.c.size() - 1, 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] = F_.add(r[i + j], F_.mul(a.c[i], b.c[j]));
  }
  return FqPoly(std::move(r));
}

FqPoly PolyRing::pow(const FqPoly& a, unsigned e) const {
  FqPoly r = one(), b = a;
  while (e) {
    if (e & 1) r = mul(r, b);
    e >>= 1;
    if (e) b = mul(b, b);
  }
  return r;
}

void PolyRing::divmod(const FqPoly& a, const FqPoly& b, FqPoly& quot, FqPoly& rem) const {
  if (b.is_zero()) throw Error(ErrorCode::InvalidArgument, "polynomial division by zero");
  std::vector<FieldElem> r = a.c;
  const int db = b.degree();
  if (a.degree() < db) {
    quot = {};
    rem = a;
    return;
  }
  std::vector<FieldElem> qc(a.c.size() - b.c.size() + 1, 0);
  const FieldElem li = F_.inv(b.lc());
  for (int k = a.degree(); k >= db; --k) {
    const FieldElem c = r[k];
    if (c == 0) continue;
    const FieldElem f = F_.mul(c, li);
    qc[k - db] = f;
    for (int i = 0; i <= db; ++i) r[k - db + i] = F_.sub(r[k - db + i], F_.mul(f, b.c[i]));
  }
  quot = FqPoly(std::move(qc));
  rem = FqPoly(std::move(r));
}

FqPoly PolyRing::div(const FqPoly& a, const FqPoly& b) const {
  FqPoly q, r;
  divmod(a, b, q, r);
  return q;
}

FqPoly PolyRing::mod(const FqPoly& a, const FqPoly& b) const {
  FqPoly q, r;
  divmod(a, b, q, r);
  return r;
}

FqPoly PolyRing::powmod(const FqPoly& a, const Integer& e, const FqPoly& m) const {
  if (e < 0) throw Error(ErrorCode::InvalidArgument, "negative exponent in powmod");
  FqPoly r = mod(one(), m), b = mod(a, m);
  const unsigned bits = e == 0 ? 0 : static_cast<unsigned>(msb(e)) + 1;
  for (unsigned i = bits; i-- > 0;) {
    r = mulmod(r, r, m);
    if (bit_test(e, i)) r = mulmod(r, b, m);
  }
  return r;
}

FqPoly PolyRing::monic(const FqPoly& a) const {
  if (a.is_zero()) return a;
  return scale(a, F_.inv(a.lc()));
}

FqPoly PolyRing::gcd(const FqPoly& a, const FqPoly& b) const {
  FqPoly x = a, y = b;
  while (!y.is_zero()) {
    FqPoly r = mod(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return monic(x);
}

FqPoly PolyRing::derivative(const FqPoly& a) const {
  if (a.c.size() <= 1) return {};
  std::vector<FieldElem> r(a.c.size() - 1);
  for (std::size_t i = 1; i < a.c.size(); ++i) r[i - 1] = F_.mul(a.c[i], F_.from_int(static_cast<std::int64_t>(i % F_.characteristic())));
  return FqPoly(std::move(r));
}

FieldElem PolyRing::eval(const FqPoly& a, FieldElem x) const {
  FieldElem r = 0;
  for (std::size_t i = a.c.size(); i-- > 0;) r = F_.add(F_.mul(r, x), a.c[i]);
  return r;
}

bool PolyRing::is_squarefree(const FqPoly& a) const {
  if (a.is_zero()) return false;
  if (a.degree() == 0) return true;
  return gcd(a, derivative(a)).degree() == 0;
}

bool PolyRing::is_irreducible(const FqPoly& a) const {
  if (a.degree() < 1) return false;
  if (a.degree() == 1) return true;
  const FqPoly f = monic(a);
  const Integer qq = F_.order();
  FqPoly h = t();
  for (int i = 1; 2 * i <= f.degree(); ++i) {
    h = powmod(h, qq, f);
    if (gcd(sub(h, t()), f).degree() != 0) return false;
  }
  return true;
}

FieldElem PolyRing::resultant(const FqPoly& a_in, const FqPoly& b_in) const {
  FqPoly a = a_in, b = b_in;
  if (a.is_zero() || b.is_zero()) return 0;
  FieldElem acc = 1;
  while (true) {
    const int m = a.degree(), n = b.degree();
    if (n == 0) return F_.mul(acc, F_.pow(b.c[0], static_cast<std::uint64_t>(m)));
    if (m == 0) return F_.mul(acc, F_.pow(a.c[0], static_cast<std::uint64_t>(n)));
    FqPoly r = mod(a, b);
    if (r.is_zero()) return 0;
    const int k = r.degree();
    if ((static_cast<long>(m) * n) % 2 == 1) acc = F_.neg(acc);
    acc = F_.mul(acc, F_.pow(b.lc(), static_cast<std::uint64_t>(m - k)));
    a = std::move(b);
    b = std::move(r);
  }
}

namespace {

struct FactorCtx {
  const PolyRing& R;
  std::mt19937_64 rng{0xfac7};
};

// p-th root of a polynomial whose exponents are all multiples of p.
FqPoly pth_root(const PolyRing& R, const FqPoly& f) {
  const auto& F = R.field();
  const std::uint32_t p = F.characteristic();
  const std::uint64_t root_exp = F.order() / p;
  std::vector<FieldElem> r(f.c.size() / p + 1, 0);
  for (std::size_t i = 0; i < f.c.size(); i += p) r[i / p] = F.pow(f.c[i], root_exp);
  return FqPoly(std::move(r));
}

void squarefree_parts(const PolyRing& R, const FqPoly& f, unsigned mult, std::vector<std::pair<FqPoly, unsigned>>& out) {
  if (f.degree() <= 0) return;
  const FqPoly d = R.derivative(f);
  if (d.is_zero()) {
    squarefree_parts(R, pth_root(R, f), mult * R.field().characteristic(), out);
    return;
  }
  FqPoly c = R.gcd(f, d);
  FqPoly w = R.div(f, c);
  unsigned i = 1;
  while (w.degree() > 0) {
    FqPoly y = R.gcd(w, c);
    FqPoly fac = R.div(w, y);
    if (fac.degree() > 0) out.emplace_back(R.monic(fac), mult * i);
    w = y;
    c = R.div(c, y);
    ++i;
  }
  if (c.degree() > 0) squarefree_parts(R, pth_root(R, c), mult * R.field().characteristic(), out);
}

void equal_degree(FactorCtx& ctx, const FqPoly& g, int d, std::vector<FqPoly>& out) {
  const PolyRing& R = ctx.R;
  if (g.degree() == d) {
    out.push_back(R.monic(g));
    return;
  }
  const auto& F = R.field();
  const std::uint64_t q = F.order();
  while (true) {
    std::vector<FieldElem> ac(g.degree());
    for (auto& x : ac) x = ctx.rng() % q;
    FqPoly a(std::move(ac));
    if (a.degree() < 1) continue;
    FqPoly b;
    if (F.characteristic() == 2) {
      // Absolute trace to F_2 of the residue ring F_{q^d}.
      const unsigned bits = F.degree() * static_cast<unsigned>(d);
      FqPoly s = a, cur = a;
      for (unsigned i = 1; i < bits; ++i) {
        cur = R.mulmod(cur, cur, g);
        s = R.add(s, cur);
      }
      b = s;
    } else {
      const Integer e = (ipow(Integer(q), static_cast<std::uint64_t>(d)) - 1) / 2;
      b = R.sub(R.powmod(a, e, g), R.one());
    }
    FqPoly h = R.gcd(b, g);
    if (h.degree() > 0 && h.degree() < g.degree()) {
      equal_degree(ctx, h, d, out);
      equal_degree(ctx, R.div(g, h), d, out);
      return;
    }
  }
}

}  // namespace

std::vector<std::pair<FqPoly, unsigned>> PolyRing::factor(const FqPoly& a) const {
  if (a.is_zero()) throw Error(ErrorCode::InvalidArgument, "cannot factor the zero polynomial");
  std::vector<std::pair<FqPoly, unsigned>> sqf;
  squarefree_parts(*this, monic(a), 1, sqf);
  FactorCtx ctx{*this};
  std::vector<std::pair<FqPoly, unsigned>> result;
  const Integer qq = F_.order();
  for (auto& [part, mult] : sqf) {
    FqPoly f = part;
    FqPoly h = t();
    for (int i = 1; 2 * i <= f.degree(); ++i) {
      h = powmod(h, qq, f);
      FqPoly g = gcd(sub(h, t()), f);
      if (g.degree() > 0) {
        std::vector<FqPoly> pieces;
        equal_degree(ctx, g, i, pieces);
        for (auto& pc : pieces) result.emplace_back(pc, mult);
        f = div(f, g);
        h = mod(h, f);
      }
    }
    if (f.degree() > 0) result.emplace_back(monic(f), mult);
  }
  std::sort(result.begin(), result.end(), [this](const auto& x, const auto& y) {
    if (x.first.degree() != y.first.degree()) return x.first.degree() < y.first.degree();
    return index(x.first) < index(y.first);
  });
  // Merge repeated factors coming from different squarefree layers.
  std::vector<std::pair<FqPoly, unsigned>> merged;
  for (auto& fm : result) {
    if (!merged.empty() && merged.back().first == fm.first)
      merged.back().second += fm.second;
    else
      merged.push_back(fm);
  }
  return merged;
}

FqPoly PolyRing::radical(const FqPoly& a) const {
  FqPoly r = one();
  for (auto& [f, m] : factor(a)) r = mul(r, f);
  return r;
}

std::uint64_t PolyRing::index(const FqPoly& f) const {
  if (f.degree() < 0 || f.lc() != 1) throw Error(ErrorCode::InvalidArgument, "index requires a monic polynomial");
  const std::uint64_t q = F_.order();
  const unsigned d = static_cast<unsigned>(f.degree());
  upow(q, d);  // overflow guard
  std::uint64_t idx = 0;
  for (unsigned i = d; i-- > 0;) idx = idx * q + f.c[i];
  return idx;
}

FqPoly PolyRing::from_index(std::uint64_t idx, unsigned degree) const {
  const std::uint64_t q = F_.order();
  std::vector<FieldElem> c(degree + 1);
  for (unsigned i = 0; i < degree; ++i) {
    c[i] = idx % q;
    idx /= q;
  }
  c[degree] = 1;
  return FqPoly(std::move(c));
}

std::string PolyRing::print_elem(FieldElem a) const {
  if (F_.in_prime_field(a)) return std::to_string(a);
  return "{" + std::to_string(a) + "}";
}

std::string PolyRing::print(const FqPoly& a) const {
  if (a.is_zero()) return "0";
  std::string out;
  for (std::size_t i = a.c.size(); i-- > 0;) {
    const FieldElem c = a.c[i];
    if (c == 0) continue;
    if (!out.empty()) out += "+";
    if (i == 0 || c != 1) out += print_elem(c);
    if (i >= 1) out += "t";
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out;
}

FqPoly PolyRing::parse(const std::string& text) const {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw Error(ErrorCode::InvalidArgument, "empty polynomial");
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::InvalidArgument, "cannot parse polynomial '" + text + "': " + why);
  };
  auto read_uint = [&](std::size_t& pos) {
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) fail("expected digits");
    std::uint64_t v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      if (v > (UINT64_MAX - 9) / 10) fail("number too large");
      v = v * 10 + static_cast<std::uint64_t>(s[pos] - '0');
      ++pos;
    }
    return v;
  };
  const std::uint64_t p = F_.characteristic();
  FqPoly result;
  std::size_t pos = 0;
  bool first = true;
  while (pos < s.size()) {
    bool negative = false;
    if (s[pos] == '+' || s[pos] == '-') {
      negative = s[pos] == '-';
      ++pos;
    } else if (!first) {
      fail("expected '+' or '-'");
    }
    first = false;
    FieldElem coef = 1;
    bool have_coef = false;
    if (pos < s.size() && s[pos] == '{') {
      ++pos;
      const std::uint64_t k = read_uint(pos);
      if (pos >= s.size() || s[pos] != '}') fail("unterminated '{'");
      ++pos;
      if (k >= F_.order()) fail("packed element out of range");
      coef = k;
      have_coef = true;
    } else if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      coef = read_uint(pos) % p;
      have_coef = true;
    }
    if (have_coef && pos < s.size() && s[pos] == '*') ++pos;
    unsigned exp = 0;
    if (pos < s.size() && s[pos] == 't') {
      ++pos;
      exp = 1;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        const std::uint64_t e = read_uint(pos);
        if (e > 4096) fail("exponent too large");
        exp = static_cast<unsigned>(e);
      }
    } else if (!have_coef) {
      fail("expected a term");
    }
    if (negative) coef = F_.neg(coef);
    result = add(result, monomial(coef, exp));
  }
  return result;
}

}  // namespace ffmc
