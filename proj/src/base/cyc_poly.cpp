#include "ffmc/base/cyc_poly.hpp"

namespace ffmc {

CycPoly CycPoly::from_integers(unsigned order, const std::vector<Integer>& coeffs) {
  std::vector<CyclotomicInteger> c;
  for (const auto& x : coeffs) c.emplace_back(order, x);
  return CycPoly(order, std::move(c));
}

CycPoly CycPoly::binomial(const CyclotomicInteger& a, unsigned d) {
  const unsigned n = a.order();
  std::vector<CyclotomicInteger> c(d + 1, CyclotomicInteger(n));
  c[0] = CyclotomicInteger(n, 1);
  c[d] = c[d] - a;
  return CycPoly(n, std::move(c));
}

bool CycPoly::is_integral() const {
  for (const auto& x : c)
    if (!x.is_integer()) return false;
  return true;
}

std::vector<Integer> CycPoly::to_integers() const {
  std::vector<Integer> out;
  for (const auto& x : c) out.push_back(x.to_integer());
  return out;
}

namespace {
void same_order(const CycPoly& a, const CycPoly& b) {
  if (a.n != b.n) throw Error(ErrorCode::InvalidArgument, "polynomial coefficient rings differ");
}
}  // namespace

CycPoly operator+(const CycPoly& a, const CycPoly& b) {
  same_order(a, b);
  std::vector<CyclotomicInteger> c(std::max(a.c.size(), b.c.size()), CyclotomicInteger(a.n));
  for (std::size_t i = 0; i < a.c.size(); ++i) c[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) c[i] += b.c[i];
  return CycPoly(a.n, std::move(c));
}

CycPoly operator-(const CycPoly& a, const CycPoly& b) {
  same_order(a, b);
  std::vector<CyclotomicInteger> c(std::max(a.c.size(), b.c.size()), CyclotomicInteger(a.n));
  for (std::size_t i = 0; i < a.c.size(); ++i) c[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) c[i] -= b.c[i];
  return CycPoly(a.n, std::move(c));
}

CycPoly mul_trunc(const CycPoly& a, const CycPoly& b, unsigned deg) {
  same_order(a, b);
  if (a.is_zero() || b.is_zero()) return CycPoly(a.n);
  const std::size_t len = std::min<std::size_t>(a.c.size() + b.c.size() - 1, deg + 1);
  std::vector<CyclotomicInteger> c(len, CyclotomicInteger(a.n));
  for (std::size_t i = 0; i < a.c.size() && i < len; ++i) {
    if (a.c[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c.size() && i + j < len; ++j)
      if (!b.c[j].is_zero()) c[i + j] += a.c[i] * b.c[j];
  }
  return CycPoly(a.n, std::move(c));
}

CycPoly operator*(const CycPoly& a, const CycPoly& b) {
  if (a.is_zero() || b.is_zero()) return CycPoly(a.n);
  return mul_trunc(a, b, static_cast<unsigned>(a.c.size() + b.c.size()));
}

CycPoly scale(const CycPoly& a, const CyclotomicInteger& s) {
  std::vector<CyclotomicInteger> c;
  for (const auto& x : a.c) c.push_back(x * s);
  return CycPoly(a.n, std::move(c));
}

CycPoly truncate(const CycPoly& a, unsigned deg) {
  CycPoly r = a;
  if (r.c.size() > deg + 1) r.c.resize(deg + 1);
  r.normalize();
  return r;
}

CycPoly lift(const CycPoly& a, unsigned m) {
  std::vector<CyclotomicInteger> c;
  for (const auto& x : a.c) c.push_back(x.lift(m));
  return CycPoly(m, std::move(c));
}

CyclotomicInteger eval(const CycPoly& a, const CyclotomicInteger& x) {
  if (x.order() != a.n) throw Error(ErrorCode::InvalidArgument, "evaluation point in a different ring");
  CyclotomicInteger r(a.n);
  for (std::size_t i = a.c.size(); i-- > 0;) r = r * x + a.c[i];
  return r;
}

CycPoly scale_variable(const CycPoly& a, const CyclotomicInteger& s) {
  std::vector<CyclotomicInteger> c;
  CyclotomicInteger pw(a.n, 1);
  for (const auto& x : a.c) {
    c.push_back(x * pw);
    pw = pw * s;
  }
  return CycPoly(a.n, std::move(c));
}

CycPoly inverse_series(const CycPoly& b, unsigned deg) {
  if (b.is_zero() || !b.c[0].is_integer() || (b.c[0].to_integer() != 1 && b.c[0].to_integer() != -1))
    throw Error(ErrorCode::InvalidArgument, "series inverse needs constant term +-1");
  const Integer u = b.c[0].to_integer();
  std::vector<CyclotomicInteger> r(deg + 1, CyclotomicInteger(b.n));
  r[0] = CyclotomicInteger(b.n, u);
  for (unsigned k = 1; k <= deg; ++k) {
    CyclotomicInteger s(b.n);
    for (unsigned j = 1; j <= k && j < b.c.size(); ++j) s += b.c[j] * r[k - j];
    r[k] = -(s * u);
  }
  return CycPoly(b.n, std::move(r));
}

std::optional<CycPoly> exact_quotient(const CycPoly& a, const CycPoly& b) {
  same_order(a, b);
  if (a.is_zero()) return CycPoly(a.n);
  if (b.degree() > a.degree()) return std::nullopt;
  const unsigned qdeg = static_cast<unsigned>(a.degree() - b.degree());
  CycPoly q = mul_trunc(a, inverse_series(b, qdeg), qdeg);
  if (q * b != a) return std::nullopt;
  return q;
}

void unify(CycPoly& a, CycPoly& b) {
  const unsigned m = common_order(a.n, b.n);
  if (a.n != m) a = lift(a, m);
  if (b.n != m) b = lift(b, m);
}

std::string to_string(const CycPoly& a) {
  if (a.is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i].is_zero()) continue;
    std::string coef = a.c[i].to_string();
    const bool simple = a.c[i].is_integer();
    if (!simple) coef = "(" + coef + ")";
    if (!out.empty() && (coef[0] != '-' || !simple)) out += "+";
    if (i == 0) {
      out += coef;
      continue;
    }
    if (simple && coef == "1") coef = "";
    if (simple && coef == "-1") coef = "-";
    out += coef + "t";
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

}  // namespace ffmc
