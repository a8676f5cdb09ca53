#include "ffmc/base/cyclotomic.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace ffmc {

namespace {

std::vector<Integer> poly_div_exact(std::vector<Integer> a, const std::vector<Integer>& b) {
  // b monic
  const std::size_t db = b.size() - 1;
  std::vector<Integer> q(a.size() - db, 0);
  for (std::size_t k = a.size(); k-- > db;) {
    const Integer c = a[k];
    q[k - db] = c;
    if (c != 0)
      for (std::size_t i = 0; i <= db; ++i) a[k - db + i] -= c * b[i];
  }
  return q;
}

}  // namespace

const std::vector<Integer>& cyclotomic_polynomial(unsigned n) {
  static std::mutex mu;
  static std::map<unsigned, std::vector<Integer>> cache;
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "cyclotomic order must be >= 1");
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  std::vector<Integer> poly(n + 1, 0);
  poly[0] = -1;
  poly[n] = 1;
  for (auto d : divisors(n)) {
    if (d == n) continue;
    poly = poly_div_exact(std::move(poly), cyclotomic_polynomial(static_cast<unsigned>(d)));
  }
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(n, std::move(poly)).first->second;
}

unsigned common_order(unsigned a, unsigned b) { return static_cast<unsigned>(lcm_u64(a, b)); }

CyclotomicInteger::CyclotomicInteger(unsigned n) : n_(n), c_(euler_phi(n), 0) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "cyclotomic order must be >= 1");
}

CyclotomicInteger::CyclotomicInteger(unsigned n, const Integer& v) : CyclotomicInteger(n) { c_[0] = v; }

void CyclotomicInteger::reduce(std::vector<Integer>& v) const {
  const auto& phi = cyclotomic_polynomial(n_);
  const std::size_t d = phi.size() - 1;
  for (std::size_t k = v.size(); k-- > d;) {
    const Integer c = v[k];
    if (c == 0) continue;
    for (std::size_t i = 0; i < d; ++i) v[k - d + i] -= c * phi[i];
    v[k] = 0;
  }
  v.resize(d, 0);
}

CyclotomicInteger CyclotomicInteger::from_coeffs(unsigned n, std::vector<Integer> coeffs) {
  CyclotomicInteger r(n);
  r.reduce(coeffs);
  r.c_ = std::move(coeffs);
  return r;
}

CyclotomicInteger CyclotomicInteger::zeta_power(unsigned n, std::int64_t k) {
  const auto e = static_cast<std::size_t>(mod_floor(k, n));
  std::vector<Integer> v(e + 1, 0);
  v[e] = 1;
  return from_coeffs(n, std::move(v));
}

bool CyclotomicInteger::is_zero() const {
  for (const auto& x : c_)
    if (x != 0) return false;
  return true;
}

bool CyclotomicInteger::is_integer() const {
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

Integer CyclotomicInteger::to_integer() const {
  if (!is_integer()) throw Error(ErrorCode::InvalidArgument, "cyclotomic value is not a rational integer");
  return c_[0];
}

CyclotomicInteger CyclotomicInteger::operator+(const CyclotomicInteger& o) const {
  if (n_ != o.n_) throw Error(ErrorCode::InvalidArgument, "cyclotomic order mismatch");
  CyclotomicInteger r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
  return r;
}

CyclotomicInteger CyclotomicInteger::operator-(const CyclotomicInteger& o) const {
  if (n_ != o.n_) throw Error(ErrorCode::InvalidArgument, "cyclotomic order mismatch");
  CyclotomicInteger r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
  return r;
}

CyclotomicInteger CyclotomicInteger::operator-() const {
  CyclotomicInteger r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

CyclotomicInteger CyclotomicInteger::operator*(const CyclotomicInteger& o) const {
  if (n_ != o.n_) throw Error(ErrorCode::InvalidArgument, "cyclotomic order mismatch");
  if (c_.size() == 1) return CyclotomicInteger(n_, c_[0] * o.c_[0]);
  std::vector<Integer> v(2 * c_.size() - 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j)
      if (o.c_[j] != 0) v[i + j] += c_[i] * o.c_[j];
  }
  return from_coeffs(n_, std::move(v));
}

CyclotomicInteger CyclotomicInteger::operator*(const Integer& s) const {
  CyclotomicInteger r = *this;
  for (auto& x : r.c_) x *= s;
  return r;
}

CyclotomicInteger CyclotomicInteger::pow(std::uint64_t e) const {
  CyclotomicInteger r(n_, 1), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

CyclotomicInteger CyclotomicInteger::lift(unsigned m) const {
  if (m % n_ != 0) throw Error(ErrorCode::InvalidArgument, "cannot lift Z[zeta_" + std::to_string(n_) + "] to order " + std::to_string(m));
  if (m == n_) return *this;
  const unsigned step = m / n_;
  std::vector<Integer> v(c_.size() * step + 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) v[i * step] = c_[i];
  return from_coeffs(m, std::move(v));
}

CyclotomicInteger CyclotomicInteger::galois(std::int64_t a) const {
  if (gcd_u64(static_cast<std::uint64_t>(mod_floor(a, n_)), n_) != 1 && n_ > 1)
    throw Error(ErrorCode::InvalidArgument, "Galois exponent not coprime to the order");
  std::vector<Integer> v(n_, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) v[static_cast<std::size_t>(mod_floor(static_cast<std::int64_t>(i) * a, n_))] += c_[i];
  return from_coeffs(n_, std::move(v));
}

std::optional<unsigned> CyclotomicInteger::root_of_unity_exponent() const {
  for (unsigned k = 0; k < n_; ++k)
    if (zeta_power(n_, k) == *this) return k;
  return std::nullopt;
}

Integer CyclotomicInteger::norm() const {
  CyclotomicInteger prod(n_, 1);
  for (unsigned a = 1; a <= n_; ++a)
    if (gcd_u64(a, n_) == 1) prod = prod * galois(a);
  return prod.to_integer();
}

CyclotomicInteger CyclotomicInteger::exact_div(const CyclotomicInteger& d) const {
  if (d.is_zero()) throw Error(ErrorCode::InvalidArgument, "cyclotomic division by zero");
  CyclotomicInteger co(n_, 1);
  for (unsigned a = 2; a <= n_; ++a)
    if (gcd_u64(a, n_) == 1 && a % n_ != 1) co = co * d.galois(a);
  const Integer nd = (d * co).to_integer();
  CyclotomicInteger num = *this * co;
  for (auto& x : num.c_) {
    if (x % nd != 0) throw Error(ErrorCode::InvalidArgument, "cyclotomic division is not exact");
    x /= nd;
  }
  return num;
}

std::vector<std::string> CyclotomicInteger::to_strings() const {
  std::vector<std::string> out;
  for (const auto& x : c_) out.push_back(x.str());
  return out;
}

std::string CyclotomicInteger::to_string() const {
  if (is_integer()) return c_[0].str();
  std::string out;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    std::string coef = c_[i].str();
    if (!out.empty() && c_[i] > 0) out += "+";
    if (i == 0) {
      out += coef;
      continue;
    }
    if (c_[i] == 1) coef = "";
    if (c_[i] == -1) coef = "-";
    out += coef + "z" + std::to_string(n_);
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

CyclotomicModular::CyclotomicModular(unsigned n, std::uint64_t modulus)
    : n_(n), m_(modulus), c_(euler_phi(n), 0) {
  if (modulus == 0) throw Error(ErrorCode::InvalidArgument, "modulus must be positive");
}

CyclotomicModular::CyclotomicModular(unsigned n, std::uint64_t modulus, std::vector<std::uint64_t> coeffs)
    : n_(n), m_(modulus) {
  const auto& phi = cyclotomic_polynomial(n);
  const std::size_t d = phi.size() - 1;
  for (auto& x : coeffs) x %= modulus;
  for (std::size_t k = coeffs.size(); k-- > d;) {
    const std::uint64_t c = coeffs[k];
    if (c == 0) continue;
    for (std::size_t i = 0; i < d; ++i) {
      const Integer t = Integer(coeffs[k - d + i]) - Integer(c) * phi[i];
      Integer r = t % modulus;
      if (r < 0) r += modulus;
      coeffs[k - d + i] = static_cast<std::uint64_t>(r);
    }
    coeffs[k] = 0;
  }
  coeffs.resize(d, 0);
  c_ = std::move(coeffs);
}

CyclotomicModular CyclotomicModular::from_int(unsigned n, std::uint64_t modulus, std::int64_t v) {
  CyclotomicModular r(n, modulus);
  r.c_[0] = static_cast<std::uint64_t>(mod_floor(v, static_cast<std::int64_t>(modulus)));
  return r;
}

void CyclotomicModular::check(const CyclotomicModular& o) const {
  if (n_ != o.n_ || m_ != o.m_) throw Error(ErrorCode::InvalidArgument, "modular cyclotomic ring mismatch");
}

bool CyclotomicModular::is_zero() const {
  for (auto x : c_)
    if (x) return false;
  return true;
}

CyclotomicModular CyclotomicModular::operator+(const CyclotomicModular& o) const {
  check(o);
  CyclotomicModular r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = static_cast<std::uint64_t>((static_cast<unsigned __int128>(c_[i]) + o.c_[i]) % m_);
  return r;
}

CyclotomicModular CyclotomicModular::operator-() const {
  CyclotomicModular r = *this;
  for (auto& x : r.c_) x = x ? m_ - x : 0;
  return r;
}

CyclotomicModular CyclotomicModular::operator-(const CyclotomicModular& o) const { return *this + (-o); }

CyclotomicModular CyclotomicModular::operator*(const CyclotomicModular& o) const {
  check(o);
  std::vector<std::uint64_t> v(2 * c_.size() - 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (!c_[i]) continue;
    for (std::size_t j = 0; j < c_.size(); ++j)
      v[i + j] = static_cast<std::uint64_t>((static_cast<unsigned __int128>(c_[i]) * o.c_[j] + v[i + j]) % m_);
  }
  return CyclotomicModular(n_, m_, std::move(v));
}

CyclotomicModular CyclotomicModular::pow(std::uint64_t e) const {
  CyclotomicModular r = from_int(n_, m_, 1), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

std::string CyclotomicModular::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? "," : "") << c_[i];
  os << "] mod " << m_;
  return os.str();
}

CyclotomicModular CyclotomicReduction::operator()(const CyclotomicInteger& x) const {
  if (x.order() != n) throw Error(ErrorCode::InvalidArgument, "reduction order mismatch");
  std::vector<std::uint64_t> v;
  for (const auto& c : x.coeffs()) {
    Integer r = c % modulus;
    if (r < 0) r += modulus;
    v.push_back(static_cast<std::uint64_t>(r));
  }
  return CyclotomicModular(n, modulus, std::move(v));
}

CyclotomicReduction cyclotomic_embed_check(unsigned n, std::uint64_t ell, unsigned N) {
  if (N == 0) throw Error(ErrorCode::InvalidArgument, "precision N must be >= 1");
  if (!is_prime(ell)) throw Error(ErrorCode::InvalidArgument, "ell must be prime");
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "order must be >= 1");
  return CyclotomicReduction{n, ell, N, upow(ell, N)};
}

}  // namespace ffmc
