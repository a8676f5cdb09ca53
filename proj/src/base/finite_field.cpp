#include "ffmc/base/finite_field.hpp"

#include <array>
#include <random>
#include <sstream>

namespace ffmc {

namespace {

using Coeffs = std::vector<std::uint64_t>;

void trim(Coeffs& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint64_t inv_mod_p(std::uint64_t a, std::uint64_t p) {
  std::uint64_t r = 1, b = a % p, e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

Coeffs mod_poly(Coeffs a, const Coeffs& m, std::uint64_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint64_t li = inv_mod_p(m.back(), p);
  while (a.size() > dm) {
    const std::uint64_t c = a.back() * li % p;
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = (a[shift + i] + (p - c) * m[i]) % p;
    trim(a);
  }
  return a;
}

Coeffs mul_poly(const Coeffs& a, const Coeffs& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Coeffs r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  trim(r);
  return r;
}

Coeffs gcd_poly(Coeffs a, Coeffs b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Coeffs r = mod_poly(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Coeffs powmod_poly(Coeffs base, std::uint64_t e, const Coeffs& m, std::uint64_t p) {
  Coeffs r{1};
  base = mod_poly(base, m, p);
  while (e) {
    if (e & 1) r = mod_poly(mul_poly(r, base, p), m, p);
    base = mod_poly(mul_poly(base, base, p), m, p);
    e >>= 1;
  }
  return r;
}

bool divides_exhaustive(std::uint64_t p, const Coeffs& f, unsigned k) {
  // Every monic g of degree k.
  std::uint64_t count = upow(p, k);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    Coeffs g(k + 1);
    std::uint64_t t = idx;
    for (unsigned i = 0; i < k; ++i) {
      g[i] = t % p;
      t /= p;
    }
    g[k] = 1;
    if (mod_poly(f, g, p).empty()) return true;
  }
  return false;
}

}  // namespace

bool is_irreducible_over_prime_field(std::uint32_t p, const std::vector<std::uint32_t>& poly) {
  Coeffs f(poly.begin(), poly.end());
  for (auto& c : f) c %= p;
  trim(f);
  if (f.size() < 2) return false;
  const unsigned e = static_cast<unsigned>(f.size() - 1);
  if (e == 1) return true;
  if (e <= 4) {
    for (unsigned k = 1; k <= e / 2; ++k)
      if (divides_exhaustive(p, f, k)) return false;
    return true;
  }
  Coeffs xp{0, 1};
  for (unsigned i = 1; i <= e / 2; ++i) {
    xp = powmod_poly(xp, p, f, p);
    Coeffs d = xp;
    d.resize(std::max<std::size_t>(d.size(), 2), 0);
    d[1] = (d[1] + p - 1) % p;
    trim(d);
    if (gcd_poly(f, d, p).size() > 1) return false;
  }
  return true;
}

FiniteField FiniteField::prime(std::uint32_t p, TableMode mode) {
  if (!is_prime(p)) throw Error(ErrorCode::InvalidArgument, "characteristic " + std::to_string(p) + " is not prime");
  return build(p, {0, 1}, mode);
}

FiniteField FiniteField::create(std::uint32_t p, unsigned e, TableMode mode) {
  if (!is_prime(p)) throw Error(ErrorCode::InvalidArgument, "characteristic " + std::to_string(p) + " is not prime");
  if (e == 0) throw Error(ErrorCode::InvalidArgument, "extension degree must be >= 1");
  if (e == 1) return build(p, {0, 1}, mode);
  const std::uint64_t count = upow(p, e);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::vector<std::uint32_t> m(e + 1);
    std::uint64_t t = idx;
    for (unsigned i = 0; i < e; ++i) {
      m[i] = static_cast<std::uint32_t>(t % p);
      t /= p;
    }
    m[e] = 1;
    if (m[0] == 0) continue;
    if (is_irreducible_over_prime_field(p, m)) return build(p, std::move(m), mode);
  }
  throw Error(ErrorCode::InvalidArgument, "no irreducible modulus found");
}

FiniteField FiniteField::with_modulus(std::uint32_t p, std::vector<std::uint32_t> modulus, TableMode mode) {
  if (!is_prime(p)) throw Error(ErrorCode::InvalidArgument, "characteristic " + std::to_string(p) + " is not prime");
  if (modulus.size() < 2 || modulus.back() != 1)
    throw Error(ErrorCode::InvalidArgument, "modulus must be monic of degree >= 1");
  if (!is_irreducible_over_prime_field(p, modulus))
    throw Error(ErrorCode::InvalidArgument, "modulus is reducible over F_" + std::to_string(p));
  return build(p, std::move(modulus), mode);
}

FiniteField FiniteField::of_order(std::uint64_t q, TableMode mode) {
  if (q < 2) throw Error(ErrorCode::InvalidArgument, "field order must be a prime power >= 2");
  auto primes = prime_divisors(q);
  if (primes.size() != 1) throw Error(ErrorCode::InvalidArgument, std::to_string(q) + " is not a prime power");
  const auto p = primes[0];
  unsigned e = 0;
  for (std::uint64_t t = q; t > 1; t /= p) ++e;
  return create(static_cast<std::uint32_t>(p), e, mode);
}

FiniteField FiniteField::build(std::uint32_t p, std::vector<std::uint32_t> modulus, TableMode mode) {
  auto impl = std::make_shared<Impl>();
  impl->p = p;
  impl->e = static_cast<unsigned>(modulus.size() - 1);
  impl->q = upow(p, impl->e);
  impl->modulus = std::move(modulus);
  if (impl->e == 1) impl->modulus = {0, 1};
  if (impl->q > (std::uint64_t{1} << 62)) throw Error(ErrorCode::ResourceLimit, "field order exceeds 2^62");

  const bool want_tables =
      mode == TableMode::Force || (mode == TableMode::Auto && impl->q <= (std::uint64_t{1} << 16));
  if (want_tables && impl->q > kTableCap)
    throw Error(ErrorCode::ResourceLimit, "log tables requested for q = " + std::to_string(impl->q) +
                                              " above cap " + std::to_string(kTableCap));

  FiniteField tmp{impl};
  const std::uint64_t q = impl->q;

  if (q <= 256) {
    impl->add_tab.resize(q * q);
    impl->neg_tab.resize(q);
    for (std::uint64_t a = 0; a < q; ++a) {
      impl->neg_tab[a] = static_cast<std::uint16_t>(tmp.neg_slow(a));
      for (std::uint64_t b = 0; b < q; ++b)
        impl->add_tab[a * q + b] = static_cast<std::uint16_t>(tmp.add_slow(a, b));
    }
  }

  // Primitive element: least g whose order is q-1.
  const auto qm1_primes = prime_divisors(q - 1);
  FieldElem g = 1;
  if (q > 2) {
    for (g = 2; g < q; ++g) {
      bool ok = true;
      for (auto r : qm1_primes) {
        if (tmp.pow(g, (q - 1) / r) == 1) {
          ok = false;
          break;
        }
      }
      if (ok) break;
    }
    if (g == q) throw Error(ErrorCode::InternalCountError, "no primitive element found");
  }
  impl->primitive = g;

  if (want_tables) {
    impl->exp_tab.resize(2 * (q - 1));
    impl->log_tab.assign(q, 0);
    FieldElem x = 1;
    for (std::uint64_t k = 0; k < q - 1; ++k) {
      impl->exp_tab[k] = static_cast<std::uint32_t>(x);
      impl->exp_tab[k + q - 1] = static_cast<std::uint32_t>(x);
      impl->log_tab[x] = static_cast<std::uint32_t>(k);
      x = tmp.mul_slow(x, g);
    }
    if (x != 1) throw Error(ErrorCode::InternalCountError, "primitive element has wrong order");
  }
  if (q <= 256) impl->small = true;

  // Spot check of the multiplicative group order on a pseudo-random element.
  std::mt19937_64 rng(0x5eed ^ q);
  const FieldElem probe = 1 + rng() % (q - 1);
  FiniteField out{impl};
  if (out.pow(probe, q - 1) != 1) throw Error(ErrorCode::InvalidArgument, "multiplicative group order check failed");
  return out;
}

FieldElem FiniteField::add_slow(FieldElem a, FieldElem b) const {
  const std::uint64_t p = impl_->p;
  if (p == 2) return a ^ b;
  FieldElem r = 0, place = 1;
  while (a || b) {
    const std::uint64_t d = (a % p + b % p) % p;
    r += d * place;
    place *= p;
    a /= p;
    b /= p;
  }
  return r;
}

FieldElem FiniteField::neg_slow(FieldElem a) const {
  const std::uint64_t p = impl_->p;
  if (p == 2) return a;
  FieldElem r = 0, place = 1;
  while (a) {
    const std::uint64_t d = a % p;
    r += ((p - d) % p) * place;
    place *= p;
    a /= p;
  }
  return r;
}

FieldElem FiniteField::mul_slow(FieldElem a, FieldElem b) const {
  const std::uint64_t p = impl_->p;
  const unsigned e = impl_->e;
  if (e == 1) return static_cast<FieldElem>((static_cast<unsigned __int128>(a) * b) % p);
  std::array<std::uint64_t, 64> da{}, db{};
  for (unsigned i = 0; i < e; ++i) {
    da[i] = a % p;
    a /= p;
    db[i] = b % p;
    b /= p;
  }
  std::array<std::uint64_t, 128> prod{};
  for (unsigned i = 0; i < e; ++i) {
    if (!da[i]) continue;
    for (unsigned j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
  }
  const auto& m = impl_->modulus;
  for (int k = 2 * static_cast<int>(e) - 2; k >= static_cast<int>(e); --k) {
    const std::uint64_t c = prod[k];
    if (!c) continue;
    prod[k] = 0;
    for (unsigned i = 0; i < e; ++i) prod[k - e + i] = (prod[k - e + i] + (p - c) * m[i]) % p;
  }
  FieldElem r = 0;
  for (int i = static_cast<int>(e) - 1; i >= 0; --i) r = r * p + prod[i];
  return r;
}

FieldElem FiniteField::pow(FieldElem a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  if (!impl_->log_tab.empty()) {
    const std::uint64_t n = impl_->q - 1;
    const auto k = static_cast<std::uint64_t>((static_cast<unsigned __int128>(impl_->log_tab[a]) * (e % n)) % n);
    return impl_->exp_tab[k];
  }
  FieldElem r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

FieldElem FiniteField::pow(FieldElem a, const Integer& e) const {
  if (e < 0) return pow(inv(a), Integer(-e));
  const Integer reduced = e % (impl_->q - 1);
  if (a == 0) return e == 0 ? 1 : 0;
  return pow(a, static_cast<std::uint64_t>(reduced));
}

FieldElem FiniteField::inv(FieldElem a) const {
  if (a == 0) throw Error(ErrorCode::InvalidArgument, "inverse of zero");
  if (!impl_->log_tab.empty()) {
    const std::uint64_t n = impl_->q - 1;
    return impl_->exp_tab[(n - impl_->log_tab[a]) % n];
  }
  return pow(a, impl_->q - 2);
}

std::uint64_t FiniteField::log(FieldElem a) const {
  if (a == 0) throw Error(ErrorCode::InvalidArgument, "logarithm of zero");
  if (impl_->log_tab.empty()) throw Error(ErrorCode::Unsupported, "discrete log requires tables");
  return impl_->log_tab[a];
}

std::vector<std::uint32_t> FiniteField::digits(FieldElem a) const {
  std::vector<std::uint32_t> d(impl_->e);
  for (unsigned i = 0; i < impl_->e; ++i) {
    d[i] = static_cast<std::uint32_t>(a % impl_->p);
    a /= impl_->p;
  }
  return d;
}

FieldElem FiniteField::from_digits(const std::vector<std::uint32_t>& d) const {
  FieldElem r = 0;
  for (std::size_t i = d.size(); i-- > 0;) r = r * impl_->p + (d[i] % impl_->p);
  return r;
}

std::string FiniteField::describe() const {
  std::ostringstream os;
  os << "F_" << impl_->q << " (p=" << impl_->p << ", e=" << impl_->e << ", modulus=";
  for (std::size_t i = 0; i < impl_->modulus.size(); ++i) os << (i ? "," : "") << impl_->modulus[i];
  os << ")";
  return os.str();
}

}  // namespace ffmc
