#include "ffmc/lfun/iwasawa.hpp"

#include <sstream>

namespace ffmc::lfun {

namespace {

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t g = m, x = 0, x1 = 1, r = mod_floor(a, m);
  while (r) {
    const std::int64_t qt = g / r;
    std::tie(g, r) = std::make_pair(r, g - qt * r);
    std::tie(x, x1) = std::make_pair(x1, x - qt * x1);
  }
  if (g != 1) throw Error(ErrorCode::InternalCountError, "inverse of a non-unit");
  return mod_floor(x, m);
}

CyclotomicModular reduce(const CyclotomicInteger& x, std::uint64_t ell, unsigned N) {
  CyclotomicReduction red{x.order(), ell, N, upow(ell, N)};
  return red(x);
}

}  // namespace

CyclotomicModular lift_modular(const CyclotomicModular& x, unsigned m) {
  if (x.order() == m) return x;
  std::vector<Integer> c(x.coeffs().begin(), x.coeffs().end());
  const CyclotomicInteger lifted = CyclotomicInteger::from_coeffs(x.order(), c).lift(m);
  std::vector<std::uint64_t> v;
  for (const auto& a : lifted.coeffs()) {
    Integer r = a % x.modulus();
    if (r < 0) r += x.modulus();
    v.push_back(static_cast<std::uint64_t>(r));
  }
  return CyclotomicModular(m, x.modulus(), std::move(v));
}

// ---------------------------------------------------------------- group ring

GroupRingElement::GroupRingElement(const IwasawaLevel& level)
    : level_(level), c_(level.gamma_order(), CyclotomicModular(level.n, level.modulus())) {
  if (level.N == 0) throw Error(ErrorCode::InvalidArgument, "coefficient level N must be >= 1");
  if (!is_prime(level.ell)) throw Error(ErrorCode::InvalidArgument, "ell must be prime");
}

GroupRingElement GroupRingElement::one(const IwasawaLevel& level) {
  GroupRingElement r(level);
  r.c_[0] = CyclotomicModular::from_int(level.n, level.modulus(), 1);
  return r;
}

void GroupRingElement::check(const GroupRingElement& o) const {
  if (!(level_ == o.level_)) throw Error(ErrorCode::InvalidArgument, "Iwasawa level mismatch");
}

GroupRingElement GroupRingElement::operator+(const GroupRingElement& o) const {
  check(o);
  GroupRingElement r = *this;
  for (std::size_t j = 0; j < c_.size(); ++j) r.c_[j] = c_[j] + o.c_[j];
  return r;
}

GroupRingElement GroupRingElement::operator-(const GroupRingElement& o) const {
  check(o);
  GroupRingElement r = *this;
  for (std::size_t j = 0; j < c_.size(); ++j) r.c_[j] = c_[j] - o.c_[j];
  return r;
}

GroupRingElement GroupRingElement::operator*(const GroupRingElement& o) const {
  check(o);
  GroupRingElement r(level_);
  const std::size_t g = c_.size();
  for (std::size_t i = 0; i < g; ++i) {
    if (c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < g; ++j) r.c_[(i + j) % g] = r.c_[(i + j) % g] + c_[i] * o.c_[j];
  }
  return r;
}

bool GroupRingElement::is_zero() const {
  for (const auto& x : c_)
    if (!x.is_zero()) return false;
  return true;
}

std::optional<GroupRingElement> GroupRingElement::inverse() const {
  // Matrix of multiplication by *this on the basis x^i gamma^j, solved over the local ring Z/l^N.
  const std::size_t phi = c_.front().coeffs().size(), g = c_.size(), D = phi * g;
  const std::int64_t mod = static_cast<std::int64_t>(level_.modulus());
  std::vector<std::vector<std::int64_t>> A(D, std::vector<std::int64_t>(D + 1, 0));
  for (std::size_t col = 0; col < D; ++col) {
    GroupRingElement b(level_);
    std::vector<std::uint64_t> v(phi, 0);
    v[col % phi] = 1;
    b.c_[col / phi] = CyclotomicModular(level_.n, level_.modulus(), v);
    const GroupRingElement prod = *this * b;
    for (std::size_t row = 0; row < D; ++row)
      A[row][col] = static_cast<std::int64_t>(prod.c_[row / phi].coeffs()[row % phi]);
  }
  A[0][D] = 1;
  const std::int64_t ell = static_cast<std::int64_t>(level_.ell);
  for (std::size_t c = 0; c < D; ++c) {
    std::size_t piv = D;
    for (std::size_t r = c; r < D; ++r)
      if (A[r][c] % ell != 0) {
        piv = r;
        break;
      }
    if (piv == D) return std::nullopt;
    std::swap(A[c], A[piv]);
    const std::int64_t inv = inverse_mod(A[c][c], mod);
    for (auto& x : A[c]) x = static_cast<std::int64_t>(static_cast<__int128>(x) * inv % mod);
    for (std::size_t r = 0; r < D; ++r) {
      if (r == c || A[r][c] == 0) continue;
      const std::int64_t f = A[r][c];
      for (std::size_t k = c; k <= D; ++k)
        A[r][k] = mod_floor(static_cast<std::int64_t>((A[r][k] - static_cast<__int128>(f) * A[c][k]) % mod), mod);
    }
  }
  GroupRingElement x(level_);
  for (std::size_t j = 0; j < g; ++j) {
    std::vector<std::uint64_t> v(phi);
    for (std::size_t i = 0; i < phi; ++i) v[i] = static_cast<std::uint64_t>(A[j * phi + i][D]);
    x.c_[j] = CyclotomicModular(level_.n, level_.modulus(), v);
  }
  return x;
}

CyclotomicModular GroupRingElement::evaluate(unsigned r, std::uint64_t k) const {
  if (r == 0 || level_.gamma_order() % r != 0)
    throw Error(ErrorCode::InvalidArgument, "character order " + std::to_string(r) + " does not divide the level " +
                                                std::to_string(level_.gamma_order()));
  const unsigned m = static_cast<unsigned>(lcm_u64(level_.n, r));
  CyclotomicModular acc(m, level_.modulus());
  for (std::size_t j = 0; j < c_.size(); ++j) {
    if (c_[j].is_zero()) continue;
    const CyclotomicInteger z = CyclotomicInteger::zeta_power(r, static_cast<std::int64_t>((k * j) % r)).lift(m);
    acc = acc + lift_modular(c_[j], m) * reduce(z, level_.ell, level_.N);
  }
  return acc;
}

std::string GroupRingElement::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = 0; j < c_.size(); ++j) {
    if (c_[j].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << c_[j].to_string();
    if (j) os << "*g^" << j;
  }
  if (first) os << "0";
  return os.str();
}

std::optional<GroupRingElement> IwasawaElement::value() const {
  auto inv = denominator.inverse();
  if (!inv) return std::nullopt;
  return numerator * *inv;
}

IwasawaElement IwasawaElement::operator*(const IwasawaElement& o) const {
  IwasawaElement r;
  r.numerator = numerator * o.numerator;
  r.denominator = denominator * o.denominator;
  r.denominator_unit = r.denominator.inverse().has_value();
  return r;
}

IwasawaElement substitute_gamma(const LPolynomial& L, std::uint64_t ell, unsigned N, unsigned M) {
  const IwasawaLevel level{ell, N, M, L.order()};
  auto image = [&](const CycPoly& P) {
    GroupRingElement x(level);
    const std::uint64_t g = level.gamma_order();
    for (std::size_t k = 0; k < P.c.size(); ++k) {
      const std::size_t j = static_cast<std::size_t>((g - k % g) % g);
      x[j] = x[j] + reduce(P.c[k], ell, N);
    }
    return x;
  };
  IwasawaElement r;
  r.numerator = image(L.numerator);
  r.denominator = image(L.denominator);
  r.denominator_unit = r.denominator.inverse().has_value();
  return r;
}

// ---------------------------------------------------------------- character tuples

NcL assemble_ncl(const reps::CharacterGroup& group, const CharacterRep& base, const TruncationSpec& spec,
                 const LOptions& opt) {
  spec.validate();
  NcL ncl{group, base, spec, opt, {}};
  for (const auto& chi : group.characters) ncl.entries.push_back(l_function(reps::multiply(base, chi), spec, opt));
  return ncl;
}

InterpolationResult interpolation_check(const NcL& ncl, std::size_t chi_index, unsigned psi_order,
                                        std::uint64_t psi_exponent, std::uint64_t ell, unsigned N, unsigned M) {
  if (chi_index >= ncl.entries.size())
    throw Error(ErrorCode::InvalidArgument, "character index " + std::to_string(chi_index) + " out of range");
  if (psi_order == 0 || upow(ell, M) % psi_order != 0)
    throw Error(ErrorCode::InvalidArgument, "order of psi must divide l^M");
  const std::uint64_t k = psi_exponent % psi_order;

  const IwasawaElement E = substitute_gamma(ncl.entries[chi_index], ell, N, M);
  CyclotomicModular ln = E.numerator.evaluate(psi_order, k);
  CyclotomicModular ld = E.denominator.evaluate(psi_order, k);

  const CharacterRep twisted = reps::constant_field_twist(reps::multiply(ncl.base, ncl.group[chi_index]), psi_order,
                                                          (psi_order - k) % psi_order);
  const LPolynomial R = l_function(twisted, ncl.spec, ncl.options);
  const CyclotomicInteger one(R.order(), 1);
  CyclotomicModular rn = reduce(eval(R.numerator, one), ell, N);
  CyclotomicModular rd = reduce(eval(R.denominator, one), ell, N);

  const unsigned m = static_cast<unsigned>(lcm_u64(ln.order(), rn.order()));
  ln = lift_modular(ln, m);
  ld = lift_modular(ld, m);
  rn = lift_modular(rn, m);
  rd = lift_modular(rd, m);
  InterpolationResult res;
  res.pass = ln == rn && ld == rd;
  res.lhs_numerator = ln.to_string();
  res.lhs_denominator = ld.to_string();
  res.rhs_numerator = rn.to_string();
  res.rhs_denominator = rd.to_string();
  return res;
}

}  // namespace ffmc::lfun
