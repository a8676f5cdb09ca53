#include "ffmc/reps/character.hpp"

#include <mutex>
#include <sstream>

namespace ffmc::reps {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % n);
}

constexpr unsigned kMemoMaxDegree = 4;

}  // namespace

Modulus make_modulus(const PolyRing& R, const FqPoly& finite_part, unsigned infinity_multiplicity) {
  if (infinity_multiplicity > 1) throw Error(ErrorCode::InvalidArgument, "infinity multiplicity must be 0 or 1");
  if (finite_part.is_zero() || finite_part.lc() != 1)
    throw Error(ErrorCode::InvalidArgument, "modulus finite part must be monic and nonzero");
  if (!R.is_squarefree(finite_part))
    throw Error(ErrorCode::InvalidArgument, "modulus finite part " + R.print(finite_part) + " is not squarefree");
  return Modulus{finite_part, infinity_multiplicity};
}

bool divides(const PolyRing& R, const Modulus& m, const Place& v) {
  if (v.infinite) return m.infinity_multiplicity > 0;
  return R.mod(m.finite_part, v.poly).is_zero();
}

// ---------------------------------------------------------------- Kummer

KummerSource::KummerSource(const PolyRing& R, FqPoly f, unsigned m) : R_(R), f_(std::move(f)), m_(m) {
  if (m_ == 0 || (R_.q() - 1) % m_ != 0)
    throw Error(ErrorCode::InvalidArgument, "Kummer character needs m | q-1 (m=" + std::to_string(m) +
                                                ", q=" + std::to_string(R_.q()) + ")");
  if (f_.is_zero()) throw Error(ErrorCode::InvalidArgument, "Kummer character of the zero polynomial");
  factors_ = R_.factor(f_);
}

std::uint64_t KummerSource::symbol_exponent(FieldElem norm) const {
  const FiniteField& F = R_.field();
  if (norm == 0) throw Error(ErrorCode::InvalidArgument, "power residue symbol of zero");
  if (F.has_tables()) return F.log(norm) % m_;
  const std::uint64_t q = F.order();
  const FieldElem x = F.pow(norm, (q - 1) / m_);
  const FieldElem mu = F.pow(F.primitive_element(), (q - 1) / m_);
  FieldElem cur = 1;
  for (unsigned k = 0; k < m_; ++k) {
    if (cur == x) return k;
    cur = F.mul(cur, mu);
  }
  throw Error(ErrorCode::InternalCountError, "power residue symbol outside mu_m");
}

std::uint64_t KummerSource::symbol_at(const Place& v) const {
  if (v.degree > kMemoMaxDegree) return symbol_exponent(R_.resultant(v.poly, f_));
  const std::uint64_t key = R_.index(v.poly) * 8 + v.degree;
  {
    std::shared_lock lock(mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  const std::uint64_t s = symbol_exponent(R_.resultant(v.poly, f_));
  std::unique_lock lock(mu_);
  memo_.emplace(key, static_cast<std::uint32_t>(s));
  return s;
}

LocalData KummerSource::local(const Place& v, std::uint64_t power) const {
  const std::uint64_t j = power % m_;
  if (j == 0) return {};
  if (v.infinite) {
    const std::uint64_t d = static_cast<std::uint64_t>(f_.degree());
    if ((j * d) % m_ != 0) return {true, 0};
    return {false, (j * symbol_exponent(f_.lc())) % m_};
  }
  unsigned a = 0;
  for (const auto& [P, e] : factors_)
    if (P == v.poly) a = e;
  if (a == 0) return {false, (j * symbol_at(v)) % m_};
  if ((j * a) % m_ != 0) return {true, 0};
  const FqPoly u = R_.div(f_, R_.pow(v.poly, a));
  return {false, (j * symbol_exponent(R_.resultant(v.poly, u))) % m_};
}

Modulus KummerSource::conductor(std::uint64_t power) const {
  const std::uint64_t j = power % m_;
  FqPoly fin = R_.one();
  for (const auto& [P, e] : factors_)
    if ((j * e) % m_ != 0) fin = R_.mul(fin, P);
  const unsigned inf = (j * static_cast<std::uint64_t>(f_.degree())) % m_ != 0 ? 1 : 0;
  return Modulus{fin, inf};
}

std::string KummerSource::describe(std::uint64_t power) const {
  std::ostringstream os;
  os << "kummer(f=" << R_.print(f_) << ", m=" << m_ << ")";
  if (power % m_ != 1) os << "^" << power % m_;
  return os.str();
}

Descriptor KummerSource::descriptor(std::uint64_t power) const {
  Descriptor d;
  d.kind = "kummer";
  d.poly = R_.print(f_);
  d.m = m_;
  d.power = power % m_;
  return d;
}

// ---------------------------------------------------------------- ray class

RayClassContext::RayClassContext(const PolyRing& ring, Modulus m) : R(ring), modulus(std::move(m)) {
  for (const auto& [P, e] : R.factor(modulus.finite_part)) {
    if (e != 1) throw Error(ErrorCode::InvalidArgument, "ray class modulus must be squarefree");
    primes.push_back(P);
    fields.push_back(std::make_shared<const ResidueField>(R, P));
  }
}

RayClassSource::RayClassSource(std::shared_ptr<const RayClassContext> ctx, std::vector<std::uint64_t> exponents,
                               std::uint64_t index)
    : ctx_(std::move(ctx)),
      R_(ctx_->R),
      modulus_(ctx_->modulus),
      primes_(ctx_->primes),
      fields_(ctx_->fields),
      exps_(std::move(exponents)),
      index_(index),
      order_(1) {
  if (exps_.size() != primes_.size())
    throw Error(ErrorCode::InvalidArgument, "ray class character needs one exponent per prime of the modulus");
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    const std::uint64_t N = fields_[i]->unit_order();
    exps_[i] %= N;
    const std::uint64_t ord = N / gcd_u64(N, exps_[i]);
    n = lcm_u64(n, ord);
  }
  if (n > (1u << 30)) throw Error(ErrorCode::ResourceLimit, "ray class character order too large");
  order_ = static_cast<unsigned>(n);
  if (modulus_.infinity_multiplicity == 0 && !is_even(1))
    throw Error(ErrorCode::InvalidArgument, "character is nontrivial on constants but infinity is not in the modulus");
}

bool RayClassSource::component_trivial(std::size_t i, std::uint64_t power) const {
  return mulmod(exps_[i], power, fields_[i]->unit_order()) == 0;
}

std::uint64_t RayClassSource::exponent_on(const FqPoly& x, std::uint64_t power) const {
  std::uint64_t e = 0;
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    if (component_trivial(i, power)) continue;
    const std::uint64_t N = fields_[i]->unit_order();
    const std::uint64_t a = exps_[i];  // chi^power component is a*power
    const std::uint64_t g = gcd_u64(N, a);
    const std::uint64_t ord = N / g;
    const std::uint64_t contrib =
        mulmod(mulmod((a / g) % ord, power % ord, ord), fields_[i]->dlog(x) % ord, ord) * (order_ / ord);
    e = (e + contrib) % order_;
  }
  return e;
}

bool RayClassSource::is_even(std::uint64_t power) const {
  return exponent_on(R_.constant(R_.field().primitive_element()), power) == 0;
}

LocalData RayClassSource::local(const Place& v, std::uint64_t power) const {
  if (v.infinite) {
    if (!is_even(power)) return {true, 0};
    return {};
  }
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    if (primes_[i] != v.poly) continue;
    if (!component_trivial(i, power)) return {true, 0};
    std::uint64_t e = 0;
    for (std::size_t k = 0; k < primes_.size(); ++k) {
      if (k == i || component_trivial(k, power)) continue;
      const std::uint64_t N = fields_[k]->unit_order();
      const std::uint64_t g = gcd_u64(N, exps_[k]);
      const std::uint64_t ord = N / g;
      e = (e + mulmod(mulmod((exps_[k] / g) % ord, power % ord, ord), fields_[k]->dlog(v.poly) % ord, ord) *
                   (order_ / ord)) %
          order_;
    }
    return {false, e};
  }
  return {false, exponent_on(v.poly, power)};
}

Modulus RayClassSource::conductor(std::uint64_t power) const {
  FqPoly fin = R_.one();
  for (std::size_t i = 0; i < primes_.size(); ++i)
    if (!component_trivial(i, power)) fin = R_.mul(fin, primes_[i]);
  return Modulus{fin, is_even(power) ? 0u : 1u};
}

std::string RayClassSource::describe(std::uint64_t power) const {
  std::ostringstream os;
  os << "rayclass(modulus=" << R_.print(modulus_.finite_part) << (modulus_.infinity_multiplicity ? "*inf" : "")
     << ", index=" << index_ << ")";
  if (power != 1) os << "^" << power;
  return os.str();
}

Descriptor RayClassSource::descriptor(std::uint64_t power) const {
  Descriptor d;
  d.kind = "rayclass";
  d.poly = R_.print(modulus_.finite_part);
  d.infinity_multiplicity = modulus_.infinity_multiplicity;
  d.m = order_;
  d.power = index_;
  if (power != 1) d.kind = "rayclass^" + std::to_string(power);
  return d;
}

// ---------------------------------------------------------------- CharacterRep

CharacterRep::CharacterRep(const PolyRing& R, std::vector<Factor> factors, unsigned twist_order,
                           std::uint64_t twist_exponent, int weight)
    : R_(R), factors_(std::move(factors)), twist_order_(twist_order), twist_exponent_(twist_exponent), weight_(weight) {
  if (twist_order_ == 0) throw Error(ErrorCode::InvalidArgument, "twist order must be >= 1");
  twist_exponent_ %= twist_order_;
  for (auto& f : factors_) f.power %= f.source->order();
}

unsigned CharacterRep::value_order() const {
  std::uint64_t n = twist_order_;
  for (const auto& f : factors_) n = lcm_u64(n, f.source->order());
  return static_cast<unsigned>(n);
}

Modulus CharacterRep::conductor() const {
  FqPoly fin = R_.one();
  unsigned inf = 0;
  for (const auto& f : factors_) {
    const Modulus c = f.source->conductor(f.power);
    fin = R_.mul(fin, c.finite_part);
    inf = std::max(inf, c.infinity_multiplicity);
  }
  return Modulus{fin, inf};
}

bool CharacterRep::is_geometrically_trivial() const {
  for (const auto& f : factors_)
    if (f.power % f.source->order() != 0) return false;
  return true;
}

bool CharacterRep::is_tame_everywhere() const {
  // Character orders divide q - 1 (Kummer) or |(F_q[t]/P)^x|, both prime to p.
  const std::uint64_t p = R_.field().characteristic();
  for (const auto& f : factors_)
    if (f.source->order() % p == 0) return false;
  return true;
}

LocalData CharacterRep::local(const Place& v) const {
  const unsigned n = value_order();
  std::uint64_t e = 0;
  for (const auto& f : factors_) {
    const LocalData ld = f.source->local(v, f.power);
    if (ld.ramified) return {true, 0};
    e = (e + ld.exponent * (n / f.source->order())) % n;
  }
  e = (e + mulmod(twist_exponent_, v.degree, twist_order_) * (n / twist_order_)) % n;
  return {false, e};
}

std::optional<CyclotomicInteger> CharacterRep::root_value(const Place& v) const {
  const LocalData ld = local(v);
  if (ld.ramified) return std::nullopt;
  return CyclotomicInteger::zeta_power(value_order(), static_cast<std::int64_t>(ld.exponent));
}

std::optional<CyclotomicInteger> CharacterRep::frobenius_value(const Place& v) const {
  auto z = root_value(v);
  if (!z) return z;
  if (weight_ == 0) return z;
  const Integer qd = ipow(Integer(R_.q()), static_cast<std::uint64_t>(std::abs(weight_)) * v.degree);
  if (weight_ > 0) return *z * qd;
  throw Error(ErrorCode::Unsupported, "negative cyclotomic weight has non-integral Frobenius values");
}

std::string CharacterRep::describe() const {
  std::ostringstream os;
  if (factors_.empty()) os << "trivial";
  for (std::size_t i = 0; i < factors_.size(); ++i)
    os << (i ? "*" : "") << factors_[i].source->describe(factors_[i].power);
  if (twist_exponent_ % twist_order_ != 0) os << "*twist(zeta_" << twist_order_ << "^" << twist_exponent_ << ")";
  if (weight_ != 0) os << "*cyc^" << weight_;
  return os.str();
}

Descriptor CharacterRep::descriptor() const {
  Descriptor d;
  if (factors_.size() == 1) d = factors_[0].source->descriptor(factors_[0].power);
  if (factors_.size() > 1) {
    d.kind = "product";
    d.poly = describe();
  }
  d.twist_zeta_order = twist_order_;
  d.twist_exponent = twist_exponent_;
  d.tate_weight = weight_;
  return d;
}

// ---------------------------------------------------------------- constructions

CharacterRep trivial_character(const PolyRing& R) { return CharacterRep(R); }

CharacterRep kummer_character(const PolyRing& R, const FqPoly& f, unsigned m, std::uint64_t power) {
  auto src = std::make_shared<const KummerSource>(R, f, m);
  return CharacterRep(R, {{src, power}}, 1, 0, 0);
}

CharacterRep constant_field_twist(const CharacterRep& chi, unsigned zeta_order, std::uint64_t exponent) {
  if (zeta_order == 0) throw Error(ErrorCode::InvalidArgument, "root of unity order must be >= 1");
  const unsigned k = static_cast<unsigned>(lcm_u64(chi.twist_order(), zeta_order));
  const std::uint64_t a = (chi.twist_exponent() * (k / chi.twist_order()) + (exponent % zeta_order) * (k / zeta_order)) % k;
  return CharacterRep(chi.ring(), chi.factors(), k, a, chi.weight());
}

CharacterRep constant_field_twist(const CharacterRep& chi, const CyclotomicInteger& zeta) {
  for (unsigned n : {zeta.order(), 2 * zeta.order()}) {
    const auto e = zeta.lift(n).root_of_unity_exponent();
    if (e) return constant_field_twist(chi, n, *e);
  }
  throw Error(ErrorCode::InvalidArgument, "twist value " + zeta.to_string() + " is not a root of unity");
}

CharacterRep dual(const CharacterRep& chi) {
  std::vector<CharacterRep::Factor> fs;
  for (const auto& f : chi.factors()) fs.push_back({f.source, (f.source->order() - f.power) % f.source->order()});
  const unsigned k = chi.twist_order();
  return CharacterRep(chi.ring(), fs, k, (k - chi.twist_exponent()) % k, -chi.weight());
}

CharacterRep dual_tate_twist(const CharacterRep& chi) {
  CharacterRep inv = dual(chi);
  return CharacterRep(chi.ring(), inv.factors(), inv.twist_order(), inv.twist_exponent(), chi.weight() + 1);
}

CharacterRep tate_twist(const CharacterRep& chi, int w) {
  return CharacterRep(chi.ring(), chi.factors(), chi.twist_order(), chi.twist_exponent(), chi.weight() + w);
}

CharacterRep power(const CharacterRep& chi, std::uint64_t j) {
  std::vector<CharacterRep::Factor> fs;
  for (const auto& f : chi.factors()) fs.push_back({f.source, mulmod(f.power, j, f.source->order())});
  return CharacterRep(chi.ring(), fs, chi.twist_order(), mulmod(chi.twist_exponent(), j, chi.twist_order()),
                      chi.weight() * static_cast<int>(j));
}

CharacterRep multiply(const CharacterRep& a, const CharacterRep& b) {
  std::vector<CharacterRep::Factor> fs = a.factors();
  for (const auto& f : b.factors()) {
    bool merged = false;
    for (auto& g : fs)
      if (g.source == f.source) {
        g.power = (g.power + f.power) % g.source->order();
        merged = true;
      }
    if (!merged) fs.push_back(f);
  }
  const PolyRing& R = a.ring();
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = i + 1; j < fs.size(); ++j) {
      const Modulus ci = fs[i].source->conductor(fs[i].power), cj = fs[j].source->conductor(fs[j].power);
      if (R.gcd(ci.finite_part, cj.finite_part).degree() > 0 || (ci.infinity_multiplicity && cj.infinity_multiplicity))
        throw Error(ErrorCode::Unsupported, "product of characters with overlapping ramification");
    }
  const unsigned k = static_cast<unsigned>(lcm_u64(a.twist_order(), b.twist_order()));
  const std::uint64_t e =
      (a.twist_exponent() * (k / a.twist_order()) + b.twist_exponent() * (k / b.twist_order())) % k;
  return CharacterRep(R, fs, k, e, a.weight() + b.weight());
}

InertiaInvariants inertia_invariants(const CharacterRep& chi, const Place& v) {
  auto val = chi.frobenius_value(v);
  if (!val) return {0, std::nullopt};
  return {1, val};
}

}  // namespace ffmc::reps
