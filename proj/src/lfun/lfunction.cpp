#include "ffmc/lfun/lfunction.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

namespace ffmc::lfun {

namespace {

CycPoly one_poly(unsigned n) { return CycPoly::one(n); }

// a = chi(v) q^{w deg v}
CyclotomicInteger frobenius_or_throw(const CharacterRep& chi, const Place& v) {
  auto a = chi.frobenius_value(v);
  if (!a) throw Error(ErrorCode::InternalCountError, "frobenius requested at a ramified place");
  return *a;
}

CyclotomicInteger q_power(unsigned n, std::uint64_t q, std::uint64_t k) { return CyclotomicInteger(n, ipow(Integer(q), k)); }

bool contains(const std::vector<Place>& s, const Place& v) { return std::find(s.begin(), s.end(), v) != s.end(); }

// Cancels each candidate binomial of `dens` against num when it divides exactly.
LPolynomial cancel(CycPoly num, const std::vector<CycPoly>& dens) {
  CycPoly den = one_poly(num.n);
  for (const auto& b : dens) {
    auto qt = exact_quotient(num, b);
    if (qt)
      num = std::move(*qt);
    else
      den = den * b;
  }
  return LPolynomial(std::move(num), std::move(den));
}

std::shared_ptr<const PlaceTable> table_for(const CharacterRep& chi, unsigned max_degree, const LOptions& opt) {
  if (opt.places && opt.places->max_degree() >= max_degree && opt.places->field() == chi.ring().field()) return opt.places;
  return std::make_shared<const PlaceTable>(chi.ring().field(), std::max(1u, max_degree), opt.workers, opt.degree_cap);
}

// Multiplies s in place by 1/(1 - a t^d) through t^deg.
void mul_inverse_binomial(std::vector<CyclotomicInteger>& s, const CyclotomicInteger& a, unsigned d) {
  for (std::size_t i = d; i < s.size(); ++i) s[i] += a * s[i - d];
}

void mul_binomial(std::vector<CyclotomicInteger>& s, const CyclotomicInteger& a, unsigned d) {
  for (std::size_t i = s.size(); i-- > d;) s[i] -= a * s[i - d];
}

}  // namespace

// ---------------------------------------------------------------- LPolynomial

LPolynomial::LPolynomial(CycPoly num, CycPoly den) : numerator(std::move(num)), denominator(std::move(den)) {
  unify(numerator, denominator);
  if (denominator.is_zero() || numerator.is_zero())
    throw Error(ErrorCode::InvalidArgument, "L-function numerator and denominator must be nonzero");
  const CyclotomicInteger d0 = denominator.c[0];
  if (d0 != CyclotomicInteger(d0.order(), 1)) {
    if (!d0.root_of_unity_exponent() && d0 != CyclotomicInteger(d0.order(), -1))
      throw Error(ErrorCode::InvalidArgument, "denominator constant term is not a unit");
    const CyclotomicInteger inv = CyclotomicInteger(d0.order(), 1).exact_div(d0);
    numerator = scale(numerator, inv);
    denominator = scale(denominator, inv);
  }
  if (numerator.c[0] != CyclotomicInteger(numerator.n, 1))
    throw Error(ErrorCode::InvalidArgument, "L-function must have constant term 1");
}

CycPoly LPolynomial::series(unsigned deg) const {
  return mul_trunc(numerator, inverse_series(denominator, deg), deg);
}

std::string LPolynomial::to_string() const {
  if (is_polynomial()) return ffmc::to_string(numerator);
  return "(" + ffmc::to_string(numerator) + ")/(" + ffmc::to_string(denominator) + ")";
}

bool operator==(const LPolynomial& a, const LPolynomial& b) {
  CycPoly an = a.numerator, ad = a.denominator, bn = b.numerator, bd = b.denominator;
  const unsigned m = common_order(a.order(), b.order());
  an = lift(an, m);
  ad = lift(ad, m);
  bn = lift(bn, m);
  bd = lift(bd, m);
  return an * bd == bn * ad;
}

LPolynomial operator*(const LPolynomial& a, const LPolynomial& b) {
  CycPoly an = a.numerator, bn = b.numerator, ad = a.denominator, bd = b.denominator;
  unify(an, bn);
  unify(ad, bd);
  LPolynomial r(an * bn, ad * bd);
  r.provenance = a.provenance;
  r.provenance.insert(r.provenance.end(), b.provenance.begin(), b.provenance.end());
  return r;
}

LPolynomial divide(const LPolynomial& a, const LPolynomial& b) {
  LPolynomial inv(b.denominator, b.numerator);
  return a * inv;
}

LPolynomial scale_variable(const LPolynomial& L, const CyclotomicInteger& s) {
  const unsigned m = common_order(L.order(), s.order());
  LPolynomial r(scale_variable(lift(L.numerator, m), s.lift(m)), scale_variable(lift(L.denominator, m), s.lift(m)));
  r.provenance = L.provenance;
  return r;
}

LPolynomial lift(const LPolynomial& L, unsigned order) {
  LPolynomial r(lift(L.numerator, order), lift(L.denominator, order));
  r.provenance = L.provenance;
  return r;
}

void TruncationSpec::validate() const {
  for (std::size_t i = 0; i < sigma_w.size(); ++i) {
    if (contains(sigma_v, sigma_w[i]))
      throw Error(ErrorCode::InvalidArgument, "Sigma_W and Sigma_V must be disjoint");
    for (std::size_t j = 0; j < i; ++j)
      if (sigma_w[j] == sigma_w[i]) throw Error(ErrorCode::InvalidArgument, "repeated place in Sigma_W");
  }
  for (std::size_t i = 0; i < sigma_v.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (sigma_v[j] == sigma_v[i]) throw Error(ErrorCode::InvalidArgument, "repeated place in Sigma_V");
}

// ---------------------------------------------------------------- local factors

CycPoly euler_factor(const CharacterRep& chi, const Place& v) {
  const unsigned n = chi.value_order();
  auto a = chi.frobenius_value(v);
  if (!a) return one_poly(n);
  return CycPoly::binomial(*a, v.degree);
}

LPolynomial modified_local_factor(const CharacterRep& chi, const Place& v, std::uint64_t ell, unsigned N) {
  if (N == 0) throw Error(ErrorCode::InvalidArgument, "level N must be >= 1");
  if (ell == chi.ring().field().characteristic() && !chi.is_tame_everywhere())
    throw Error(ErrorCode::Unsupported, "wild ramification at a modified place with ell = p");
  const unsigned n = chi.value_order();
  auto a = chi.frobenius_value(v);
  if (!a) return LPolynomial(one_poly(n), one_poly(n));
  const CyclotomicInteger qd = q_power(n, chi.q(), v.degree);
  LPolynomial r(CycPoly::binomial(*a * qd, v.degree), CycPoly::binomial(*a, v.degree));
  r.provenance.push_back("sigma_v " + place_to_string(chi.ring(), v));
  return r;
}

unsigned degree_bound(const CharacterRep& chi) {
  if (chi.is_geometrically_trivial())
    throw Error(ErrorCode::InvalidArgument, "degree bound is undefined for geometrically trivial characters");
  const int deg = static_cast<int>(chi.conductor().degree()) - 2;
  if (deg < 0)
    throw Error(ErrorCode::ConductorMismatch,
                "CONDUCTOR_MISMATCH: nontrivial character with conductor of degree " + std::to_string(deg + 2));
  return static_cast<unsigned>(deg);
}

// ---------------------------------------------------------------- Euler products

EulerHistogram euler_histogram(const CharacterRep& chi, unsigned max_degree, const LOptions& opt) {
  EulerHistogram h;
  h.order = chi.value_order();
  const unsigned n = h.order;
  h.counts.assign(max_degree + 1, std::vector<std::uint64_t>(n, 0));
  if (max_degree == 0) return h;

  const Place inf = Place::infinity();
  const LocalData li = chi.local(inf);
  if (li.ramified)
    h.ramified.push_back(inf);
  else
    ++h.counts[1][li.exponent];

  auto table = table_for(chi, max_degree, opt);
  const bool uniform = chi.factors().empty();
  for (unsigned d = 1; d <= max_degree; ++d) {
    const auto& idx = table->indices(d);
    if (uniform) {
      const LocalData ld = chi.local(table->place(d, 0));
      h.counts[d][ld.exponent] += idx.size();
      continue;
    }
    const unsigned workers = std::max(1u, std::min<unsigned>(opt.workers, static_cast<unsigned>(idx.size() / 256 + 1)));
    std::vector<std::vector<std::uint64_t>> part(workers, std::vector<std::uint64_t>(n, 0));
    std::vector<std::vector<Place>> ram(workers);
    auto run = [&](unsigned w) {
      const std::size_t lo = idx.size() * w / workers, hi = idx.size() * (w + 1) / workers;
      for (std::size_t i = lo; i < hi; ++i) {
        Place v = table->place(d, i);
        const LocalData ld = chi.local(v);
        if (ld.ramified)
          ram[w].push_back(std::move(v));
        else
          ++part[w][ld.exponent];
      }
    };
    if (workers == 1) {
      run(0);
    } else {
      std::vector<std::thread> threads;
      for (unsigned w = 0; w < workers; ++w) threads.emplace_back(run, w);
      for (auto& t : threads) t.join();
    }
    for (unsigned w = 0; w < workers; ++w) {
      for (unsigned e = 0; e < n; ++e) h.counts[d][e] += part[w][e];
      h.ramified.insert(h.ramified.end(), ram[w].begin(), ram[w].end());
    }
  }
  return h;
}

CycPoly euler_product_series(const CharacterRep& chi, const EulerHistogram& h, unsigned deg) {
  const unsigned n = h.order;
  if (chi.weight() < 0) throw Error(ErrorCode::Unsupported, "negative cyclotomic weight has non-integral Frobenius values");
  std::vector<CyclotomicInteger> s(deg + 1, CyclotomicInteger(n));
  s[0] = CyclotomicInteger(n, 1);
  const unsigned top = std::min<unsigned>(deg, static_cast<unsigned>(h.counts.size()) - 1);
  for (unsigned d = 1; d <= top; ++d) {
    const Integer qw = ipow(Integer(chi.q()), static_cast<std::uint64_t>(chi.weight()) * d);
    for (unsigned e = 0; e < n; ++e) {
      const std::uint64_t c = h.counts[d][e];
      if (c == 0) continue;
      const CyclotomicInteger a = CyclotomicInteger::zeta_power(n, e) * qw;
      // (1 - a t^d)^{-c} = sum_k binom(c+k-1, k) a^k t^{dk}
      std::vector<CyclotomicInteger> f(deg + 1, CyclotomicInteger(n));
      Integer b = 1;
      CyclotomicInteger ak(n, 1);
      for (unsigned k = 0; k * d <= deg; ++k) {
        if (k > 0) {
          b = b * (Integer(c) + k - 1) / k;
          ak *= a;
        }
        f[k * d] = ak * b;
      }
      s = mul_trunc(CycPoly(n, s), CycPoly(n, f), deg).c;
      s.resize(deg + 1, CyclotomicInteger(n));
    }
  }
  return CycPoly(n, std::move(s));
}

CycPoly direct_series(const CharacterRep& chi, const TruncationSpec& spec, unsigned deg, const LOptions& opt) {
  spec.validate();
  const unsigned n = chi.value_order();
  std::vector<CyclotomicInteger> s(deg + 1, CyclotomicInteger(n));
  s[0] = CyclotomicInteger(n, 1);
  if (deg == 0) return CycPoly(n, std::move(s));
  auto table = table_for(chi, deg, opt);
  auto apply = [&](const Place& v) {
    if (contains(spec.sigma_w, v)) return;
    auto a = chi.frobenius_value(v);
    if (!a) return;
    mul_inverse_binomial(s, *a, v.degree);
    if (contains(spec.sigma_v, v)) mul_binomial(s, *a * q_power(n, chi.q(), v.degree), v.degree);
  };
  apply(Place::infinity());
  for (unsigned d = 1; d <= deg; ++d)
    for (std::size_t i = 0; i < table->finite_count(d); ++i) apply(table->place(d, i));
  // Sigma places above the expansion degree still contribute their modification.
  for (const auto& v : spec.sigma_v)
    if (v.degree > deg) {
      auto a = chi.frobenius_value(v);
      if (a) {
        mul_inverse_binomial(s, *a, v.degree);
        mul_binomial(s, *a * q_power(n, chi.q(), v.degree), v.degree);
      }
    }
  for (const auto& v : spec.sigma_w)
    if (v.degree > deg) {
      auto a = chi.frobenius_value(v);
      if (a) mul_binomial(s, *a, v.degree);
    }
  return CycPoly(n, std::move(s));
}

LPolynomial l_function(const CharacterRep& chi, const TruncationSpec& spec, const LOptions& opt) {
  spec.validate();
  const unsigned n = chi.value_order();
  const PolyRing& R = chi.ring();
  std::vector<std::string> prov;

  CycPoly num = one_poly(n);
  for (const auto& v : spec.sigma_w) {
    num = num * euler_factor(chi, v);
    prov.push_back("sigma_w " + place_to_string(R, v) + (chi.local(v).ramified ? " (ramified)" : ""));
  }
  // A Sigma_V place loses its Euler factor and gains the modified one: net 1 - a q^d t^d.
  for (const auto& v : spec.sigma_v) {
    num = num * modified_local_factor(chi, v, 0, 1).numerator;
    prov.push_back("sigma_v " + place_to_string(R, v) + (chi.local(v).ramified ? " (ramified)" : ""));
  }

  if (chi.is_geometrically_trivial()) {
    // Frobenius acts by c^{deg v} everywhere: the core is Z_{P^1}(c t).
    const CyclotomicInteger c = frobenius_or_throw(chi, Place::infinity());
    const CycPoly d1 = CycPoly::binomial(c, 1), d2 = CycPoly::binomial(c * q_power(n, chi.q(), 1), 1);
    const unsigned D = std::min(opt.trivial_check_degree, opt.degree_cap);
    const auto h = euler_histogram(chi, D, opt);
    const CycPoly series = euler_product_series(chi, h, D);
    if (series != mul_trunc(inverse_series(d1, D), inverse_series(d2, D), D))
      throw Error(ErrorCode::InternalCountError,
                  "INTERNAL_COUNT_ERROR: Euler product of a geometrically trivial character disagrees with Z(ct)");
    prov.insert(prov.begin(), "core: geometrically trivial, Z(c t) with c = " + c.to_string() +
                                  ", checked against the Euler product through t^" + std::to_string(D));
    LPolynomial L = cancel(num, {d1, d2});
    L.provenance = std::move(prov);
    return L;
  }

  const unsigned B = degree_bound(chi);
  const unsigned D = B + opt.guard;
  const auto h = euler_histogram(chi, D, opt);
  CycPoly core = euler_product_series(chi, h, D);
  for (unsigned k = B + 1; k <= D; ++k)
    if (!core.coeff(k).is_zero())
      throw Error(ErrorCode::ConductorMismatch, "CONDUCTOR_MISMATCH: coefficient of t^" + std::to_string(k) +
                                                    " is nonzero beyond the degree bound " + std::to_string(B) +
                                                    " (conductor " + std::to_string(chi.conductor().degree()) + ")");
  core = truncate(core, B);
  std::uint64_t places = 0;
  for (const auto& row : h.counts)
    for (auto c : row) places += c;
  std::ostringstream os;
  os << "core: Euler product over " << places << " unramified places of degree <= " << D << ", bound " << B
     << ", guard " << opt.guard << ", ramified {";
  for (std::size_t i = 0; i < h.ramified.size(); ++i) os << (i ? ", " : "") << place_to_string(R, h.ramified[i]);
  os << "}";
  prov.insert(prov.begin(), os.str());
  LPolynomial L(core * num, CycPoly::one(n));
  L.provenance = std::move(prov);
  return L;
}

// ---------------------------------------------------------------- functional equation

std::string Epsilon::to_string() const {
  std::ostringstream os;
  os << "(" << constant.to_string() << ")*q^" << q_power << "*t^" << t_power;
  return os.str();
}

namespace {

// P(1/(q t)) = (q t)^{-deg P} * reversed_q(P)(t)
CycPoly reversed_q(const CycPoly& P, std::uint64_t q) {
  const int k = P.degree();
  std::vector<CyclotomicInteger> r;
  for (int j = 0; j <= k; ++j) r.push_back(P.c[k - j] * ipow(Integer(q), j));
  return CycPoly(P.n, std::move(r));
}

}  // namespace

FunctionalEquationResult functional_equation_check(const LPolynomial& L, const LPolynomial& Ldual, std::uint64_t q) {
  FunctionalEquationResult res;
  const unsigned m = common_order(L.order(), Ldual.order());
  const CycPoly N = lift(L.numerator, m), D = lift(L.denominator, m);
  const CycPoly Nd = lift(Ldual.numerator, m), Dd = lift(Ldual.denominator, m);
  const CycPoly X = N * reversed_q(Dd, q);
  const CycPoly Y = reversed_q(Nd, q) * D;
  const int shift = Nd.degree() - Dd.degree();
  if (X.degree() != Y.degree()) {
    res.diagnostic = "degree mismatch: L has degrees " + std::to_string(N.degree()) + "/" + std::to_string(D.degree()) +
                     ", dual side " + std::to_string(Nd.degree()) + "/" + std::to_string(Dd.degree());
    return res;
  }
  // X = c q^k Y with k maximal such that c is integral.
  const unsigned p = static_cast<unsigned>(prime_divisors(q).front());
  int e = 0;
  for (std::uint64_t r = q; r > 1; r /= p) ++e;
  const int phi = static_cast<int>(euler_phi(m));
  const int vx = valuation(X.c[0].norm(), p), vy = valuation(Y.c[0].norm(), p);
  std::optional<CyclotomicInteger> c;
  int k = vx / (phi * e) + 1;
  for (; k >= -(vy / (phi * e)) - 1; --k) {
    const CyclotomicInteger qa(m, ipow(Integer(q), static_cast<std::uint64_t>(std::max(0, -k))));
    const CyclotomicInteger qb(m, ipow(Integer(q), static_cast<std::uint64_t>(std::max(0, k))));
    try {
      c = (X.c[0] * qa).exact_div(Y.c[0] * qb);
    } catch (const Error&) {
      continue;
    }
    if (scale(X, qa) != scale(Y, *c * qb)) {
      res.diagnostic = "L(t) and eps*Ldual(1/(qt)) differ: " + ffmc::to_string(X) + " vs " + ffmc::to_string(Y);
      return res;
    }
    break;
  }
  if (!c) {
    res.diagnostic = "leading coefficients differ by a factor that is not an integer times a power of q";
    return res;
  }
  res.ok = true;
  res.epsilon.constant = *c;
  res.epsilon.q = q;
  res.epsilon.q_power = k + shift;
  res.epsilon.t_power = shift;
  return res;
}

std::optional<unsigned> Epsilon::root_of_unity_exponent() const { return constant.root_of_unity_exponent(); }

bool epsilon_pair_is_inverse(const Epsilon& e, const Epsilon& es) {
  // e(t) es(1/(qt)) = c c' q^{a + a' - b'} t^{b - b'}
  if (e.t_power != es.t_power) return false;
  const unsigned m = common_order(e.constant.order(), es.constant.order());
  const int s = e.q_power + es.q_power - es.t_power;
  const CyclotomicInteger prod = e.constant.lift(m) * es.constant.lift(m);
  if (s >= 0) return prod * ipow(Integer(e.q), static_cast<std::uint64_t>(s)) == CyclotomicInteger(m, 1);
  return prod == CyclotomicInteger(m, ipow(Integer(e.q), static_cast<std::uint64_t>(-s)));
}

LPolynomial dual_l_function(const CharacterRep& chi, const TruncationSpec& spec, const LOptions& opt) {
  return l_function(reps::dual(chi), spec.swapped(), opt);
}

}  // namespace ffmc::lfun
