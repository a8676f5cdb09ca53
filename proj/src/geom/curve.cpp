#include "ffmc/geom/curve.hpp"

#include <sstream>
#include <thread>

namespace ffmc::geom {

SuperellipticCurve::SuperellipticCurve(const PolyRing& R, unsigned m, FqPoly f) : R_(R), m_(m), f_(std::move(f)) {
  if (m_ == 0 || (R_.q() - 1) % m_ != 0)
    throw Error(ErrorCode::InvalidArgument, "cover degree m = " + std::to_string(m_) + " must divide q - 1");
  if (f_.is_zero()) throw Error(ErrorCode::InvalidArgument, "f must be nonzero");
  if (m_ > 1 && (f_.degree() < 1 || !R_.is_squarefree(f_)))
    throw Error(ErrorCode::InvalidArgument, "f must be squarefree of positive degree");
  const int d = f_.degree();
  const int g2 = (static_cast<int>(m_) - 1) * d - static_cast<int>(m_) - static_cast<int>(gcd_u64(m_, static_cast<std::uint64_t>(d))) + 2;
  genus_ = static_cast<unsigned>(std::max(0, g2 / 2));
}

std::string SuperellipticCurve::describe() const {
  std::ostringstream os;
  os << "y^" << m_ << " = " << R_.print(f_) << " over F_" << R_.q();
  return os.str();
}

// ---------------------------------------------------------------- F_{q^n}

ExtensionField::ExtensionField(const FiniteField& F, unsigned n, std::uint64_t max_size) : F_(F), n_(n), q_(F.order()) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "extension degree must be >= 1");
  Integer Q = ipow(Integer(q_), n);
  if (Q > max_size || Q > std::numeric_limits<std::uint32_t>::max())
    throw Error(ErrorCode::ResourceLimit, "F_{q^" + std::to_string(n) + "} has " + ffmc::to_string(Q) +
                                              " elements, above the evaluation cap " + std::to_string(max_size));
  size_ = static_cast<std::uint64_t>(Q);
  PolyRing R(F);
  const auto primes = prime_divisors(size_ - 1);
  for (std::uint64_t idx = 0;; ++idx) {
    FqPoly P = R.from_index(idx, n);
    if (P.coeff(0) == 0 || !R.is_irreducible(P)) continue;
    bool primitive = true;
    for (auto r : primes)
      if (R.powmod(R.t(), Integer((size_ - 1) / r), P) == R.one()) {
        primitive = false;
        break;
      }
    if (primitive) {
      modulus_ = P;
      break;
    }
  }
  // exp by repeated multiplication with z.
  log_.assign(size_, 0);
  exp_.assign(size_ - 1, 0);
  std::vector<FieldElem> dig(n, 0);
  dig[0] = 1;
  std::vector<std::uint64_t> place(n, 1);
  for (unsigned i = 1; i < n; ++i) place[i] = place[i - 1] * q_;
  for (std::uint64_t e = 0; e + 1 < size_; ++e) {
    std::uint64_t packed = 0;
    for (unsigned i = 0; i < n; ++i) packed += dig[i] * place[i];
    exp_[e] = static_cast<std::uint32_t>(packed);
    log_[packed] = static_cast<std::uint32_t>(e);
    const FieldElem carry = dig[n - 1];
    for (unsigned i = n - 1; i > 0; --i) dig[i] = dig[i - 1];
    dig[0] = 0;
    if (carry)
      for (unsigned i = 0; i < n; ++i) dig[i] = F_.sub(dig[i], F_.mul(carry, modulus_.coeff(i)));
  }
}

// ---------------------------------------------------------------- counting

std::uint64_t count_points(const SuperellipticCurve& C, unsigned n, unsigned workers, std::uint64_t max_evaluations) {
  const ExtensionField K(C.ring().field(), n, max_evaluations);
  const std::uint64_t Q = K.size();
  const unsigned m = C.m();
  const FqPoly& f = C.f();
  const int d = f.degree();

  // Affine part: m points over each x with f(x) a nonzero m-th power, one over each root.
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(Q / 4096 + 1)));
  std::vector<std::uint64_t> partial(workers, 0);
  auto run = [&](unsigned w) {
    const std::uint64_t lo = Q * w / workers, hi = Q * (w + 1) / workers;
    std::uint64_t acc = 0;
    for (std::uint64_t x = lo; x < hi; ++x) {
      std::uint64_t v = K.embed(f.c[d]);
      for (int i = d - 1; i >= 0; --i) v = K.add_base(K.mul(v, x), f.c[i]);
      if (v == 0)
        acc += 1;
      else if (K.log(v) % m == 0)
        acc += m;
    }
    partial[w] = acc;
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> th;
    for (unsigned w = 0; w < workers; ++w) th.emplace_back(run, w);
    for (auto& t : th) t.join();
  }
  std::uint64_t total = 0;
  for (auto p : partial) total += p;

  // Over infinity: with x = 1/s, (y^{m/g} s^{d/g})^g = s^d f(1/s), which is lc(f) at s = 0.
  // Each z in F_{q^n} with z^g = lc(f) is one rational branch (totally ramified of index m/g).
  const unsigned g = static_cast<unsigned>(gcd_u64(m, static_cast<std::uint64_t>(d)));
  const std::uint64_t lc = K.embed(f.lc());
  std::uint64_t at_inf = 0;
  for (std::uint64_t z = 1; z < Q; ++z) {
    std::uint64_t zg = 1;
    for (unsigned i = 0; i < g; ++i) zg = K.mul(zg, z);
    if (zg == lc) ++at_inf;
  }
  return total + at_inf;
}

std::vector<Integer> numerator_from_counts(std::uint64_t q, const std::vector<std::uint64_t>& counts) {
  // S_k = q^k + 1 - N_k = sum alpha_i^k; P = prod (1 - alpha_i t) = sum c_k t^k.
  const std::size_t D = counts.size();
  std::vector<Integer> S(D + 1, 0), c(D + 1, 0);
  for (std::size_t k = 1; k <= D; ++k) S[k] = ipow(Integer(q), k) + 1 - Integer(counts[k - 1]);
  c[0] = 1;
  for (std::size_t k = 1; k <= D; ++k) {
    Integer acc = S[k];
    for (std::size_t i = 1; i < k; ++i) acc += c[i] * S[k - i];
    if (acc % k != 0) throw Error(ErrorCode::InternalCountError, "INTERNAL_COUNT_ERROR: Newton identity not integral");
    c[k] = -acc / k;
  }
  return c;
}

ZetaData zeta_numerator(const SuperellipticCurve& C, unsigned workers, std::uint64_t max_evaluations) {
  ZetaData Z;
  const unsigned g = C.genus();
  const std::uint64_t q = C.q();
  for (unsigned n = 1; n <= 2 * g; ++n) Z.counts.push_back(count_points(C, n, workers, max_evaluations));
  Z.P = numerator_from_counts(q, Z.counts);
  // Functional equation, not used as an input.
  const Integer top = Z.P[2 * g];
  const Integer qg = ipow(Integer(q), g);
  if (top != qg && top != -qg)
    throw Error(ErrorCode::InternalCountError, "INTERNAL_COUNT_ERROR: leading coefficient " + ffmc::to_string(top) +
                                                   " is not +-q^g for " + C.describe());
  Z.fe_sign = top == qg ? 1 : -1;
  for (unsigned k = 0; k <= 2 * g; ++k) {
    const Integer lhs = Z.P[2 * g - k];
    const Integer rhs = k <= g ? Z.P[k] * ipow(Integer(q), g - k) * Z.fe_sign : Integer(0);
    if (k <= g && lhs != rhs)
      throw Error(ErrorCode::InternalCountError,
                  "INTERNAL_COUNT_ERROR: functional equation fails at t^" + std::to_string(2 * g - k) + " for " + C.describe());
  }
  Z.h = 0;
  for (const auto& x : Z.P) Z.h += x;
  return Z;
}

Integer norm_product(const std::vector<Integer>& P, unsigned r) {
  if (r == 0) throw Error(ErrorCode::InvalidArgument, "r must be >= 1");
  CyclotomicInteger prod(r, 1);
  for (unsigned j = 0; j < r; ++j) {
    const CyclotomicInteger z = CyclotomicInteger::zeta_power(r, j);
    CyclotomicInteger v(r), zk(r, 1);
    for (const auto& c : P) {
      v += zk * c;
      zk *= z;
    }
    prod *= v;
  }
  if (!prod.is_integer()) throw Error(ErrorCode::InternalCountError, "norm product is not rational");
  return prod.to_integer();
}

std::vector<Integer> base_change_numerator(const std::vector<Integer>& P, unsigned r) {
  if (P.empty() || P[0] != 1) throw Error(ErrorCode::InvalidArgument, "base change needs P(0) = 1");
  if (r == 0) throw Error(ErrorCode::InvalidArgument, "r must be >= 1");
  const std::size_t D = P.size() - 1;
  // Power sums of the inverse roots up to r D.
  std::vector<Integer> S(r * D + 1, 0);
  for (std::size_t k = 1; k <= r * D; ++k) {
    Integer acc = k <= D ? Integer(P[k] * k) : Integer(0);
    for (std::size_t i = 1; i < k && i <= D; ++i) acc += P[i] * S[k - i];
    S[k] = -acc;
  }
  std::vector<Integer> out(D + 1, 0);
  out[0] = 1;
  for (std::size_t k = 1; k <= D; ++k) {
    Integer acc = S[r * k];
    for (std::size_t i = 1; i < k; ++i) acc += out[i] * S[r * (k - i)];
    if (acc % k != 0) throw Error(ErrorCode::InternalCountError, "base change coefficients not integral");
    out[k] = -acc / k;
  }
  Integer at_one = 0;
  for (const auto& c : out) at_one += c;
  if (at_one != norm_product(P, r))
    throw Error(ErrorCode::InternalCountError, "P_r(1) differs from the product of P over r-th roots of unity");
  return out;
}

bool weil_bound_holds(const std::vector<Integer>& P, std::uint64_t q) {
  if (P.empty() || (P.size() - 1) % 2 != 0) return false;
  const std::size_t g = (P.size() - 1) / 2;
  const Integer top = P[2 * g], qg = ipow(Integer(q), g);
  if (top != qg && top != -qg) return false;
  const int sign = top == qg ? 1 : -1;
  Integer binom = 1;
  for (std::size_t k = 0; k <= 2 * g; ++k) {
    if (k > 0) binom = binom * (2 * g - k + 1) / k;
    if (P[k] * P[k] > binom * binom * ipow(Integer(q), k)) return false;
    if (k <= g && P[2 * g - k] != P[k] * ipow(Integer(q), g - k) * sign) return false;
  }
  return true;
}

std::optional<Integer> class_number_direct(const SuperellipticCurve& C, unsigned r, unsigned workers,
                                           std::uint64_t max_evaluations) {
  if (C.genus() == 0) return Integer(1);
  // A genus-1 curve over a finite field has a rational point, so it is its own Jacobian.
  if (C.genus() == 1) return Integer(count_points(C, r, workers, max_evaluations));
  return std::nullopt;
}

ArtinResult artin_factorization_check(const ZetaData& Z, const std::vector<CycPoly>& l_polynomials) {
  ArtinResult res;
  res.counted = Z.P;
  unsigned n = 1;
  for (const auto& L : l_polynomials) n = common_order(n, L.n);
  CycPoly prod = CycPoly::one(n);
  for (const auto& L : l_polynomials) prod = prod * lift(L, n);
  res.product = prod;
  res.pass = prod == CycPoly::from_integers(n, Z.P);
  return res;
}

}  // namespace ffmc::geom
