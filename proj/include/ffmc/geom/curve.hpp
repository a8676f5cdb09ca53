#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ffmc/base/cyc_poly.hpp"
#include "ffmc/base/fq_poly.hpp"

namespace ffmc::geom {

constexpr std::uint64_t kDefaultMaxEvaluations = 10'000'000;

/// Smooth projective model of y^m = f(t) over F_q, m | q - 1, f squarefree.
class SuperellipticCurve {
 public:
  SuperellipticCurve(const PolyRing& R, unsigned m, FqPoly f);

  const PolyRing& ring() const { return R_; }
  std::uint64_t q() const { return R_.q(); }
  unsigned m() const { return m_; }
  const FqPoly& f() const { return f_; }
  /// Riemann-Hurwitz: 2g - 2 = -2m + (m-1) deg f + m - gcd(m, deg f).
  unsigned genus() const { return genus_; }
  std::string describe() const;

 private:
  PolyRing R_;
  unsigned m_;
  FqPoly f_;
  unsigned genus_ = 0;
};

/// F_{q^n} = F_q[z]/(P) with P primitive, elements packed base q, with log/exp tables.
class ExtensionField {
 public:
  ExtensionField(const FiniteField& F, unsigned n, std::uint64_t max_size = kDefaultMaxEvaluations);

  std::uint64_t size() const { return size_; }
  const FqPoly& modulus() const { return modulus_; }
  /// Packed image of an element of F_q.
  std::uint64_t embed(FieldElem c) const { return c; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    if (a == 0 || b == 0) return 0;
    std::uint64_t e = static_cast<std::uint64_t>(log_[a]) + log_[b];
    if (e >= size_ - 1) e -= size_ - 1;
    return exp_[e];
  }
  /// a + c with c in F_q (only the constant digit changes).
  std::uint64_t add_base(std::uint64_t a, FieldElem c) const {
    const std::uint64_t d0 = a % q_;
    return a - d0 + F_.add(static_cast<FieldElem>(d0), c);
  }
  std::uint32_t log(std::uint64_t a) const { return log_.at(a); }
  std::uint64_t exp(std::uint64_t e) const { return exp_[e % (size_ - 1)]; }

 private:
  FiniteField F_;
  unsigned n_;
  std::uint64_t q_, size_;
  FqPoly modulus_;
  std::vector<std::uint32_t> log_, exp_;
};

/// #C(F_{q^n}): affine solutions by exhaustive evaluation, one point over each zero of f,
/// and the branches over infinity found by enumerating z in F_{q^n} with z^gcd(m, deg f) = lc(f).
std::uint64_t count_points(const SuperellipticCurve& C, unsigned n, unsigned workers = 1,
                           std::uint64_t max_evaluations = kDefaultMaxEvaluations);

struct ZetaData {
  std::vector<std::uint64_t> counts;  // #C(F_{q^n}), n = 1..2g
  std::vector<Integer> P;             // zeta numerator, P(0) = 1, degree 2g
  Integer h;                          // P(1)
  int fe_sign = 1;
};

/// Counts for n = 1..2g, Newton identities, then the functional equation
/// P(t) = sign q^g t^{2g} P(1/(qt)) is asserted (INTERNAL_COUNT_ERROR otherwise).
ZetaData zeta_numerator(const SuperellipticCurve& C, unsigned workers = 1,
                        std::uint64_t max_evaluations = kDefaultMaxEvaluations);

/// Numerator of zeta from counts N_1..N_k (Newton identities, exact).
std::vector<Integer> numerator_from_counts(std::uint64_t q, const std::vector<std::uint64_t>& counts);

/// prod (1 - alpha_i^r t) for P = prod (1 - alpha_i t); P_r(1) = prod_{zeta^r = 1} P(zeta) is asserted.
std::vector<Integer> base_change_numerator(const std::vector<Integer>& P, unsigned r);
/// prod_{zeta^r = 1} P(zeta), computed in Z[zeta_r].
Integer norm_product(const std::vector<Integer>& P, unsigned r);

/// p_{2g-k} = sign q^{g-k} p_k and |p_k| <= C(2g, k) q^{k/2}.
bool weil_bound_holds(const std::vector<Integer>& P, std::uint64_t q);

/// |Jac(F_{q^r})| by a second method when available (genus 0: 1, genus 1: #C(F_{q^r})).
std::optional<Integer> class_number_direct(const SuperellipticCurve& C, unsigned r, unsigned workers = 1,
                                           std::uint64_t max_evaluations = kDefaultMaxEvaluations);

struct ArtinResult {
  bool pass = false;
  std::vector<Integer> counted;  // P_{C'} from point counts
  CycPoly product;               // prod of the supplied L-polynomials
};

/// P_{C'}(t) == prod of the given L-polynomials (the nontrivial characters of the cover).
ArtinResult artin_factorization_check(const ZetaData& Z, const std::vector<CycPoly>& l_polynomials);

}  // namespace ffmc::geom
