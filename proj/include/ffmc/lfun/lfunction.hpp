#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ffmc/base/cyc_poly.hpp"
#include "ffmc/base/place.hpp"
#include "ffmc/reps/character.hpp"

namespace ffmc::lfun {

using reps::CharacterRep;
using reps::LocalData;

/// numerator / denominator in Z[zeta_n][t], both with constant term 1.
struct LPolynomial {
  CycPoly numerator;
  CycPoly denominator;
  std::vector<std::string> provenance;

  LPolynomial() : numerator(CycPoly::one(1)), denominator(CycPoly::one(1)) {}
  LPolynomial(CycPoly num, CycPoly den);

  unsigned order() const { return numerator.n; }
  bool is_polynomial() const { return denominator.degree() == 0; }
  /// Power series expansion through t^deg.
  CycPoly series(unsigned deg) const;
  std::string to_string() const;

  /// Exact equality as rational functions.
  friend bool operator==(const LPolynomial& a, const LPolynomial& b);
  friend bool operator!=(const LPolynomial& a, const LPolynomial& b) { return !(a == b); }
};

LPolynomial operator*(const LPolynomial& a, const LPolynomial& b);
/// a / b as rational functions.
LPolynomial divide(const LPolynomial& a, const LPolynomial& b);
/// L(s t)
LPolynomial scale_variable(const LPolynomial& L, const CyclotomicInteger& s);
LPolynomial lift(const LPolynomial& L, unsigned order);

/// Sigma_W (Euler factor removed) and Sigma_V (factor replaced by the modified one).
struct TruncationSpec {
  std::vector<Place> sigma_w;
  std::vector<Place> sigma_v;

  /// Rejects overlaps and repeated places.
  void validate() const;
  TruncationSpec swapped() const { return {sigma_v, sigma_w}; }
};

struct LOptions {
  unsigned guard = 2;
  unsigned workers = 1;
  unsigned degree_cap = kDefaultPlaceDegreeCap;
  /// Reused when it reaches far enough; otherwise places are enumerated.
  std::shared_ptr<const PlaceTable> places;
  /// Degree of the Euler-product cross-check for geometrically trivial characters.
  unsigned trivial_check_degree = 4;
};

/// det(1 - Frob_v t^{deg v} | T^{I_v}).
CycPoly euler_factor(const CharacterRep& chi, const Place& v);

/// (1 - chi(v) q^{(w+1)d} t^d) / (1 - chi(v) q^{wd} t^d), or 1/1 at ramified v.
/// Wild ramification with ell = p is rejected.
LPolynomial modified_local_factor(const CharacterRep& chi, const Place& v, std::uint64_t ell, unsigned N);

/// deg(conductor) - 2, for characters that are not geometrically trivial.
unsigned degree_bound(const CharacterRep& chi);

/// Frobenius data of unramified places grouped by degree and root-of-unity exponent.
struct EulerHistogram {
  unsigned order = 1;                                 // value order n
  std::vector<std::vector<std::uint64_t>> counts;     // counts[d][e], d = 0 unused
  std::vector<Place> ramified;

  friend bool operator==(const EulerHistogram& a, const EulerHistogram& b) {
    return a.order == b.order && a.counts == b.counts && a.ramified == b.ramified;
  }
};

/// Histogram over all places of degree <= max_degree (infinity included).
/// The fold is partitioned over workers and merged; the result is independent of the partition.
EulerHistogram euler_histogram(const CharacterRep& chi, unsigned max_degree, const LOptions& opt = {});
/// prod over the histogram of (1 - a t^d)^{-1}, truncated at t^deg.
CycPoly euler_product_series(const CharacterRep& chi, const EulerHistogram& h, unsigned deg);

/// Euler product over places of degree <= deg outside Sigma_W with Sigma_V factors
/// substituted, expanded place by place through t^deg (independent of the closed form).
CycPoly direct_series(const CharacterRep& chi, const TruncationSpec& spec, unsigned deg, const LOptions& opt = {});

/// Exact L_{Sigma_W, Sigma_V}(chi, t). A nonzero guard coefficient raises CONDUCTOR_MISMATCH.
LPolynomial l_function(const CharacterRep& chi, const TruncationSpec& spec, const LOptions& opt = {});

/// c q^j t^k with c in Z[zeta_n] not divisible by q.
struct Epsilon {
  CyclotomicInteger constant{1, 1};
  int q_power = 0;
  int t_power = 0;
  std::uint64_t q = 1;

  /// k with c = zeta^k, when c is a root of unity.
  std::optional<unsigned> root_of_unity_exponent() const;
  std::string to_string() const;
};

struct FunctionalEquationResult {
  bool ok = false;
  Epsilon epsilon;
  std::string diagnostic;
};

/// Finds the monomial with L(t) = eps * Ldual(1/(q t)).
FunctionalEquationResult functional_equation_check(const LPolynomial& L, const LPolynomial& Ldual, std::uint64_t q);
/// eps(t) * eps'(1/(q t)) == 1
bool epsilon_pair_is_inverse(const Epsilon& e, const Epsilon& e_swapped);

/// l_function of the dual character with the truncation sets exchanged.
LPolynomial dual_l_function(const CharacterRep& chi, const TruncationSpec& spec, const LOptions& opt = {});

}  // namespace ffmc::lfun
