#include "ffmc/lfun/local_complex.hpp"

namespace ffmc::lfun {

CycMatrix mat_identity(unsigned order, std::size_t dim) {
  CycMatrix I(dim, std::vector<CyclotomicInteger>(dim, CyclotomicInteger(order)));
  for (std::size_t i = 0; i < dim; ++i) I[i][i] = CyclotomicInteger(order, 1);
  return I;
}

CycMatrix mat_mul(const CycMatrix& a, const CycMatrix& b) {
  if (a.empty()) return {};
  const unsigned n = a[0][0].order();
  CycMatrix c(a.size(), std::vector<CyclotomicInteger>(b.empty() ? 0 : b[0].size(), CyclotomicInteger(n)));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[k].size(); ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

namespace {

CycMatrix mat_add(CycMatrix a, const CycMatrix& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] += b[i][j];
  return a;
}

CycMatrix mat_pow(const CycMatrix& a, std::uint64_t e, unsigned n) {
  CycMatrix r = mat_identity(n, a.size()), b = a;
  while (e) {
    if (e & 1) r = mat_mul(r, b);
    b = mat_mul(b, b);
    e >>= 1;
  }
  return r;
}

CycPoly det_rec(const std::vector<std::vector<CycPoly>>& m, unsigned n) {
  const std::size_t k = m.size();
  if (k == 0) return CycPoly::one(n);
  if (k == 1) return m[0][0];
  CycPoly acc(n);
  for (std::size_t j = 0; j < k; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<CycPoly>> minor;
    for (std::size_t i = 1; i < k; ++i) {
      std::vector<CycPoly> row;
      for (std::size_t c = 0; c < k; ++c)
        if (c != j) row.push_back(m[i][c]);
      minor.push_back(std::move(row));
    }
    CycPoly term = m[0][j] * det_rec(minor, n);
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

}  // namespace

CycPoly det_one_minus(const CycMatrix& M, unsigned d) {
  const std::size_t k = M.size();
  if (k > 8) throw Error(ErrorCode::ResourceLimit, "determinant by expansion limited to dimension 8");
  const unsigned n = k ? M[0][0].order() : 1;
  std::vector<std::vector<CycPoly>> m(k, std::vector<CycPoly>(k, CycPoly(n)));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<CyclotomicInteger> c(d + 1, CyclotomicInteger(n));
      if (i == j) c[0] = CyclotomicInteger(n, 1);
      c[d] -= M[i][j];
      m[i][j] = CycPoly(n, std::move(c));
    }
  return det_rec(m, n);
}

LocalFactorComplex::LocalFactorComplex(unsigned order, std::uint64_t q, unsigned degree, CycMatrix phi, CycMatrix tau)
    : n_(order), q_(q), d_(degree), phi_(std::move(phi)), tau_(std::move(tau)) {
  const std::size_t k = phi_.size();
  if (tau_.size() != k) throw Error(ErrorCode::InvalidArgument, "phi and tau must have the same size");
  const CycMatrix I = mat_identity(n_, k);
  // Finite order of tau.
  CycMatrix p = tau_;
  tau_order_ = 1;
  while (p != I) {
    p = mat_mul(p, tau_);
    if (++tau_order_ > 100000) throw Error(ErrorCode::Unsupported, "inertia generator of infinite or excessive order");
  }
  if (tau_order_ % static_cast<std::uint64_t>(prime_divisors(q_).front()) == 0)
    throw Error(ErrorCode::Unsupported, "wild inertia (order divisible by p)");
  // sum_{m < q^d} tau^m
  const Integer qd = ipow(Integer(q_), d_);
  const std::uint64_t full = static_cast<std::uint64_t>(qd / tau_order_);
  const std::uint64_t rest = static_cast<std::uint64_t>(qd % tau_order_);
  CycMatrix cycle(k, std::vector<CyclotomicInteger>(k, CyclotomicInteger(n_)));
  CycMatrix partial = cycle;
  CycMatrix pw = I;
  for (std::uint64_t m = 0; m < tau_order_; ++m) {
    if (m < rest) partial = mat_add(partial, pw);
    cycle = mat_add(cycle, pw);
    pw = mat_mul(pw, tau_);
  }
  for (auto& row : cycle)
    for (auto& x : row) x = x * Integer(full);
  frob1_ = mat_mul(phi_, mat_add(cycle, partial));
  diff_ = I;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) diff_[i][j] -= tau_[i][j];
}

LocalFactorComplex LocalFactorComplex::from_character(const CharacterRep& chi, const Place& v) {
  const unsigned n = chi.value_order();
  auto a = chi.frobenius_value(v);
  if (!a) return LocalFactorComplex(n, chi.q(), v.degree, {}, {});
  return LocalFactorComplex(n, chi.q(), v.degree, {{*a}}, mat_identity(n, 1));
}

bool LocalFactorComplex::relation_holds() const {
  const std::uint64_t e = static_cast<std::uint64_t>(ipow(Integer(q_), d_) % tau_order_);
  return mat_mul(tau_, phi_) == mat_mul(phi_, mat_pow(tau_, e, n_));
}

bool LocalFactorComplex::is_equivariant() const { return mat_mul(diff_, phi_) == mat_mul(frob1_, diff_); }

LPolynomial LocalFactorComplex::factor() const {
  return LPolynomial(det_one_minus(frob1_, d_), det_one_minus(phi_, d_));
}

}  // namespace ffmc::lfun
