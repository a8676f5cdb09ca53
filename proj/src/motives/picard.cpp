#include "ffmc/motives/picard.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace ffmc::motives {

namespace {

void check_reduced(const PolyRing& R, const std::vector<Place>& Z, const char* name) {
  for (std::size_t i = 0; i < Z.size(); ++i) {
    if (!Z[i].infinite && (Z[i].poly.lc() != 1 || !R.is_irreducible(Z[i].poly)))
      throw Error(ErrorCode::InvalidArgument, std::string(name) + " contains a non-place " + place_to_string(R, Z[i]));
    for (std::size_t k = 0; k < i; ++k)
      if (Z[i] == Z[k])
        throw Error(ErrorCode::InvalidArgument,
                    std::string(name) + " is not reduced: " + place_to_string(R, Z[i]) + " repeated");
  }
}

std::uint64_t mod_u(const Integer& x, std::uint64_t n) {
  Integer r = x % n;
  if (r < 0) r += n;
  return static_cast<std::uint64_t>(r);
}

using Mat = std::vector<std::vector<std::uint64_t>>;

Mat mat_mul_mod(const Mat& A, const Mat& B, std::uint64_t n) {
  const std::size_t D = A.size();
  Mat C(D, std::vector<std::uint64_t>(D, 0));
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t k = 0; k < D; ++k)
      for (std::size_t j = 0; j < D; ++j)
        C[i][j] = static_cast<std::uint64_t>((C[i][j] + static_cast<unsigned __int128>(A[i][k]) * B[k][j]) % n);
  return C;
}

// Order of the kernel of A on (Z/n)^D: prod gcd(d_i, n) over the Smith diagonal (0 counts as n).
Integer kernel_order(const Mat& A, std::uint64_t n) {
  const std::size_t D = A.size();
  if (D == 0) return 1;
  IntMatrix M(D, std::vector<Integer>(D));
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t j = 0; j < D; ++j) M[i][j] = A[i][j];
  const SmithForm s = smith_normal_form(M, D);
  Integer k = 1;
  for (std::size_t i = 0; i < D; ++i) k *= gcd(i < s.diagonal.size() ? s.diagonal[i] : Integer(0), Integer(n));
  return k;
}

using PolyN = std::vector<std::uint64_t>;

PolyN poly_mul(const PolyN& a, const PolyN& b, std::uint64_t n) {
  PolyN c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      c[i + j] = static_cast<std::uint64_t>((c[i + j] + static_cast<unsigned __int128>(a[i]) * b[j]) % n);
  return c;
}

PolyN poly_add(PolyN a, const PolyN& b, std::uint64_t n, bool subtract) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + (subtract ? (n - b[i]) % n : b[i])) % n;
  return a;
}

// det of a matrix of polynomials by cofactor expansion along the first row.
PolyN poly_det(const std::vector<std::vector<PolyN>>& M, std::uint64_t n) {
  const std::size_t D = M.size();
  if (D == 0) return {1 % n};
  if (D == 1) return M[0][0];
  PolyN acc{0};
  for (std::size_t c = 0; c < D; ++c) {
    std::vector<std::vector<PolyN>> minor;
    for (std::size_t i = 1; i < D; ++i) {
      std::vector<PolyN> row;
      for (std::size_t j = 0; j < D; ++j)
        if (j != c) row.push_back(M[i][j]);
      minor.push_back(std::move(row));
    }
    acc = poly_add(acc, poly_mul(M[0][c], poly_det(minor, n), n), n, c % 2 == 1);
  }
  return acc;
}

// Fields with forced tables, shared by every motive over the same F_{p^e}.
FiniteField table_field(std::uint32_t p, unsigned e) {
  static std::mutex mu;
  static std::map<std::pair<std::uint32_t, unsigned>, FiniteField> cache;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_pair(p, e);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, FiniteField::create(p, e, TableMode::Force)).first;
  return it->second;
}

}  // namespace

// ---------------------------------------------------------------- F_{q^j}

BigField::BigField(const FiniteField& base, unsigned j, std::uint64_t cap)
    : base_(base), K_(base), j_(j) {
  if (j == 0) throw Error(ErrorCode::InvalidArgument, "extension degree j must be >= 1");
  const Integer size = ipow(Integer(base.order()), j);
  if (size > cap || size > FiniteField::kTableCap)
    throw Error(ErrorCode::ResourceLimit, "F_{" + std::to_string(base.order()) + "^" + std::to_string(j) + "} has " +
                                              ffmc::to_string(size) + " elements, above the field cap " +
                                              std::to_string(cap));
  K_ = table_field(base.characteristic(), base.degree() * j);
  // Embedding: send x to a root of the modulus of F_q.
  FieldElem theta = 0;
  if (base.degree() > 1) {
    const auto& m = base.modulus();
    bool found = false;
    for (FieldElem z = 1; z < K_.order() && !found; ++z) {
      FieldElem v = 0;
      for (std::size_t i = m.size(); i-- > 0;) v = K_.add(K_.mul(v, z), K_.from_int(m[i]));
      if (v == 0) {
        theta = z;
        found = true;
      }
    }
    if (!found) throw Error(ErrorCode::InternalCountError, "no embedding of F_q found");
  }
  base_image_.resize(base.order());
  for (FieldElem c = 0; c < base.order(); ++c) {
    const auto d = base.digits(c);
    FieldElem v = 0;
    for (std::size_t i = d.size(); i-- > 0;) v = K_.add(K_.mul(v, theta), K_.from_int(d[i]));
    base_image_[c] = v;
  }
}

FieldElem BigField::embed(FieldElem c) const { return base_image_.at(c); }

FqPoly BigField::embed(const FqPoly& f) const {
  std::vector<FieldElem> c;
  for (auto x : f.c) c.push_back(embed(x));
  return FqPoly(std::move(c));
}

std::vector<FieldElem> BigField::roots(const Place& v) const {
  if (v.infinite) throw Error(ErrorCode::InvalidArgument, "infinity has no affine root");
  if (j_ % v.degree != 0)
    throw Error(ErrorCode::InvalidArgument, "place of degree " + std::to_string(v.degree) + " is not split by F_{q^" +
                                                std::to_string(j_) + "}");
  const FqPoly P = embed(v.poly);
  const std::uint64_t q = base_.order();
  auto is_root = [&](FieldElem z) {
    FieldElem val = 0;
    for (std::size_t i = P.c.size(); i-- > 0;) val = K_.add(K_.mul(val, z), P.c[i]);
    return val == 0;
  };
  // The roots lie in the subfield F_{q^d}, generated by g^{(q^j - 1)/(q^d - 1)}.
  const std::uint64_t sub = upow(q, v.degree);
  const FieldElem h = K_.pow(K_.primitive_element(), (K_.order() - 1) / (sub - 1));
  FieldElem z = K_.one();
  for (std::uint64_t k = 0; k <= sub - 1; ++k, z = K_.mul(z, h)) {
    if (k == sub - 1) z = 0;
    if (!is_root(z)) continue;
    std::vector<FieldElem> orbit{z};
    for (unsigned i = 1; i < v.degree; ++i) orbit.push_back(K_.pow(orbit.back(), q));
    return orbit;
  }
  throw Error(ErrorCode::InternalCountError, "place has no root in F_{q^j}");
}

unsigned minimal_degree(std::uint64_t q, const std::vector<Place>& places, std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  if (gcd_u64(q, n) != 1) throw Error(ErrorCode::Unsupported, "n must be prime to the characteristic");
  unsigned ord = 1;
  std::uint64_t x = q % n;
  while (n > 1 && x != 1 % n) {
    x = static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * q % n);
    ++ord;
  }
  std::uint64_t j = ord;
  for (const auto& v : places) j = lcm_u64(j, v.degree);
  return static_cast<unsigned>(j);
}

// ---------------------------------------------------------------- relative Picard

RelativePicard::RelativePicard(const PolyRing& R, std::vector<Place> modulus, unsigned j, std::uint64_t cap)
    : R_(R), modulus_(std::move(modulus)), j_(j) {
  if (modulus_.empty()) throw Error(ErrorCode::InvalidArgument, "modulus must be nonempty");
  check_reduced(R_, modulus_, "modulus");
  big_ = std::make_unique<BigField>(R_.field(), j_, cap);
  const FiniteField& K = big_->field();
  field_size_ = K.order();
  const PolyRing RK(K);
  const FieldElem w = K.primitive_element();
  std::vector<Integer> w_logs;
  for (const auto& v : modulus_) {
    if (v.infinite) {
      components_.push_back(nullptr);
      component_orders_.push_back(Integer(field_size_ - 1));
      w_logs.push_back(1);
      continue;
    }
    for (const auto& [g, mult] : RK.factor(big_->embed(v.poly))) {
      (void)mult;
      auto F = std::make_shared<ResidueField>(RK, g, cap);
      component_orders_.push_back(Integer(F->unit_order()));
      w_logs.push_back(Integer(F->dlog(RK.constant(w))));
      components_.push_back(std::move(F));
    }
  }
  const std::size_t k = component_orders_.size();
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Integer> row(k, 0);
    row[i] = component_orders_[i];
    relations_.push_back(row);
  }
  relations_.push_back(w_logs);
  snf_ = smith_normal_form(relations_, k);
  for (std::size_t i = 0; i < k; ++i) {
    const Integer d = i < snf_.diagonal.size() ? snf_.diagonal[i] : Integer(0);
    if (d == 0) throw Error(ErrorCode::InternalCountError, "relative Picard group is infinite");
    if (d != 1) {
      invariants_.push_back(d);
      invariant_slots_.push_back(i);
    }
  }
  Integer units = 1;
  for (const auto& o : component_orders_) units *= o;
  if (order() * (field_size_ - 1) != units)
    throw Error(ErrorCode::InternalCountError, "relative Picard order differs from |units| / (q^j - 1)");
}

Integer RelativePicard::order() const {
  Integer o = 1;
  for (const auto& d : invariants_) o *= d;
  return o;
}

Integer RelativePicard::torsion_order(std::uint64_t n) const {
  Integer o = 1;
  for (const auto& d : invariants_) o *= gcd(d, Integer(n));
  return o;
}

RelativePicard::Class RelativePicard::class_of(const FqPoly& g) const {
  if (g.is_zero()) throw Error(ErrorCode::InvalidArgument, "zero has no class");
  const FqPoly G = big_->embed(g);
  std::vector<Integer> x;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (!components_[i]) throw Error(ErrorCode::Unsupported, "class_of needs a modulus away from infinity");
    const FqPoly r = components_[i]->reduce(G);
    if (r.is_zero()) throw Error(ErrorCode::InvalidArgument, "function is not prime to the modulus");
    x.push_back(Integer(components_[i]->dlog(r)));
  }
  Class c;
  c.degree = g.degree();
  for (std::size_t s = 0; s < invariant_slots_.size(); ++s) {
    Integer v = 0;
    for (std::size_t i = 0; i < x.size(); ++i) v += x[i] * snf_.V[i][invariant_slots_[s]];
    v %= invariants_[s];
    if (v < 0) v += invariants_[s];
    c.coords.push_back(v);
  }
  return c;
}

RelativePicard::Class RelativePicard::combine(const Class& a, const Class& b) const {
  Class c;
  c.degree = a.degree + b.degree;
  for (std::size_t s = 0; s < invariants_.size(); ++s) c.coords.push_back((a.coords.at(s) + b.coords.at(s)) % invariants_[s]);
  return c;
}

// ---------------------------------------------------------------- motive torsion

MotiveTorsion::MotiveTorsion(const PolyRing& R, std::vector<Place> Z1, std::vector<Place> Z2, std::uint64_t n,
                             std::optional<unsigned> j, std::uint64_t cap)
    : Z1_(std::move(Z1)), Z2_(std::move(Z2)), n_(n), q_(R.q()) {
  if (n_ == 0) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  if (n_ % R.field().characteristic() == 0)
    throw Error(ErrorCode::Unsupported, "n = " + std::to_string(n_) + " is divisible by the characteristic");
  if (Z1_.empty() || Z2_.empty()) throw Error(ErrorCode::InvalidArgument, "Z1 and Z2 must be nonempty");
  check_reduced(R, Z1_, "Z1");
  check_reduced(R, Z2_, "Z2");
  for (const auto& v : Z1_)
    if (std::find(Z2_.begin(), Z2_.end(), v) != Z2_.end())
      throw Error(ErrorCode::InvalidArgument, "Z1 and Z2 meet at " + place_to_string(R, v));

  std::vector<Place> all = Z1_;
  all.insert(all.end(), Z2_.begin(), Z2_.end());
  const unsigned jmin = minimal_degree(q_, all, n_);
  j_ = j.value_or(jmin);
  if (j_ % jmin != 0)
    throw Error(ErrorCode::InvalidArgument, "j = " + std::to_string(j_) + " is not a multiple of " + std::to_string(jmin));
  const BigField big(R.field(), j_, cap);
  const FiniteField& K = big.field();
  Qm1_ = Integer(K.order() - 1);

  auto points = [&](const std::vector<Place>& Z, std::vector<FieldElem>& pts, std::vector<bool>& inf,
                    std::vector<std::size_t>& pi) {
    for (const auto& v : Z) {
      const std::size_t start = pts.size();
      if (v.infinite) {
        pts.push_back(0);
        inf.push_back(true);
        pi.push_back(start);
        continue;
      }
      const auto rts = big.roots(v);
      for (std::size_t i = 0; i < rts.size(); ++i) {
        pts.push_back(rts[i]);
        inf.push_back(false);
        pi.push_back(start + (i + 1) % rts.size());
      }
    }
  };
  points(Z1_, a_, a_inf_, pi_a_);
  points(Z2_, b_, b_inf_, pi_b_);
  const std::size_t r = a_.size(), s = b_.size();

  // f_i has divisor a_i - a_0; its value at infinity is 1 when both are finite.
  for (std::size_t i = 1; i < r; ++i) {
    std::vector<Integer> row;
    for (std::size_t k = 0; k < s; ++k) {
      FieldElem val;
      if (b_inf_[k])
        val = 1;
      else if (a_inf_[0])
        val = K.sub(b_[k], a_[i]);
      else if (a_inf_[i])
        val = K.inv(K.sub(b_[k], a_[0]));
      else
        val = K.div(K.sub(b_[k], a_[i]), K.sub(b_[k], a_[0]));
      row.push_back(Integer(K.log(val)));
    }
    dl_.push_back(std::move(row));
  }

  // Lattice indices: T = relations of the quotient, S = kernel of (lambda, x) -> n x - u(lambda) in G'.
  const Integer Np = Integer(n_) * Qm1_;
  const std::size_t m = (r - 1) + s;
  IntMatrix T, Lam, Img;
  for (std::size_t k = 0; k < s; ++k) {
    std::vector<Integer> row(m, 0), row_s(s, 0);
    row[(r - 1) + k] = Np;
    row_s[k] = Np;
    T.push_back(row);
    Lam.push_back(row_s);
    Img.push_back(row_s);
    std::fill(row_s.begin(), row_s.end(), Integer(0));
    row_s[k] = n_;
    Img.push_back(row_s);
  }
  std::vector<Integer> diag(m, 0), diag_s(s, 1);
  for (std::size_t k = 0; k < s; ++k) diag[(r - 1) + k] = 1;
  T.push_back(diag);
  Lam.push_back(diag_s);
  Img.push_back(diag_s);
  for (std::size_t i = 1; i < r; ++i) {
    std::vector<Integer> row(m, 0), u(s);
    row[i - 1] = n_;
    for (std::size_t k = 0; k < s; ++k) {
      row[(r - 1) + k] = Integer(n_) * dl_[i - 1][k];
      u[k] = -Integer(n_) * dl_[i - 1][k];
    }
    T.push_back(row);
    Img.push_back(u);
  }
  order_ = abelian_invariants(T, m).order() * abelian_invariants(Img, s).order() / abelian_invariants(Lam, s).order();
  const Integer expected = ipow(Integer(n_), dimension());
  if (order_ != expected)
    throw Error(ErrorCode::InternalCountError, "INTERNAL_COUNT_ERROR: motive torsion has order " +
                                                   ffmc::to_string(order_) + ", expected " + ffmc::to_string(expected));

  const std::size_t D = dimension();
  frob_.assign(D, std::vector<std::uint64_t>(D, 0));
  for (std::size_t c = 0; c < D; ++c) {
    const auto [lam, x] = basis_element(c);
    const auto [lam2, x2] = apply_frobenius(lam, x);
    const auto col = decode(lam2, x2);
    for (std::size_t i = 0; i < D; ++i) frob_[i][c] = col[i];
  }
}

std::pair<std::vector<Integer>, std::vector<Integer>> MotiveTorsion::basis_element(std::size_t i) const {
  const std::size_t r = a_.size(), s = b_.size();
  std::vector<Integer> lam(r - 1, 0), x(s, 0);
  if (i < s - 1) {
    x[i + 1] = Qm1_;
  } else {
    const std::size_t l = i - (s - 1);
    lam.at(l) = 1;
    x = dl_.at(l);
  }
  return {lam, x};
}

std::pair<std::vector<Integer>, std::vector<Integer>> MotiveTorsion::apply_frobenius(
    const std::vector<Integer>& lambda, const std::vector<Integer>& x) const {
  const std::size_t r = a_.size(), s = b_.size();
  // Divisor sum lambda_i (a_i - a_0) as a vector on the points, then permuted.
  std::vector<Integer> div(r, 0);
  for (std::size_t i = 1; i < r; ++i) {
    div[i] += lambda[i - 1];
    div[0] -= lambda[i - 1];
  }
  std::vector<Integer> moved(r, 0);
  for (std::size_t i = 0; i < r; ++i) moved[pi_a_[i]] += div[i];
  std::vector<Integer> lam2(moved.begin() + 1, moved.end());
  std::vector<Integer> x2(s, 0);
  for (std::size_t k = 0; k < s; ++k) x2[pi_b_[k]] = x[k] * q_;
  return {lam2, x2};
}

std::vector<std::uint64_t> MotiveTorsion::decode(const std::vector<Integer>& lambda, const std::vector<Integer>& x) const {
  const std::size_t r = a_.size(), s = b_.size();
  std::vector<Integer> y = x;
  for (std::size_t i = 1; i < r; ++i)
    for (std::size_t k = 0; k < s; ++k) y[k] -= lambda[i - 1] * dl_[i - 1][k];
  std::vector<std::uint64_t> out;
  for (std::size_t k = 1; k < s; ++k) {
    const Integer d = y[k] - y[0];
    if (d % Qm1_ != 0) throw Error(ErrorCode::InternalCountError, "element is not n-torsion over its lattice part");
    out.push_back(mod_u(d / Qm1_, n_));
  }
  for (std::size_t i = 1; i < r; ++i) out.push_back(mod_u(lambda[i - 1], n_));
  return out;
}

std::vector<std::uint64_t> MotiveTorsion::charpoly() const {
  const std::size_t D = dimension();
  if (D > 9) throw Error(ErrorCode::ResourceLimit, "characteristic polynomial limited to dimension 9");
  std::vector<std::vector<PolyN>> M(D, std::vector<PolyN>(D));
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t k = 0; k < D; ++k) {
      M[i][k] = {(n_ - frob_[i][k] % n_) % n_};
      if (i == k) M[i][k].push_back(1 % n_);
    }
  PolyN c = poly_det(M, n_);
  c.resize(D + 1, 0);
  return c;
}

Integer MotiveTorsion::fixed_point_count() const {
  Mat A = frob_;
  for (std::size_t i = 0; i < A.size(); ++i) A[i][i] = (A[i][i] + n_ - 1 % n_) % n_;
  return kernel_order(A, n_);
}

std::uint64_t MotiveTorsion::frobenius_order() const {
  const std::size_t D = dimension();
  Mat I(D, std::vector<std::uint64_t>(D, 0));
  for (std::size_t i = 0; i < D; ++i) I[i][i] = 1 % n_;
  Mat P = frob_;
  for (std::uint64_t k = 1; k <= 1'000'000; ++k) {
    if (P == I) return k;
    P = mat_mul_mod(P, frob_, n_);
  }
  throw Error(ErrorCode::InternalCountError, "Frobenius has no finite order below 10^6");
}

// ---------------------------------------------------------------- checks

CheckResult duality_order_check(const PolyRing& R, const std::vector<Place>& Z1, const std::vector<Place>& Z2,
                                std::uint64_t n, std::uint64_t cap) {
  const MotiveTorsion A(R, Z1, Z2, n, std::nullopt, cap);
  const MotiveTorsion B(R, Z2, Z1, n, std::nullopt, cap);
  CheckResult res;
  std::ostringstream os;
  os << "orders " << A.order() << " and " << B.order();
  bool ok = A.order() == B.order();
  const auto ca = A.charpoly(), cb = B.charpoly();
  const std::size_t D = A.dimension();
  // t^D ca(q/t) has coefficient ca[k] q^k at t^{D-k}.
  std::vector<std::uint64_t> rev(D + 1, 0);
  std::uint64_t qk = 1 % n;
  for (std::size_t k = 0; k <= D; ++k) {
    rev[D - k] = static_cast<std::uint64_t>(static_cast<unsigned __int128>(ca[k]) * qk % n);
    qk = static_cast<std::uint64_t>(static_cast<unsigned __int128>(qk) * (R.q() % n) % n);
  }
  const std::uint64_t c0 = ca[0];
  for (std::size_t k = 0; k <= D && ok; ++k)
    if (static_cast<std::uint64_t>(static_cast<unsigned __int128>(cb[k]) * c0 % n) != rev[k]) ok = false;
  os << (ok ? ", characteristic polynomials dual" : ", characteristic polynomials not dual");
  res.pass = ok;
  res.detail = os.str();
  return res;
}

CheckResult fixed_points_check(const PolyRing& R, const std::vector<Place>& Z2, std::uint64_t n, std::uint64_t cap) {
  const MotiveTorsion M(R, {Place::infinity()}, Z2, n, std::nullopt, cap);
  const RelativePicard P(R, Z2, 1, cap);
  const Integer lhs = M.fixed_point_count(), rhs = P.torsion_order(n);
  CheckResult res;
  res.pass = lhs == rhs;
  res.detail = "Frobenius-fixed torsion " + ffmc::to_string(lhs) + ", rational relative Picard " + std::to_string(n) +
               "-torsion " + ffmc::to_string(rhs);
  return res;
}

CheckResult tower_check(const PolyRing& R, const std::vector<Place>& Z1, const std::vector<Place>& Z2,
                        std::uint64_t ell, unsigned N, std::uint64_t cap) {
  if (N == 0) throw Error(ErrorCode::InvalidArgument, "tower depth must be >= 1");
  std::vector<Place> all = Z1;
  all.insert(all.end(), Z2.begin(), Z2.end());
  const unsigned j = minimal_degree(R.q(), all, upow(ell, N));
  std::vector<MotiveTorsion> levels;
  for (unsigned k = 1; k <= N; ++k) levels.emplace_back(R, Z1, Z2, upow(ell, k), j, cap);
  CheckResult res;
  res.pass = true;
  std::ostringstream os;
  for (unsigned k = 1; k < N; ++k) {
    const MotiveTorsion& hi = levels[k];
    const MotiveTorsion& lo = levels[k - 1];
    const std::size_t D = hi.dimension();
    // (lambda, omega_hi^x) -> (lambda, omega_hi^{ell x}) = (lambda, omega_lo^x).
    Mat Tr(D, std::vector<std::uint64_t>(D, 0));
    for (std::size_t c = 0; c < D; ++c) {
      const auto [lam, x] = hi.basis_element(c);
      const auto col = lo.decode(lam, x);
      for (std::size_t i = 0; i < D; ++i) Tr[i][c] = col[i];
    }
    // Image order through the Smith form over Z/n_lo, then kernel = |source| / |image|.
    IntMatrix M(D, std::vector<Integer>(D));
    for (std::size_t i = 0; i < D; ++i)
      for (std::size_t c = 0; c < D; ++c) M[i][c] = Tr[i][c];
    Integer image = 1;
    if (D > 0) {
      const SmithForm s = smith_normal_form(M, D);
      for (std::size_t i = 0; i < D; ++i) {
        const Integer d = i < s.diagonal.size() ? s.diagonal[i] : Integer(0);
        image *= Integer(lo.n()) / gcd(d, Integer(lo.n()));
      }
    }
    const Integer kernel = hi.order() / image;
    const bool onto = image == lo.order();
    const bool kernel_ok = kernel == ipow(Integer(ell), D);
    // Frobenius commutes with the transition: Tr * F_hi = F_lo * Tr mod n_lo.
    Mat F_hi_red = hi.frobenius();
    for (auto& row : F_hi_red)
      for (auto& v : row) v %= lo.n();
    const bool frob_ok = mat_mul_mod(Tr, F_hi_red, lo.n()) == mat_mul_mod(lo.frobenius(), Tr, lo.n());
    if (!(onto && kernel_ok && frob_ok)) res.pass = false;
    os << "level " << hi.n() << " -> " << lo.n() << ": kernel " << kernel << (onto ? "" : ", not onto")
       << (frob_ok ? "" : ", Frobenius incompatible") << "; ";
  }
  res.detail = os.str();
  return res;
}

}  // namespace ffmc::motives
