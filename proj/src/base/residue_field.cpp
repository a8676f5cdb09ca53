#include "ffmc/base/residue_field.hpp"

namespace ffmc {

ResidueField::ResidueField(const PolyRing& R, FqPoly P, std::uint64_t table_cap)
    : R_(R), P_(std::move(P)), size_(0), table_cap_(table_cap) {
  if (P_.degree() < 1 || P_.lc() != 1 || !R_.is_irreducible(P_))
    throw Error(ErrorCode::InvalidArgument, "residue field modulus must be monic irreducible");
  size_ = upow(R_.q(), degree());
  const auto primes = prime_divisors(size_ - 1);
  for (std::uint64_t idx = 1; idx < size_; ++idx) {
    FqPoly g = unpack(idx);
    bool ok = true;
    for (auto r : primes) {
      if (pow(g, (size_ - 1) / r) == R_.one()) {
        ok = false;
        break;
      }
    }
    if (ok) {
      gen_ = std::move(g);
      return;
    }
  }
  throw Error(ErrorCode::InternalCountError, "no generator found in residue field");
}

std::uint64_t ResidueField::pack(const FqPoly& reduced) const {
  const std::uint64_t q = R_.q();
  std::uint64_t idx = 0;
  for (std::size_t i = reduced.c.size(); i-- > 0;) idx = idx * q + reduced.c[i];
  return idx;
}

FqPoly ResidueField::unpack(std::uint64_t idx) const {
  const std::uint64_t q = R_.q();
  std::vector<FieldElem> c(degree());
  for (auto& x : c) {
    x = idx % q;
    idx /= q;
  }
  return FqPoly(std::move(c));
}

void ResidueField::build_table() const {
  log_.assign(size_, 0);
  FqPoly x = R_.one();
  for (std::uint64_t k = 0; k + 1 < size_; ++k) {
    log_[pack(x)] = static_cast<std::uint32_t>(k);
    x = mul(x, gen_);
  }
}

std::uint64_t ResidueField::dlog(const FqPoly& f) const {
  const FqPoly r = reduce(f);
  if (r.is_zero()) throw Error(ErrorCode::InvalidArgument, "discrete log of a non-unit residue");
  if (size_ > table_cap_)
    throw Error(ErrorCode::ResourceLimit, "residue field of size " + std::to_string(size_) + " exceeds the log-table cap " +
                                              std::to_string(table_cap_));
  std::call_once(once_, [this] { build_table(); });
  return log_[pack(r)];
}

}  // namespace ffmc
