#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "ffmc/base/fq_poly.hpp"

namespace ffmc {

/// F_q[t]/(P) for a monic irreducible P, with a fixed generator of its unit
/// group and a lazily built discrete-log table.
class ResidueField {
 public:
  static constexpr std::uint64_t kDefaultTableCap = std::uint64_t{1} << 24;

  ResidueField(const PolyRing& R, FqPoly P, std::uint64_t table_cap = kDefaultTableCap);

  const FqPoly& modulus() const { return P_; }
  unsigned degree() const { return static_cast<unsigned>(P_.degree()); }
  std::uint64_t size() const { return size_; }
  std::uint64_t unit_order() const { return size_ - 1; }

  FqPoly reduce(const FqPoly& f) const { return R_.mod(f, P_); }
  std::uint64_t pack(const FqPoly& reduced) const;
  FqPoly unpack(std::uint64_t idx) const;
  FqPoly mul(const FqPoly& a, const FqPoly& b) const { return R_.mulmod(a, b, P_); }
  FqPoly pow(const FqPoly& a, std::uint64_t e) const { return R_.powmod(a, Integer(e), P_); }

  /// Least (by packed index) generator of the unit group.
  const FqPoly& generator() const { return gen_; }
  /// log_generator(f mod P); f must be a unit mod P.
  std::uint64_t dlog(const FqPoly& f) const;

 private:
  PolyRing R_;
  FqPoly P_;
  std::uint64_t size_;
  std::uint64_t table_cap_;
  FqPoly gen_;
  mutable std::once_flag once_;
  mutable std::vector<std::uint32_t> log_;
  void build_table() const;
};

}  // namespace ffmc
