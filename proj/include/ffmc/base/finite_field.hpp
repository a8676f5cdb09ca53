#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ffmc/base/integer.hpp"

namespace ffmc {

/// Element of F_{p^e}, packed as the integer sum of its F_p-digits times p^i
/// in the polynomial basis 1, x, ..., x^{e-1} of F_p[x]/(modulus).
using FieldElem = std::uint64_t;

enum class TableMode {
  Auto,   // build log/exp tables when q <= 2^16
  Force,  // always build (q must stay below the table cap)
  None,
};

/// F_q = F_p[x]/(modulus). Cheap to copy; all copies share immutable state.
class FiniteField {
 public:
  static constexpr std::uint64_t kTableCap = std::uint64_t{1} << 26;

  static FiniteField prime(std::uint32_t p, TableMode mode = TableMode::Auto);
  /// Uses the least monic irreducible of degree e in natural order
  /// (coefficient vector read as a base-p number, constant term least significant).
  static FiniteField create(std::uint32_t p, unsigned e, TableMode mode = TableMode::Auto);
  static FiniteField with_modulus(std::uint32_t p, std::vector<std::uint32_t> modulus,
                                  TableMode mode = TableMode::Auto);
  /// F_q from q = p^e.
  static FiniteField of_order(std::uint64_t q, TableMode mode = TableMode::Auto);

  std::uint32_t characteristic() const { return impl_->p; }
  unsigned degree() const { return impl_->e; }
  std::uint64_t order() const { return impl_->q; }
  const std::vector<std::uint32_t>& modulus() const { return impl_->modulus; }
  bool has_tables() const { return !impl_->log_tab.empty(); }

  FieldElem zero() const { return 0; }
  FieldElem one() const { return 1; }
  FieldElem from_int(std::int64_t v) const {
    return static_cast<FieldElem>(mod_floor(v, impl_->p));
  }
  bool in_prime_field(FieldElem a) const { return a < impl_->p; }

  FieldElem add(FieldElem a, FieldElem b) const {
    if (impl_->small) return impl_->add_tab[a * impl_->q + b];
    return add_slow(a, b);
  }
  FieldElem neg(FieldElem a) const {
    if (impl_->small) return impl_->neg_tab[a];
    return neg_slow(a);
  }
  FieldElem sub(FieldElem a, FieldElem b) const { return add(a, neg(b)); }
  FieldElem mul(FieldElem a, FieldElem b) const {
    if (a == 0 || b == 0) return 0;
    if (!impl_->log_tab.empty()) return impl_->exp_tab[impl_->log_tab[a] + impl_->log_tab[b]];
    return mul_slow(a, b);
  }
  FieldElem inv(FieldElem a) const;
  FieldElem div(FieldElem a, FieldElem b) const { return mul(a, inv(b)); }
  FieldElem pow(FieldElem a, std::uint64_t e) const;
  FieldElem pow(FieldElem a, const Integer& e) const;

  /// Fixed generator of F_q^x (least in packed order).
  FieldElem primitive_element() const { return impl_->primitive; }
  /// Discrete logarithm to base primitive_element(). Requires tables, a != 0.
  std::uint64_t log(FieldElem a) const;
  /// primitive_element()^k. Requires tables.
  FieldElem exp(std::uint64_t k) const { return impl_->exp_tab[k % (impl_->q - 1)]; }

  std::vector<std::uint32_t> digits(FieldElem a) const;
  FieldElem from_digits(const std::vector<std::uint32_t>& d) const;

  /// Image of x (the class of the modulus variable).
  FieldElem generator_x() const { return impl_->e == 1 ? 0 : impl_->p; }

  std::string describe() const;

  friend bool operator==(const FiniteField& a, const FiniteField& b) {
    return a.impl_ == b.impl_ || (a.impl_->p == b.impl_->p && a.impl_->modulus == b.impl_->modulus);
  }

 private:
  struct Impl {
    std::uint32_t p = 0;
    unsigned e = 0;
    std::uint64_t q = 0;
    std::vector<std::uint32_t> modulus;  // little-endian, monic, size e+1
    FieldElem primitive = 1;
    std::vector<std::uint32_t> exp_tab;  // size 2(q-1)
    std::vector<std::uint32_t> log_tab;  // size q
    bool small = false;                  // q <= 256: add/neg tables
    std::vector<std::uint16_t> add_tab;
    std::vector<std::uint16_t> neg_tab;
  };

  explicit FiniteField(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  static FiniteField build(std::uint32_t p, std::vector<std::uint32_t> modulus, TableMode mode);

  FieldElem add_slow(FieldElem a, FieldElem b) const;
  FieldElem neg_slow(FieldElem a) const;
  FieldElem mul_slow(FieldElem a, FieldElem b) const;

  std::shared_ptr<const Impl> impl_;
};

/// Irreducibility over F_p of a little-endian coefficient vector; exhaustive
/// factor search for degree <= 4, Ben-Or style gcd test beyond.
bool is_irreducible_over_prime_field(std::uint32_t p, const std::vector<std::uint32_t>& poly);

}  // namespace ffmc
