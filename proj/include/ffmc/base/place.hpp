#pragma once

#include <string>
#include <vector>

#include "ffmc/base/fq_poly.hpp"

namespace ffmc {

/// Closed point of P^1 over F_q: a monic irreducible polynomial or infinity.
struct Place {
  bool infinite = false;
  FqPoly poly;
  unsigned degree = 1;

  static Place infinity() { return Place{true, {}, 1}; }
  static Place finite(FqPoly monic_irreducible) {
    const unsigned d = static_cast<unsigned>(monic_irreducible.degree());
    return Place{false, std::move(monic_irreducible), d};
  }

  friend bool operator==(const Place& a, const Place& b) {
    return a.infinite == b.infinite && a.poly == b.poly;
  }
  friend bool operator!=(const Place& a, const Place& b) { return !(a == b); }
};

constexpr unsigned kDefaultPlaceDegreeCap = 16;

/// Canonical order: degree, then infinity first, then natural index.
bool place_less(const PolyRing& R, const Place& a, const Place& b);

std::string place_to_string(const PolyRing& R, const Place& v);
/// "inf" or a monic irreducible polynomial.
Place parse_place(const PolyRing& R, const std::string& text);

/// Monic irreducibles grouped by degree, stored as natural indices.
class PlaceTable {
 public:
  PlaceTable() = default;
  PlaceTable(const FiniteField& F, unsigned max_degree, unsigned workers = 1,
             unsigned degree_cap = kDefaultPlaceDegreeCap);

  const FiniteField& field() const { return field_.front(); }
  unsigned max_degree() const { return static_cast<unsigned>(by_degree_.size()) - 1; }
  /// Sorted natural indices of the finite places of degree d.
  const std::vector<std::uint64_t>& indices(unsigned d) const { return by_degree_.at(d); }
  std::size_t finite_count(unsigned d) const { return by_degree_.at(d).size(); }
  Place place(unsigned d, std::size_t i) const;
  /// Infinity followed by all finite places in canonical order.
  std::vector<Place> places() const;

  friend bool operator==(const PlaceTable& a, const PlaceTable& b) {
    return a.field() == b.field() && a.by_degree_ == b.by_degree_;
  }

  static PlaceTable from_indices(const FiniteField& F, std::vector<std::vector<std::uint64_t>> by_degree);

 private:
  std::vector<FiniteField> field_;  // one element; FiniteField has no default state
  std::vector<std::vector<std::uint64_t>> by_degree_;  // slot 0 unused
};

std::vector<Place> enumerate_places(const FiniteField& F, unsigned max_degree,
                                    unsigned degree_cap = kDefaultPlaceDegreeCap);

/// Monic irreducibles of exactly degree d, by a product sieve over the index space.
/// `lower` holds the index lists for degrees 1..d/2.
std::vector<std::uint64_t> sieve_irreducibles(const FiniteField& F, unsigned d,
                                              const std::vector<std::vector<std::uint64_t>>& lower,
                                              unsigned workers = 1);

/// f mod v, an element of F_q[t]/(v). Infinity is rejected.
FqPoly residue_value(const PolyRing& R, const FqPoly& f, const Place& v);

/// Place cache: header `# ffmc-places p=.. e=.. modulus=.. max_degree=..`, then
/// one `degree<TAB>csv` line per place (infinity written as `1<TAB>inf`).
void write_place_cache(const std::string& path, const PlaceTable& table);
PlaceTable read_place_cache(const std::string& path, const FiniteField& F);
/// File name used under a cache directory for F.
std::string cache_file_name(const FiniteField& F);
/// Reads the cache under dir when it matches and is large enough, otherwise
/// enumerates and rewrites it. An empty dir disables caching.
PlaceTable load_or_build_places(const std::string& dir, const FiniteField& F, unsigned max_degree,
                                unsigned workers = 1, unsigned degree_cap = kDefaultPlaceDegreeCap);

}  // namespace ffmc
