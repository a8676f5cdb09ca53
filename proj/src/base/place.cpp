#include "ffmc/base/place.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace ffmc {

bool place_less(const PolyRing& R, const Place& a, const Place& b) {
  if (a.degree != b.degree) return a.degree < b.degree;
  if (a.infinite != b.infinite) return a.infinite;
  if (a.infinite) return false;
  return R.index(a.poly) < R.index(b.poly);
}

std::string place_to_string(const PolyRing& R, const Place& v) {
  return v.infinite ? std::string("inf") : R.print(v.poly);
}

Place parse_place(const PolyRing& R, const std::string& text) {
  if (text == "inf" || text == "oo" || text == "infinity") return Place::infinity();
  FqPoly f = R.parse(text);
  if (f.degree() < 1 || f.lc() != 1)
    throw Error(ErrorCode::InvalidArgument, "place '" + text + "' must be monic of positive degree");
  if (!R.is_irreducible(f)) throw Error(ErrorCode::InvalidArgument, "place '" + text + "' is not irreducible");
  return Place::finite(std::move(f));
}

namespace {

std::uint64_t checked_space(const FiniteField& F, unsigned d) {
  const std::uint64_t n = upow(F.order(), d);
  if (n > (std::uint64_t{1} << 34))
    throw Error(ErrorCode::ResourceLimit, "place sieve for q^" + std::to_string(d) + " exceeds 2^34 entries");
  return n;
}

struct Contribution {
  unsigned pos;
  std::uint32_t val;
};

// Marks every product h*g with g monic of degree d - deg h, walking the lower
// coefficients of g in a reflected p-ary Gray code so each step adds +-x^j t^i h.
void mark_multiples(const FiniteField& F, const FqPoly& h, unsigned d, const std::vector<std::uint64_t>& pw,
                    std::uint64_t* bits) {
  const unsigned p = F.characteristic();
  const unsigned e = F.degree();
  const unsigned k = static_cast<unsigned>(h.degree());
  const unsigned L = d * e;
  const unsigned gdigits = (d - k) * e;

  std::vector<std::uint32_t> dig(L, 0);
  std::uint64_t idx = 0;
  for (unsigned a = 0; a < k; ++a) {
    const auto hd = F.digits(h.c[a]);
    for (unsigned j = 0; j < e; ++j) {
      const unsigned pos = (a + d - k) * e + j;
      dig[pos] = hd[j];
      idx += hd[j] * pw[pos];
    }
  }

  std::vector<std::vector<Contribution>> contrib(gdigits);
  for (unsigned i = 0; i < d - k; ++i) {
    for (unsigned j = 0; j < e; ++j) {
      const FieldElem xj = F.pow(F.generator_x() == 0 ? 1 : F.generator_x(), j);
      auto& list = contrib[i * e + j];
      for (unsigned a = 0; a <= k; ++a) {
        const auto cd = F.digits(F.mul(xj, h.c[a]));
        for (unsigned jj = 0; jj < e; ++jj)
          if (cd[jj]) list.push_back({(i + a) * e + jj, cd[jj]});
      }
    }
  }

  auto mark = [&](std::uint64_t x) {
    std::atomic_ref<std::uint64_t>(bits[x >> 6]).fetch_or(std::uint64_t{1} << (x & 63), std::memory_order_relaxed);
  };
  mark(idx);

  std::vector<std::uint32_t> g(gdigits, 0);
  std::vector<int> dir(gdigits, 1);
  while (true) {
    unsigned pos = 0;
    while (pos < gdigits) {
      if ((dir[pos] > 0 && g[pos] + 1 < p) || (dir[pos] < 0 && g[pos] > 0)) break;
      dir[pos] = -dir[pos];
      ++pos;
    }
    if (pos == gdigits) break;
    g[pos] = static_cast<std::uint32_t>(static_cast<int>(g[pos]) + dir[pos]);
    const bool plus = dir[pos] > 0;
    for (const auto& c : contrib[pos]) {
      const std::uint32_t old = dig[c.pos];
      const std::uint32_t nv = plus ? (old + c.val) % p : (old + p - c.val) % p;
      dig[c.pos] = nv;
      idx += (static_cast<std::uint64_t>(nv) - old) * pw[c.pos];
    }
    mark(idx);
  }
}

}  // namespace

std::vector<std::uint64_t> sieve_irreducibles(const FiniteField& F, unsigned d,
                                              const std::vector<std::vector<std::uint64_t>>& lower,
                                              unsigned workers) {
  const std::uint64_t space = checked_space(F, d);
  std::vector<std::uint64_t> out;
  if (d == 0) return out;
  if (d == 1) {
    out.resize(space);
    for (std::uint64_t i = 0; i < space; ++i) out[i] = i;
    return out;
  }
  const unsigned L = d * F.degree();
  std::vector<std::uint64_t> pw(L);
  for (unsigned i = 0; i < L; ++i) pw[i] = i == 0 ? 1 : pw[i - 1] * F.characteristic();

  PolyRing R(F);
  std::vector<FqPoly> factors;
  for (unsigned k = 1; 2 * k <= d; ++k)
    for (auto idx : lower.at(k)) factors.push_back(R.from_index(idx, k));

  std::vector<std::uint64_t> bits((space + 63) / 64, 0);
  workers = std::max(1u, workers);
  if (workers == 1 || factors.size() < 2) {
    for (const auto& h : factors) mark_multiples(F, h, d, pw, bits.data());
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < factors.size(); i = next++) mark_multiples(F, factors[i], d, pw, bits.data());
      });
    }
    for (auto& th : pool) th.join();
  }
  for (std::uint64_t i = 0; i < space; ++i)
    if (!((bits[i >> 6] >> (i & 63)) & 1)) out.push_back(i);
  return out;
}

PlaceTable::PlaceTable(const FiniteField& F, unsigned max_degree, unsigned workers, unsigned degree_cap) {
  if (max_degree < 1) throw Error(ErrorCode::InvalidArgument, "max_degree must be >= 1");
  if (max_degree > degree_cap)
    throw Error(ErrorCode::ResourceLimit, "max_degree " + std::to_string(max_degree) + " exceeds the place degree cap " +
                                              std::to_string(degree_cap));
  field_.push_back(F);
  by_degree_.resize(max_degree + 1);
  for (unsigned d = 1; d <= max_degree; ++d) by_degree_[d] = sieve_irreducibles(F, d, by_degree_, workers);
}

PlaceTable PlaceTable::from_indices(const FiniteField& F, std::vector<std::vector<std::uint64_t>> by_degree) {
  PlaceTable t;
  t.field_.push_back(F);
  t.by_degree_ = std::move(by_degree);
  if (t.by_degree_.empty()) t.by_degree_.resize(1);
  return t;
}

Place PlaceTable::place(unsigned d, std::size_t i) const {
  PolyRing R(field());
  return Place::finite(R.from_index(by_degree_.at(d).at(i), d));
}

std::vector<Place> PlaceTable::places() const {
  std::vector<Place> out;
  out.push_back(Place::infinity());
  PolyRing R(field());
  for (unsigned d = 1; d < by_degree_.size(); ++d)
    for (auto idx : by_degree_[d]) out.push_back(Place::finite(R.from_index(idx, d)));
  return out;
}

std::vector<Place> enumerate_places(const FiniteField& F, unsigned max_degree, unsigned degree_cap) {
  return PlaceTable(F, max_degree, 1, degree_cap).places();
}

FqPoly residue_value(const PolyRing& R, const FqPoly& f, const Place& v) {
  if (v.infinite) throw Error(ErrorCode::InvalidArgument, "residue_value is undefined at infinity");
  return R.mod(f, v.poly);
}

namespace {

std::string cache_header(const FiniteField& F, unsigned max_degree) {
  std::ostringstream os;
  os << "# ffmc-places p=" << F.characteristic() << " e=" << F.degree() << " modulus=";
  const auto& m = F.modulus();
  for (std::size_t i = 0; i < m.size(); ++i) os << (i ? "," : "") << m[i];
  os << " max_degree=" << max_degree;
  return os.str();
}

}  // namespace

std::string cache_file_name(const FiniteField& F) {
  std::ostringstream os;
  os << "places_p" << F.characteristic() << "_e" << F.degree() << "_m";
  const auto& m = F.modulus();
  for (std::size_t i = 0; i < m.size(); ++i) os << (i ? "-" : "") << m[i];
  os << ".tsv";
  return os.str();
}

void write_place_cache(const std::string& path, const PlaceTable& table) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open place cache for writing: " + tmp);
    const FiniteField& F = table.field();
    const std::uint64_t q = F.order();
    out << cache_header(F, table.max_degree()) << "\n";
    out << "1\tinf\n";
    std::string line;
    for (unsigned d = 1; d <= table.max_degree(); ++d) {
      for (auto idx : table.indices(d)) {
        line = std::to_string(d);
        line += '\t';
        std::uint64_t x = idx;
        for (unsigned i = 0; i < d; ++i) {
          line += std::to_string(x % q);
          line += ',';
          x /= q;
        }
        line += "1\n";
        out << line;
      }
    }
    if (!out) throw Error(ErrorCode::Io, "write failed for place cache: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot move place cache into place: " + path + ": " + ec.message());
}

PlaceTable read_place_cache(const std::string& path, const FiniteField& F) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open place cache: " + path);
  std::string header;
  std::getline(in, header);
  const std::string prefix = cache_header(F, 0);
  const std::string stem = prefix.substr(0, prefix.rfind("max_degree=") + 11);
  if (header.rfind(stem, 0) != 0) throw Error(ErrorCode::Io, "place cache header mismatch in " + path + ": '" + header + "'");
  unsigned max_degree = 0;
  try {
    std::size_t used = 0;
    const auto v = std::stoul(header.substr(stem.size()), &used);
    if (used != header.size() - stem.size() || v < 1 || v > 64) throw std::invalid_argument("range");
    max_degree = static_cast<unsigned>(v);
  } catch (const std::exception&) {
    throw Error(ErrorCode::Io, "bad max_degree in place cache header of " + path);
  }
  std::vector<std::vector<std::uint64_t>> by_degree(max_degree + 1);
  const std::uint64_t q = F.order();
  std::string line;
  bool saw_inf = false;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    auto bad = [&](const std::string& why) {
      throw Error(ErrorCode::Io, "place cache " + path + " line " + std::to_string(lineno) + ": " + why);
    };
    const auto tab = line.find('\t');
    if (tab == std::string::npos) bad("missing tab");
    unsigned d = 0;
    try {
      d = static_cast<unsigned>(std::stoul(line.substr(0, tab)));
    } catch (const std::exception&) {
      bad("bad degree");
    }
    const std::string body = line.substr(tab + 1);
    if (body == "inf") {
      if (d != 1 || saw_inf) bad("bad infinity record");
      saw_inf = true;
      continue;
    }
    if (d < 1 || d > max_degree) bad("degree out of range");
    std::vector<std::uint64_t> coeffs;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        std::size_t used = 0;
        coeffs.push_back(std::stoull(tok, &used));
        if (used != tok.size()) bad("bad coefficient");
      } catch (const Error&) {
        throw;
      } catch (const std::exception&) {
        bad("bad coefficient");
      }
    }
    if (coeffs.size() != d + 1 || coeffs.back() != 1) bad("coefficient count or leading term");
    std::uint64_t idx = 0;
    for (unsigned i = d; i-- > 0;) {
      if (coeffs[i] >= q) bad("coefficient out of range");
      idx = idx * q + coeffs[i];
    }
    auto& list = by_degree[d];
    if (!list.empty() && list.back() >= idx) bad("records out of order");
    list.push_back(idx);
  }
  if (!saw_inf) throw Error(ErrorCode::Io, "place cache " + path + " lacks the infinity record");
  return PlaceTable::from_indices(F, std::move(by_degree));
}

PlaceTable load_or_build_places(const std::string& dir, const FiniteField& F, unsigned max_degree, unsigned workers,
                                unsigned degree_cap) {
  if (dir.empty()) return PlaceTable(F, max_degree, workers, degree_cap);
  const std::string path = (std::filesystem::path(dir) / cache_file_name(F)).string();
  if (std::filesystem::exists(path)) {
    try {
      PlaceTable cached = read_place_cache(path, F);
      if (cached.max_degree() >= max_degree) {
        std::vector<std::vector<std::uint64_t>> trimmed(max_degree + 1);
        for (unsigned d = 1; d <= max_degree; ++d) trimmed[d] = cached.indices(d);
        return PlaceTable::from_indices(F, std::move(trimmed));
      }
    } catch (const Error&) {
      // Unusable cache: fall through and regenerate.
    }
  }
  PlaceTable table(F, max_degree, workers, degree_cap);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create cache directory " + dir + ": " + ec.message());
  write_place_cache(path, table);
  return table;
}

}  // namespace ffmc
