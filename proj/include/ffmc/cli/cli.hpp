#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "ffmc/mc_verify/scenario.hpp"

namespace ffmc::cli {

struct Config {
  unsigned max_place_degree = kDefaultPlaceDegreeCap;
  std::uint64_t max_evaluations = geom::kDefaultMaxEvaluations;
  unsigned workers = 1;
  std::string cache_dir;
  std::string format = "json";  // json | pretty

  void validate() const;
};

/// Strict TOML: keys max_place_degree, max_evaluations, workers, cache_dir, format.
Config parse_config(const std::string& toml_text, const std::string& source = "config");
Config load_config(const std::string& path);

/// Exit status: 0 success or PASS, 1 FAIL verdict, 2 usage or configuration error.
/// Reports go to `out`, diagnostics to `err`. FFMC_CACHE_DIR overrides the config cache_dir.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct RoundtripResult {
  bool pass = false;
  std::string detail;
};

/// Enumerate, write under dir, read back and compare with a fresh enumeration.
RoundtripResult cache_roundtrip(const std::string& dir, const FiniteField& F, unsigned max_degree);

/// One `path: value` line per leaf.
std::string render_pretty(const mc::Json& j);

}  // namespace ffmc::cli
