#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "ffmc/geom/curve.hpp"
#include "ffmc/lfun/iwasawa.hpp"

namespace ffmc::mc {

using Json = nlohmann::json;

/// Kummer cover y^m = f of P^1 over F_q with the constant Z_ell tower truncated at level M,
/// coefficients mod ell^N.
struct Scenario {
  std::string name;
  std::uint64_t q = 0;
  std::string f;
  unsigned m = 2;
  std::uint64_t ell = 0;
  unsigned N = 1, M = 1;
  std::vector<std::string> sigma_w, sigma_v;
  bool class_tower = false, selmer = false, fe = false, artin = false;
  struct Interpolation {
    std::size_t chi_index = 0;
    unsigned psi_order = 1;
  };
  std::vector<Interpolation> interpolation;
};

/// Strict: unknown tables or keys, wrong types and missing [base] keys are errors.
Scenario parse_scenario(const std::string& toml_text, const std::string& source = "scenario");
Scenario load_scenario(const std::string& path);

struct RunOptions {
  unsigned workers = 1;
  std::uint64_t max_evaluations = geom::kDefaultMaxEvaluations;
  unsigned max_place_degree = 16;
  bool timing = false;
  std::shared_ptr<const PlaceTable> places;
};

/// ell-adic valuation of |mu_{ell^infty}(F_{q^r})|, i.e. v_ell(q^r - 1).
int exceptional_valuation(std::uint64_t q, std::uint64_t r, std::uint64_t ell);
/// prod over zeta^r = 1 of L(zeta), in Z[zeta_lcm].
CyclotomicInteger layer_value(const CycPoly& L, unsigned r);

/// Runs every enabled check; checks run as independent tasks on `workers` threads.
/// Result: {scenario, checks: {name: {pass, ...}}, pass}; identical for any worker count
/// unless timing is requested.
Json run_scenario(const Scenario& s, const RunOptions& opt = {});

/// Individual checks; each returns {pass, ...} with both sides' exact values.
struct Context;
std::shared_ptr<Context> make_context(const Scenario& s, const RunOptions& opt);
Json verify_artin(const Context& c);
Json verify_class_number_tower(const Context& c);
Json verify_selmer_identity(const Context& c);
Json verify_functional_equation_suite(const Context& c);
Json verify_interpolation(const Context& c);

/// Decimal-string form used for all integers in reports.
std::string dec(const Integer& x);
Json dec_list(const std::vector<Integer>& v);
Json cyc_json(const CyclotomicInteger& x);
Json poly_json(const CycPoly& p);

}  // namespace ffmc::mc
