#include "ffmc/cli/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <toml.hpp>

#include "ffmc/motives/picard.hpp"

namespace ffmc::cli {

using mc::Json;

void Config::validate() const {
  if (max_place_degree == 0) throw Error(ErrorCode::InvalidArgument, "max_place_degree must be positive");
  if (max_evaluations == 0) throw Error(ErrorCode::InvalidArgument, "max_evaluations must be positive");
  if (workers == 0) throw Error(ErrorCode::InvalidArgument, "workers must be positive");
  if (format != "json" && format != "pretty")
    throw Error(ErrorCode::InvalidArgument, "format must be json or pretty, got '" + format + "'");
}

Config parse_config(const std::string& text, const std::string& source) {
  toml::table t;
  try {
    t = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << source << ": " << e.description() << " at line " << e.source().begin.line;
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  Config c;
  auto positive = [&](const toml::node& n, const std::string& key) {
    const auto v = n.value<std::int64_t>();
    if (!n.is_integer() || !v || *v <= 0)
      throw Error(ErrorCode::InvalidArgument, source + ": '" + key + "' must be a positive integer");
    return static_cast<std::uint64_t>(*v);
  };
  auto text_of = [&](const toml::node& n, const std::string& key) {
    if (!n.is_string()) throw Error(ErrorCode::InvalidArgument, source + ": '" + key + "' must be a string");
    return *n.value<std::string>();
  };
  for (const auto& [k, n] : t) {
    const std::string key(k.str());
    if (key == "max_place_degree") c.max_place_degree = static_cast<unsigned>(positive(n, key));
    else if (key == "max_evaluations") c.max_evaluations = positive(n, key);
    else if (key == "workers") c.workers = static_cast<unsigned>(positive(n, key));
    else if (key == "cache_dir") c.cache_dir = text_of(n, key);
    else if (key == "format") c.format = text_of(n, key);
    else throw Error(ErrorCode::InvalidArgument, source + ": unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

RoundtripResult cache_roundtrip(const std::string& dir, const FiniteField& F, unsigned max_degree) {
  RoundtripResult r;
  try {
    const PlaceTable fresh(F, max_degree);
    const std::string path = (std::filesystem::path(dir) / cache_file_name(F)).string();
    std::filesystem::create_directories(dir);
    write_place_cache(path, fresh);
    const PlaceTable back = read_place_cache(path, F);
    const PlaceTable again(F, max_degree);
    r.pass = back == fresh && again == fresh;
    r.detail = r.pass ? path : "cache contents differ from enumeration: " + path;
  } catch (const std::exception& e) {
    r.detail = e.what();
  }
  return r;
}

namespace {

void flatten(const Json& j, const std::string& path, std::ostringstream& os) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), os);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", os);
  } else if (j.is_array()) {
    os << path << ": ";
    for (std::size_t i = 0; i < j.size(); ++i) os << (i ? " " : "") << (j[i].is_string() ? j[i].get<std::string>() : j[i].dump());
    os << "\n";
  } else {
    os << path << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

std::string num(std::uint64_t x) { return std::to_string(x); }

Json place_list(const PolyRing& R, const std::vector<Place>& v) {
  Json a = Json::array();
  for (const auto& p : v) a.push_back(place_to_string(R, p));
  return a;
}

std::vector<Place> parse_places(const PolyRing& R, const std::vector<std::string>& v) {
  std::vector<Place> out;
  for (const auto& s : v) out.push_back(parse_place(R, s));
  return out;
}

std::uint64_t smallest_prime_factor(std::uint64_t n) {
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return p;
  return n;
}

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::ConductorMismatch:
    case ErrorCode::InternalCountError: return 1;
    default: return 2;
  }
}

struct Args {
  std::string config_path, format, cache_dir;
  unsigned workers = 0, max_place_degree = 0;
  std::uint64_t max_evaluations = 0;

  std::uint64_t q = 0;
  unsigned max_deg = 0;

  std::string kummer_f, rayclass_modulus;
  unsigned m = 2, inf_mult = 0, twist_order = 1;
  std::uint64_t power = 1, index = 1, twist_exponent = 0;
  int tate_weight = 0;
  std::vector<std::string> sigma_w, sigma_v;

  std::string f;

  std::vector<std::string> z1, z2;
  std::uint64_t n = 0, tower_ell = 0;
  unsigned tower_n = 2;

  std::string scenario;
  bool timing = false;
};

Json cmd_places(const Args& a, const Config& c) {
  const FiniteField F = FiniteField::of_order(a.q);
  if (a.max_deg > c.max_place_degree)
    throw Error(ErrorCode::ResourceLimit,
                "max-deg " + num(a.max_deg) + " exceeds the place degree cap " + num(c.max_place_degree));
  const PlaceTable table = load_or_build_places(c.cache_dir, F, a.max_deg, c.workers, c.max_place_degree);
  const PolyRing R(F);
  Json places = Json::array();
  Json counts = Json::object();
  for (const auto& v : table.places()) places.push_back({{"degree", num(v.degree)}, {"place", place_to_string(R, v)}});
  for (unsigned d = 1; d <= a.max_deg; ++d) counts[num(d)] = num(table.finite_count(d) + (d == 1 ? 1 : 0));
  return {{"q", num(a.q)}, {"max_degree", num(a.max_deg)}, {"count", num(places.size())},
          {"count_by_degree", counts}, {"places", places}};
}

Json cmd_lfun(const Args& a, const Config& c, int& status) {
  const PolyRing R(FiniteField::of_order(a.q));
  reps::Descriptor d;
  if (!a.kummer_f.empty() && !a.rayclass_modulus.empty())
    throw Error(ErrorCode::InvalidArgument, "--kummer-f and --rayclass-modulus are exclusive");
  if (!a.kummer_f.empty()) {
    d.kind = "kummer";
    d.poly = a.kummer_f;
    d.m = a.m;
    d.power = a.power;
  } else if (!a.rayclass_modulus.empty()) {
    d.kind = "rayclass";
    d.poly = a.rayclass_modulus;
    d.infinity_multiplicity = a.inf_mult;
    d.power = a.index;
  }
  d.twist_zeta_order = a.twist_order;
  d.twist_exponent = a.twist_exponent;
  d.tate_weight = a.tate_weight;
  const auto chi = reps::character_from_descriptor(R, d);
  lfun::TruncationSpec spec{parse_places(R, a.sigma_w), parse_places(R, a.sigma_v)};
  spec.validate();
  lfun::LOptions opt;
  opt.workers = c.workers;
  opt.degree_cap = c.max_place_degree;
  if (!c.cache_dir.empty()) {
    unsigned need = opt.trivial_check_degree;
    try {
      need = std::max(need, lfun::degree_bound(chi) + opt.guard);
    } catch (const Error&) {
    }
    need = std::min(need, c.max_place_degree);
    opt.places = std::make_shared<const PlaceTable>(load_or_build_places(c.cache_dir, R.field(), need, c.workers, c.max_place_degree));
  }
  const auto L = lfun::l_function(chi, spec, opt);
  const auto Ld = lfun::dual_l_function(chi, spec, opt);
  const auto fe = lfun::functional_equation_check(L, Ld, a.q);
  if (!fe.ok) status = 1;
  Json provenance = Json::array();
  for (const auto& p : L.provenance) provenance.push_back(p);
  return {{"character",
           {{"kind", d.kind}, {"poly", d.poly}, {"m", num(d.m)}, {"power", num(d.power)},
            {"infinity_multiplicity", num(d.infinity_multiplicity)}, {"twist_zeta_order", num(d.twist_zeta_order)},
            {"twist_exponent", num(d.twist_exponent)}, {"tate_weight", std::to_string(d.tate_weight)}}},
          {"q", num(a.q)},
          {"sigma_w", place_list(R, spec.sigma_w)},
          {"sigma_v", place_list(R, spec.sigma_v)},
          {"order", num(L.order())},
          {"numerator", mc::poly_json(L.numerator)},
          {"denominator", mc::poly_json(L.denominator)},
          {"l_function", L.to_string()},
          {"functional_equation",
           {{"ok", fe.ok}, {"epsilon", fe.ok ? Json(fe.epsilon.to_string()) : Json(fe.diagnostic)}}},
          {"provenance", provenance}};
}

Json cmd_zeta(const Args& a, const Config& c) {
  const PolyRing R(FiniteField::of_order(a.q));
  const geom::SuperellipticCurve C(R, a.m, R.parse(a.f));
  const auto Z = geom::zeta_numerator(C, c.workers, c.max_evaluations);
  Json counts = Json::array();
  for (auto n : Z.counts) counts.push_back(num(n));
  return {{"curve", {{"q", num(a.q)}, {"m", num(a.m)}, {"f", R.print(C.f())}}},
          {"genus", num(C.genus())},
          {"counts", counts},
          {"P", mc::dec_list(Z.P)},
          {"h", mc::dec(Z.h)},
          {"fe_sign", std::to_string(Z.fe_sign)}};
}

Json cmd_motive(const Args& a, const Config& c, int& status) {
  const PolyRing R(FiniteField::of_order(a.q));
  const auto Z1 = parse_places(R, a.z1), Z2 = parse_places(R, a.z2);
  const std::uint64_t cap = std::max<std::uint64_t>(c.max_evaluations, motives::kDefaultFieldCap);
  const motives::MotiveTorsion M(R, Z1, Z2, a.n, std::nullopt, cap);
  const std::uint64_t ell = a.tower_ell ? a.tower_ell : smallest_prime_factor(a.n);
  const auto tower = motives::tower_check(R, Z1, Z2, ell, a.tower_n, cap);
  const auto duality = motives::duality_order_check(R, Z1, Z2, a.n, cap);
  // Row-major; column i is the image of basis vector i.
  const auto& cols = M.frobenius();
  Json frob = Json::array();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    Json row = Json::array();
    for (const auto& col : cols) row.push_back(num(col[i]));
    frob.push_back(row);
  }
  Json charpoly = Json::array();
  for (auto x : M.charpoly()) charpoly.push_back(num(x));
  if (!tower.pass || !duality.pass) status = 1;
  return {{"q", num(a.q)},
          {"Z1", place_list(R, Z1)},
          {"Z2", place_list(R, Z2)},
          {"n", num(a.n)},
          {"field_degree", num(M.j())},
          {"order", mc::dec(M.order())},
          {"frobenius_matrix", frob},
          {"charpoly", charpoly},
          {"fixed_points", mc::dec(M.fixed_point_count())},
          {"tower", {{"ell", num(ell)}, {"N", num(a.tower_n)}, {"detail", tower.detail}}},
          {"tower_ok", tower.pass},
          {"duality_ok", duality.pass},
          {"duality_detail", duality.detail}};
}

Json cmd_verify(const Args& a, const Config& c, int& status) {
  const mc::Scenario s = mc::load_scenario(a.scenario);
  mc::RunOptions opt;
  opt.workers = c.workers;
  opt.max_evaluations = c.max_evaluations;
  opt.max_place_degree = c.max_place_degree;
  opt.timing = a.timing;
  Json report = mc::run_scenario(s, opt);
  if (!report["pass"].get<bool>()) status = 1;
  return report;
}

}  // namespace

std::string render_pretty(const Json& j) {
  std::ostringstream os;
  flatten(j, "", os);
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Args a;
  CLI::App app{"Exact L-functions of characters over F_q(t) and main-conjecture checks", "ffmc"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", a.config_path, "TOML configuration file");
  app.add_option("--format", a.format, "json or pretty")->check(CLI::IsMember({"json", "pretty"}));
  app.add_option("--workers", a.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--max-place-degree", a.max_place_degree, "place degree cap")->check(CLI::PositiveNumber);
  app.add_option("--max-evaluations", a.max_evaluations, "point-count evaluation cap")->check(CLI::PositiveNumber);
  app.add_option("--cache-dir", a.cache_dir, "place cache directory");

  auto* places = app.add_subcommand("places", "list the places of P^1 over F_q up to a degree");
  places->add_option("--q", a.q, "field order")->required();
  places->add_option("--max-deg", a.max_deg, "largest degree")->required();

  auto* lf = app.add_subcommand("lfun", "exact L-function of a character");
  lf->add_option("--q", a.q, "field order")->required();
  lf->add_option("--kummer-f", a.kummer_f, "f for the Kummer character of y^m = f");
  lf->add_option("--m", a.m, "Kummer exponent");
  lf->add_option("--power", a.power, "use chi^power");
  lf->add_option("--rayclass-modulus", a.rayclass_modulus, "finite part of a ray class modulus");
  lf->add_option("--inf-mult", a.inf_mult, "multiplicity of infinity in the modulus");
  lf->add_option("--index", a.index, "ray class character index");
  lf->add_option("--twist-zeta-order", a.twist_order, "order of the constant field twist");
  lf->add_option("--twist-exponent", a.twist_exponent, "exponent of the constant field twist");
  lf->add_option("--tate-weight", a.tate_weight, "Tate twist weight");
  lf->add_option("--sigma-w", a.sigma_w, "places whose Euler factors are removed")->delimiter(',');
  lf->add_option("--sigma-v", a.sigma_v, "places whose Euler factors are modified")->delimiter(',');

  auto* zeta = app.add_subcommand("zeta", "zeta numerator of y^m = f by point counting");
  zeta->add_option("--q", a.q, "field order")->required();
  zeta->add_option("--m", a.m, "exponent")->required();
  zeta->add_option("--f", a.f, "squarefree f")->required();

  auto* motive = app.add_subcommand("motive", "n-torsion of the Picard 1-motive [Div0_Z1 -> Pic0(P^1, Z2)]");
  motive->add_option("--q", a.q, "field order")->required();
  motive->add_option("--z1", a.z1, "places of Z1")->delimiter(',')->required();
  motive->add_option("--z2", a.z2, "places of Z2")->delimiter(',')->required();
  motive->add_option("--n", a.n, "torsion level")->required()->check(CLI::PositiveNumber);
  motive->add_option("--tower-ell", a.tower_ell, "prime for the tower check (default: least prime factor of n)");
  motive->add_option("--tower-n", a.tower_n, "tower depth")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "run a scenario file");
  verify->add_option("scenario", a.scenario, "scenario TOML")->required();
  verify->add_flag("--timing", a.timing, "include wall-clock timings");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return 2;
  }

  try {
    Config c = a.config_path.empty() ? Config{} : load_config(a.config_path);
    if (const char* env = std::getenv("FFMC_CACHE_DIR")) c.cache_dir = env;
    if (!a.format.empty()) c.format = a.format;
    if (!a.cache_dir.empty()) c.cache_dir = a.cache_dir;
    if (a.workers) c.workers = a.workers;
    if (a.max_place_degree) c.max_place_degree = a.max_place_degree;
    if (a.max_evaluations) c.max_evaluations = a.max_evaluations;
    c.validate();

    int status = 0;
    Json report;
    if (*places) report = cmd_places(a, c);
    else if (*lf) report = cmd_lfun(a, c, status);
    else if (*zeta) report = cmd_zeta(a, c);
    else if (*motive) report = cmd_motive(a, c, status);
    else report = cmd_verify(a, c, status);

    if (c.format == "pretty") out << render_pretty(report);
    else out << report.dump(2) << "\n";
    return status;
  } catch (const Error& e) {
    err << "ffmc: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "ffmc: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace ffmc::cli
