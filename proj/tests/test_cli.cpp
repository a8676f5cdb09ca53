#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ffmc/cli/cli.hpp"

using namespace ffmc;
using namespace ffmc::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
  mc::Json json() const { return mc::Json::parse(out); }
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ffmc_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("documented invocations") {
  ::unsetenv("FFMC_CACHE_DIR");
  auto l = call({"lfun", "--q", "5", "--kummer-f", "t^3-t", "--m", "2"});
  REQUIRE(l.code == 0);
  CHECK(l.json()["numerator"] == mc::Json::array({"1", "2", "5"}));
  CHECK(l.json()["functional_equation"]["ok"].get<bool>());
  CHECK(l.err.empty());

  auto z = call({"zeta", "--q", "5", "--m", "2", "--f", "t^3-t"});
  REQUIRE(z.code == 0);
  CHECK(z.json()["P"] == mc::Json::array({"1", "2", "5"}));
  CHECK(z.json()["h"] == "8");
  CHECK(z.json()["curve"]["q"] == "5");

  auto p = call({"places", "--q", "3", "--max-deg", "2"});
  REQUIRE(p.code == 0);
  CHECK(p.json()["places"].size() == 7);
  CHECK(p.json()["count"] == "7");

  auto m = call({"motive", "--q", "5", "--z1", "inf,t-2", "--z2", "t,t-1", "--n", "4"});
  REQUIRE(m.code == 0);
  CHECK(m.json()["order"] == "16");
  CHECK(m.json()["frobenius_matrix"] == mc::Json::parse(R"([["1","0"],["3","1"]])"));
  CHECK(m.json()["tower_ok"].get<bool>());
  CHECK(m.json()["duality_ok"].get<bool>());
}

TEST_CASE("lfun with truncation sets and ray class characters") {
  auto l = call({"lfun", "--q", "7", "--kummer-f", "t^3+2t", "--m", "3", "--sigma-w", "t+1", "--sigma-v", "t^2+1"});
  REQUIRE(l.code == 0);
  CHECK(l.json()["sigma_w"] == mc::Json::array({"t+1"}));
  CHECK(l.json()["functional_equation"]["ok"].get<bool>());
  auto r = call({"lfun", "--q", "3", "--rayclass-modulus", "t^2+1", "--index", "1"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["character"]["kind"] == "rayclass");
  auto t = call({"lfun", "--q", "5"});
  REQUIRE(t.code == 0);
  CHECK(t.json()["denominator"].size() == 3);
}

TEST_CASE("usage and configuration errors exit with 2") {
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"zeta", "--q", "5", "--m", "2"}).code == 2);
  CHECK(call({"places", "--q", "3", "--max-deg", "2", "--format", "xml"}).code == 2);
  CHECK(call({"places", "--q", "6", "--max-deg", "2"}).code == 2);
  CHECK(call({"places", "--q", "3", "--max-deg", "20"}).code == 2);
  CHECK(call({"zeta", "--q", "5", "--m", "3", "--f", "t^3-t"}).code == 2);
  CHECK(call({"places", "--q", "3", "--max-deg", "2", "--config", "/nonexistent.toml"}).code == 2);
  const auto e = call({"zeta", "--q", "5", "--m", "2", "--f", "t^2"});
  CHECK(e.code == 2);
  CHECK(e.out.empty());
  CHECK_FALSE(e.err.empty());
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("config files are strict and FFMC_CACHE_DIR overrides cache_dir") {
  const fs::path dir = scratch("config");
  write(dir / "bad.toml", "workers = 2\ncolour = \"red\"\n");
  write(dir / "zero.toml", "workers = 0\n");
  write(dir / "pretty.toml", "format = \"pretty\"\nmax_place_degree = 4\ncache_dir = \"" + (dir / "a").string() + "\"\n");
  CHECK_THROWS_AS(load_config((dir / "bad.toml").string()), Error);
  CHECK(call({"places", "--q", "3", "--max-deg", "2", "--config", (dir / "bad.toml").string()}).code == 2);
  CHECK(call({"places", "--q", "3", "--max-deg", "2", "--config", (dir / "zero.toml").string()}).code == 2);

  ::unsetenv("FFMC_CACHE_DIR");
  auto p = call({"places", "--q", "3", "--max-deg", "2", "--config", (dir / "pretty.toml").string()});
  REQUIRE(p.code == 0);
  CHECK(p.out.find("count: 7") != std::string::npos);
  CHECK(fs::exists(dir / "a" / cache_file_name(FiniteField::of_order(3))));
  CHECK(call({"places", "--q", "3", "--max-deg", "5", "--config", (dir / "pretty.toml").string()}).code == 2);

  ::setenv("FFMC_CACHE_DIR", (dir / "b").string().c_str(), 1);
  REQUIRE(call({"places", "--q", "3", "--max-deg", "2", "--config", (dir / "pretty.toml").string()}).code == 0);
  CHECK(fs::exists(dir / "b" / cache_file_name(FiniteField::of_order(3))));
  ::unsetenv("FFMC_CACHE_DIR");

  const Config c = parse_config("max_evaluations = 5000\n");
  CHECK(c.max_evaluations == 5000);
  CHECK(c.format == "json");
}

TEST_CASE("place cache round trip") {
  const fs::path dir = scratch("cache");
  const FiniteField F3 = FiniteField::of_order(3);
  const auto ok = cache_roundtrip(dir.string(), F3, 3);
  CHECK(ok.pass);
  CHECK(cache_roundtrip(dir.string(), FiniteField::of_order(4), 3).pass);

  const fs::path file = dir / cache_file_name(F3);
  std::ifstream in(file);
  std::stringstream body;
  body << in.rdbuf();
  std::string text = body.str();
  text.replace(0, text.find('\n'), "# ffmc-places p=5 e=1 modulus=0,1 max_degree=3");
  write(file, text);
  CHECK_THROWS_AS(read_place_cache(file.string(), F3), Error);

  // A corrupted cache is regenerated transparently.
  auto p = call({"places", "--q", "3", "--max-deg", "3", "--cache-dir", dir.string()});
  REQUIRE(p.code == 0);
  CHECK(read_place_cache(file.string(), F3) == PlaceTable(F3, 3));
  const fs::path empty = scratch("empty");
  auto e = call({"places", "--q", "3", "--max-deg", "3", "--cache-dir", empty.string()});
  REQUIRE(e.code == 0);
  CHECK(e.out == p.out);

  const auto missing = cache_roundtrip("/proc/ffmc-no-such-dir", F3, 2);
  CHECK_FALSE(missing.pass);
  CHECK_FALSE(missing.detail.empty());
}

TEST_CASE("verify runs scenario files") {
  const fs::path dir = scratch("verify");
  write(dir / "s.toml",
        "[base]\nq = 5\nf = \"t^3-t\"\nm = 2\nell = 3\nM = 1\n[checks]\nartin = true\nclass_tower = true\nfe = true\n");
  auto one = call({"verify", (dir / "s.toml").string()});
  REQUIRE(one.code == 0);
  CHECK(one.json()["pass"].get<bool>());
  auto many = call({"--workers", "3", "verify", (dir / "s.toml").string()});
  CHECK(many.out == one.out);
  write(dir / "bad.toml", "[base]\nq = 5\n");
  CHECK(call({"verify", (dir / "bad.toml").string()}).code == 2);
  CHECK(call({"verify", (dir / "none.toml").string()}).code == 2);
}
