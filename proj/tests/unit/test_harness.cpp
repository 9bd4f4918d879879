#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "robin/harness.hpp"
#include "robin/polygon_io.hpp"

using namespace robin;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("robin_harness_" + name);
  fs::remove_all(p);
  return p;
}

std::string first_line(const fs::path& p) {
  std::ifstream is(p);
  std::string s;
  std::getline(is, s);
  return s;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("config hash is stable and order sensitive") {
  const nlohmann::json a{{"beta", 1.0}, {"k", 3}};
  CHECK(config_hash(a) == config_hash(nlohmann::json::parse(a.dump())));
  CHECK(config_hash(a).size() == 16);
  CHECK(config_hash(a) != config_hash({{"beta", 1.0}, {"k", 4}}));
}

TEST_CASE("family members are valid and approach their limits") {
  for (Family f : {Family::Pacman, Family::Mountains, Family::ShrinkingSlit}) {
    CAPTURE(to_string(f));
    CHECK(family_from_string(to_string(f)) == f);
    const auto limit = family_limit(f);
    double prev = 1e300;
    for (int n = 0; n < 4; ++n) {
      const auto P = family_member(f, n);
      CHECK(side_count(P) <= P.side_budget());
      CHECK(family_parameter(f, n + 1) < family_parameter(f, n));
      const double d = hc_distance(P, limit, family_parameter(f, n) / 8);
      CHECK(d < prev);
      prev = d;
    }
    CHECK(side_count(limit) <= family_member(f, 0).side_budget());
  }
  CHECK(family_limit(Family::Mountains).components().size() == 2);
  CHECK_THROWS(family_from_string("spiral"));
}

TEST_CASE("eigs command writes traceable artifacts") {
  const auto out = scratch("eigs");
  StudyOptions o;
  o.h = 0.2;
  o.levels = 2;
  const auto rec = cmd_eigs(ROBIN_DATA_DIR "/unit_square.json", 1.0, 2, o, out);
  CHECK(fs::exists(out / "spectrum.json"));
  CHECK(fs::exists(out / "convergence.csv"));
  CHECK(fs::exists(out / "run.json"));
  CHECK(first_line(out / "convergence.csv").find(rec.config_hash) != std::string::npos);
  std::ifstream is(out / "spectrum.json");
  const auto j = nlohmann::json::parse(is);
  CHECK(j["config_hash"] == rec.config_hash);
  CHECK(j["eigenvalues"].size() == 2);
  std::ifstream rs(out / "run.json");
  const auto r = nlohmann::json::parse(rs);
  CHECK(r["tool_version"] == kToolVersion);
  CHECK(r["outputs"].size() == 2);

  // Same inputs, same hash.
  CHECK(cmd_eigs(ROBIN_DATA_DIR "/unit_square.json", 1.0, 2, o, out).config_hash == rec.config_hash);
}

TEST_CASE("detach sweep rows") {
  StudyOptions o;
  o.h = 0.15;
  o.levels = 2;
  const auto P = load_polygon(ROBIN_DATA_DIR "/slit_square.json");
  const auto rep = detach_sweep(P, {0.125, 0.0625}, 1.0, 1, o);
  REQUIRE(rep.rows.size() == 2);
  for (const auto& r : rep.rows) {
    CHECK(r.area <= rep.base_area);
    CHECK(r.gen_perimeter <= rep.base_perimeter);
    CHECK(r.lambdas.size() == 1);
  }
  CHECK_THROWS(detach_sweep(unit_square(), {0.1}, 1.0, 1, o));
}

TEST_CASE("converge command") {
  const auto out = scratch("converge");
  StudyOptions o;
  o.h = 0.2;
  o.levels = 2;
  cmd_converge(Family::Mountains, 3, 1.0, 1, o, out);
  std::ifstream is(out / "converge.json");
  const auto j = nlohmann::json::parse(is);
  CHECK(j["limit_components"] == 2);
  CHECK(j["hc_strictly_decreasing"] == true);
}

}  // TEST_SUITE
