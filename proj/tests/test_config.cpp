#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "bcslab/config.hpp"
#include "bcslab/error.hpp"
#include "test_util.hpp"

using namespace bcslab;

namespace {

ErrorKind kind_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected the config to be rejected: " << text);
  return ErrorKind::config;
}

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

} // namespace

TEST_CASE("empty text yields the complete documented default run") {
  const RunConfig cfg = parse_config("");
  CHECK(cfg.potential_kind == "square_well");
  CHECK(cfg.depth == 1.0);
  CHECK(cfg.radius == 1.0);
  CHECK(cfg.n == 384);
  CHECK(cfg.r_max == 0.0);
  CHECK(cfg.p_max == 48.0);
  CHECK(cfg.quality == 1.0);
  CHECK(cfg.mu == 0.1);
  CHECK(cfg.T == 0.01);
  CHECK(cfg.mu_list.empty());
  CHECK(cfg.t_list.empty());
  CHECK_FALSE(cfg.delta0.has_value());
  CHECK(cfg.tail == 1e-6);
  CHECK(cfg.t_floor_rel == 1e-280);
  CHECK(cfg.out_path.empty());
  // FNV-1a(64) of the empty string is the offset basis
  CHECK(cfg.config_hash == "cbf29ce484222325");
}

TEST_CASE("a full config round-trips every key") {
  const std::string text =
      "# full exercise\n"
      "[potential]\n"
      "kind = gaussian\n"
      "depth = 0.8\n"
      "width = 1.1\n"
      "[grid]\n"
      "n = 256\n"
      "r_max = 6.5\n"
      "p_max = 40\n"
      "window_factor = 2\n"
      "quality = 1.5\n"
      "[run]\n"
      "mu = 0.05\n"
      "T = 0.002\n"
      "mu_list = 1e-2, 1e-3, 1e-4\n"
      "t_list = 1e-5, 2e-5\n"
      "delta0 = 0.01\n"
      "[tolerances]\n"
      "tail = 1e-7\n"
      "t_floor_rel = 1e-100\n"
      "[output]\n"
      "path = out.csv\n";
  const RunConfig cfg = parse_config(text);
  CHECK(cfg.potential_kind == "gaussian");
  CHECK(cfg.depth == 0.8);
  CHECK(cfg.width == 1.1);
  CHECK(cfg.n == 256);
  CHECK(cfg.r_max == 6.5);
  CHECK(cfg.p_max == 40.0);
  CHECK(cfg.window_factor == 2.0);
  CHECK(cfg.quality == 1.5);
  CHECK(cfg.mu == 0.05);
  CHECK(cfg.T == 0.002);
  REQUIRE(cfg.mu_list.size() == 3);
  CHECK(cfg.mu_list[1] == 1e-3);
  REQUIRE(cfg.t_list.size() == 2);
  CHECK(cfg.t_list[1] == 2e-5);
  REQUIRE(cfg.delta0.has_value());
  CHECK(*cfg.delta0 == 0.01);
  CHECK(cfg.tail == 1e-7);
  CHECK(cfg.t_floor_rel == 1e-100);
  CHECK(cfg.out_path == "out.csv");
  CHECK(cfg.config_hash.size() == 16);
  CHECK(cfg.config_hash != parse_config("").config_hash);

  const Potential pot = cfg.make_potential();
  CHECK(pot.kind() == PotentialKind::gaussian);

  const GridSpec spec = cfg.grid_spec();
  CHECK(spec.n_radial == 256);
  CHECK(spec.r_max_override == 6.5);
  CHECK(spec.tail_tol == 1e-7);
  CHECK(spec.bt.p_max == 40.0);
  CHECK(spec.bt.xi_inner == 50.0); // 25 per window_factor unit
  CHECK(spec.bt.quality == 1.5);
  CHECK(spec.a_kernel.p_max > spec.bt.p_max);  // deliberately independent measure
  CHECK(spec.a_kernel.quality > spec.bt.quality);
  CHECK(spec.op.p_max < spec.bt.p_max);
}

TEST_CASE("comments and blank lines are ignored wherever they appear") {
  const RunConfig cfg = parse_config("# lead\n\n[run]\nmu = 0.2 # trailing comment\n\n");
  CHECK(cfg.mu == 0.2);
}

TEST_CASE("unknown keys and sections are hard errors with line numbers") {
  const std::string bad_key = "[grid]\nnn = 3\n";
  CHECK(kind_of(bad_key) == ErrorKind::config);
  CHECK(message_of(bad_key).find("line 2") != std::string::npos);
  CHECK(message_of(bad_key).find("nn") != std::string::npos);

  const std::string bad_section = "[gridz]\nn = 128\n";
  CHECK(kind_of(bad_section) == ErrorKind::config);
  CHECK(message_of(bad_section).find("line 1") != std::string::npos);

  // keys in the wrong section are unknown there
  CHECK(kind_of("[run]\ndepth = 2\n") == ErrorKind::config);
}

TEST_CASE("structural errors: key before any section, duplicates, bad numbers") {
  CHECK(kind_of("mu = 0.1\n") == ErrorKind::config);
  CHECK(message_of("mu = 0.1\n").find("line 1") != std::string::npos);

  CHECK(kind_of("[run]\nmu = 0.1\nmu = 0.2\n") == ErrorKind::config);
  CHECK(message_of("[run]\nmu = 0.1\nmu = 0.2\n").find("line 3") != std::string::npos);

  CHECK(kind_of("[run]\nmu = 0.1x\n") == ErrorKind::config);
  CHECK(kind_of("[run]\nmu = nan\n") == ErrorKind::config);
  CHECK(kind_of("[grid]\nn = 1e2\n") == ErrorKind::config);
  CHECK(kind_of("[run]\nmu\n") == ErrorKind::config);
}

TEST_CASE("semantic validation names the offending key") {
  const std::string bad_n = "[grid]\nn = -5\n";
  CHECK(kind_of(bad_n) == ErrorKind::config);
  CHECK(message_of(bad_n).find("'n'") != std::string::npos);
  CHECK(kind_of("[grid]\nn = 8\n") == ErrorKind::config);

  CHECK(kind_of("[run]\nmu = -0.1\n") == ErrorKind::config);
  CHECK(kind_of("[run]\nmu_list = 1e-3, 1e-2\n") == ErrorKind::config); // must decrease
  CHECK(kind_of("[run]\nmu_list = 1e-2, -1e-3\n") == ErrorKind::config);
  CHECK(kind_of("[tolerances]\ntail = 0\n") == ErrorKind::config);
  CHECK(kind_of("[tolerances]\nt_floor_rel = 2\n") == ErrorKind::config);
  CHECK(kind_of("[grid]\nquality = 0.5\n") == ErrorKind::config);
  CHECK(kind_of("[potential]\nkind = cubic\n") == ErrorKind::config);
  CHECK(kind_of("[potential]\nkind = tabulated\n") == ErrorKind::config); // file required
  CHECK(kind_of("[potential]\ndepth = -1\n") == ErrorKind::config);
}

TEST_CASE("load_config reads files and reports missing ones with the path") {
  const std::string path = "cfg_roundtrip_test.ini";
  {
    std::ofstream f(path);
    f << "[run]\nmu = 0.07\n";
  }
  const RunConfig cfg = load_config(path);
  CHECK(cfg.mu == 0.07);
  std::remove(path.c_str());

  try {
    load_config("definitely_missing.ini");
    FAIL("expected an io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
    CHECK(std::string(e.what()).find("definitely_missing.ini") != std::string::npos);
  }
}

TEST_CASE("config hash is the FNV-1a fingerprint of the raw text") {
  // moving a comment changes the raw text and therefore the hash
  const std::string a = "[run]\nmu = 0.1\n";
  const std::string b = "[run]\nmu = 0.1\n# note\n";
  CHECK(parse_config(a).config_hash != parse_config(b).config_hash);
  CHECK(parse_config(a).config_hash == parse_config(a).config_hash);
}
