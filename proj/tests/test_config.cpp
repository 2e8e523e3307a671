#include "config.hpp"
#include "doctest.h"
#include "robin/errors.hpp"

using namespace robin;
using namespace robin::cli;

TEST_CASE("theta tokens are exact") {
  CHECK(parse_theta("pi/4") == 0.25 * kPi);
  CHECK(parse_theta("pi/2") == 0.5 * kPi);
  CHECK(parse_theta(" 3pi/4 ") == 0.75 * kPi);
  CHECK(parse_theta("0.7854") == 0.7854);
  CHECK_THROWS_AS(parse_theta("quarter"), ConfigError);
}

TEST_CASE("pairs") {
  CHECK(parse_pair("0,4") == PairIndex{0, 4});
  CHECK(parse_pair("3, 1") == PairIndex{1, 3});
  CHECK_THROWS_AS(parse_pair("1"), ConfigError);
  CHECK_THROWS_AS(parse_pair("-1,2"), ConfigError);
  CHECK_THROWS_AS(parse_pair("a,b"), ConfigError);
}

TEST_CASE("numbers reject trailing text") {
  CHECK(parse_double("-0.25", "h") == -0.25);
  CHECK_THROWS_AS(parse_double("-0.25x", "h"), ConfigError);
  CHECK_THROWS_AS(parse_double("", "h"), ConfigError);
  CHECK(parse_int("1024", "resolution") == 1024);
  CHECK_THROWS_AS(parse_int("10.5", "resolution"), ConfigError);
}

TEST_CASE("key=value files") {
  const auto m = parse_config_text("# run\nh = -4\npair = 0,4\n\npair = 1,2  # second\ntheta=pi/2\n");
  CHECK(m.at("h") == "-4");
  CHECK(m.at("pair") == "0,4;1,2");
  CHECK(m.at("theta") == "pi/2");
  CHECK_THROWS_AS(parse_config_text("h -4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("colour = red\n"), ConfigError);

  RunConfig cfg;
  for (const auto& [k, v] : m) apply_setting(cfg, k, v);
  CHECK(cfg.h == -4.0);
  REQUIRE(cfg.pairs.size() == 2);
  CHECK(cfg.pairs[1] == PairIndex{1, 2});
  CHECK(cfg.theta == 0.5 * kPi);
}

TEST_CASE("validation") {
  RunConfig cfg;
  cfg.command = "spectrum";
  CHECK_NOTHROW(validate(cfg));
  cfg.h = 0.5;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg.h = -1.0;
  cfg.resolution = 300;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg.resolution = 128;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg.resolution = 512;
  CHECK_NOTHROW(validate(cfg));
  cfg.tol_root = 0.0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg.tol_root = 1e-12;
  cfg.h_min = -0.1;
  cfg.h_max = -1.0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg.h_min = -20.0;
  cfg.command = "nodal";
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg.pairs = {{0, 2}};
  CHECK_NOTHROW(validate(cfg));
  cfg.command = "crossings";
  CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("unknown settings are rejected") {
  RunConfig cfg;
  CHECK_THROWS_AS(apply_setting(cfg, "colour", "red"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "seed", "-3"), ConfigError);
}
