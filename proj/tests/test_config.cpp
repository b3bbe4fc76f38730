#include <doctest.h>

#include <cmath>

#include "config.hpp"
#include "errors.hpp"
#include "hashing.hpp"

using namespace bnf;

namespace {

std::string message_of(const std::string& text) {
  try {
    Config::parse(text, "run.ini");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("typed getters and lists") {
  auto c = Config::parse(
      "# comment\n[spectrum]\nmass = 0x1.8p-1\nlambda_max = 12\n; other comment\n[lifespan]\namplitudes = 1e-2, "
      "1e-3 1e-4\norders = 3 4 5\n[normalform]\nguard = false\n");
  CHECK(c.get_real("spectrum", "mass", 0) == 0.75);
  CHECK(c.get_int("spectrum", "lambda_max", 0) == 12);
  CHECK(c.get_reals("lifespan", "amplitudes") == std::vector<double>{1e-2, 1e-3, 1e-4});
  CHECK(c.get_ints("lifespan", "orders") == std::vector<int>{3, 4, 5});
  CHECK_FALSE(c.get_bool("normalform", "guard", true));
  CHECK(c.get_real("flow", "tol", 1e-9) == 1e-9);
  CHECK(c.has_section("spectrum"));
  CHECK_FALSE(c.has("spectrum", "family"));
}

TEST_CASE("schema violations carry line numbers") {
  CHECK(message_of("[spectrum]\nmass = 1\nmas = 2\n").find("run.ini:3") != std::string::npos);
  CHECK(message_of("[spectrum]\nmass = 1\nmas = 2\n").find("unknown key 'mas'") != std::string::npos);
  CHECK(message_of("[nope]\n").find("unknown section") != std::string::npos);
  CHECK(message_of("mass = 1\n").find("outside") != std::string::npos);
  CHECK(message_of("[spectrum]\nmass = 1\nmass = 2\n").find("duplicate") != std::string::npos);
  CHECK(message_of("[spectrum\n").find("malformed") != std::string::npos);
}

TEST_CASE("bad values are reported against their key") {
  auto c = Config::parse("[spectrum]\nmass = heavy\nlambda_max = 2.5\n", "run.ini");
  CHECK_THROWS_AS(c.get_real("spectrum", "mass", 0), Error);
  CHECK_THROWS_AS(c.get_int("spectrum", "lambda_max", 0), Error);
}

TEST_CASE("repeatable keys") {
  auto c = Config::parse("[nonlinearity]\nmonomial = 1 0 : 1+ 1+ 2-\nmonomial = 0 1 : 2+ 2+ 3-\n");
  auto all = c.all("nonlinearity", "monomial");
  REQUIRE(all.size() == 2);
  CHECK(all[1].line == 3);
}

TEST_CASE("hashing helpers") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(parse_real(hexfloat(0.1)) == 0.1);
  CHECK(parse_real("-0x1p-3") == -0.125);
  CHECK(std::isinf(parse_real(hexfloat(-HUGE_VAL))));
  CHECK_THROWS_AS(parse_real("1.0x"), Error);
}
