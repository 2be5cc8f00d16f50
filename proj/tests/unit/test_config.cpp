#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "plab/config.hpp"
#include "plab/functionals.hpp"

namespace {

plab::RunConfig full_config() {
  plab::RunConfig c;
  c.alpha = 1.8;
  c.kappa = 0.25;
  c.chi = -1.0;
  c.beta = 0.5;
  c.level = 2.0;
  c.paths = 5000;
  c.steps = 1024;
  c.horizon = 32.0;
  c.seed = 77;
  c.threads = 2;
  c.suite = "fgb";
  c.pv_epsilon = 0.001;
  c.bandwidth = 0.05;
  c.out = "res.json";
  c.n = 250;
  return c;
}

// Restores the seed variable around a test body.
struct SeedEnvGuard {
  SeedEnvGuard() { unsetenv("PERSISTENCE_LAB_SEED"); }
  ~SeedEnvGuard() { unsetenv("PERSISTENCE_LAB_SEED"); }
};

}  // namespace

TEST_CASE("serialize keeps a fixed key order and skips unset fields") {
  const std::string expected =
      "alpha=1.8\n"
      "kappa=0.25\n"
      "chi=-1\n"
      "beta=0.5\n"
      "level=2\n"
      "paths=5000\n"
      "steps=1024\n"
      "horizon=32\n"
      "seed=77\n"
      "threads=2\n"
      "suite=fgb\n"
      "pv_epsilon=0.001\n"
      "bandwidth=0.05\n"
      "out=res.json\n"
      "n=250\n";
  CHECK(plab::serialize_config(full_config()) == expected);

  const std::string defaults = plab::serialize_config(plab::RunConfig{});
  CHECK(defaults.find("beta=") == std::string::npos);
  CHECK(defaults.find("seed=") == std::string::npos);
  CHECK(defaults.find("out=") == std::string::npos);
}

TEST_CASE("parse round trips serialize exactly") {
  const plab::RunConfig full = full_config();
  CHECK(plab::parse_config_text(plab::serialize_config(full)) == full);
  const plab::RunConfig defaults{};
  CHECK(plab::parse_config_text(plab::serialize_config(defaults)) == defaults);
}

TEST_CASE("parse accepts comments, blanks, and padding") {
  const plab::RunConfig c = plab::parse_config_text(
      "# survival study\n"
      "\n"
      "  alpha = 1.9   # close to the Gaussian edge\n"
      "\tsuite=kp\r\n"
      "n=42\n");
  CHECK(c.alpha == doctest::Approx(1.9));
  CHECK(c.suite == "kp");
  CHECK(c.n == 42);
  CHECK(c.kappa == doctest::Approx(1.0));
}

TEST_CASE("parse rejects malformed input by name") {
  CHECK_THROWS_WITH_AS(plab::parse_config_text("frobnicate=1\n"),
                       "unknown configuration key 'frobnicate'",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(plab::parse_config_text("alpha=fast\n"),
                       "invalid value for key 'alpha'", std::invalid_argument);
  CHECK_THROWS_WITH_AS(plab::parse_config_text("threads=1.5\n"),
                       "invalid value for key 'threads'",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(plab::parse_config_text("just some words\n"),
                       "expected key=value, got 'just some words'",
                       std::invalid_argument);
}

TEST_CASE("config files are read verbatim and missing ones are named") {
  const std::string path = "test_config_roundtrip.conf";
  {
    std::ofstream out(path, std::ios::binary);
    out << plab::serialize_config(full_config());
  }
  CHECK(plab::parse_config_file(path) == full_config());
  std::remove(path.c_str());

  try {
    plab::parse_config_file("no/such/file.conf");
    FAIL("expected std::invalid_argument");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("no/such/file.conf") !=
          std::string::npos);
  }
}

TEST_CASE("seed resolution prefers explicit, then environment, then one") {
  SeedEnvGuard guard;
  plab::RunConfig c;
  CHECK(plab::resolve_seed(c) == 1);

  setenv("PERSISTENCE_LAB_SEED", "1234", 1);
  CHECK(plab::resolve_seed(c) == 1234);

  c.seed = 9;
  CHECK(plab::resolve_seed(c) == 9);

  c.seed.reset();
  setenv("PERSISTENCE_LAB_SEED", "12x", 1);
  CHECK_THROWS_WITH_AS(plab::resolve_seed(c),
                       "PERSISTENCE_LAB_SEED is not an unsigned integer",
                       std::invalid_argument);
  setenv("PERSISTENCE_LAB_SEED", "-3", 1);
  CHECK_THROWS_AS(plab::resolve_seed(c), std::invalid_argument);
}

TEST_CASE("survival study assembly attaches the functional only when asked") {
  SeedEnvGuard guard;
  plab::RunConfig c;
  c.alpha = 1.5;
  c.kappa = 0.5;
  c.chi = 1.0;
  c.paths = 200;
  c.steps = 64;
  c.horizon = 4.0;

  const plab::MonteCarloConfig plain = plab::to_monte_carlo(c);
  CHECK_FALSE(plain.functional.has_value());
  CHECK(plain.level == doctest::Approx(1.0));
  CHECK(plain.n_paths == 200);
  CHECK(plain.n_steps == 64);
  CHECK(plain.seed == 1);

  c.beta = 0.5;
  const plab::MonteCarloConfig mild = plab::to_monte_carlo(c);
  REQUIRE(mild.functional.has_value());
  CHECK(mild.functional->beta == doctest::Approx(0.5));
  CHECK(mild.functional->pv_epsilon == 0.0);

  c.beta = -1.0;
  const plab::MonteCarloConfig pv = plab::to_monte_carlo(c);
  REQUIRE(pv.functional.has_value());
  const double expected = plab::default_pv_epsilon(
      plab::StableParams(c.alpha, c.kappa, c.chi), c.horizon, c.steps);
  CHECK(pv.functional->pv_epsilon == doctest::Approx(expected));

  c.pv_epsilon = 0.015;
  const plab::MonteCarloConfig pinned = plab::to_monte_carlo(c);
  CHECK(pinned.functional->pv_epsilon == doctest::Approx(0.015));
}

TEST_CASE("local time study assembly honors the beta override") {
  SeedEnvGuard guard;
  plab::RunConfig c;
  c.alpha = 1.5;
  c.kappa = 0.25;
  c.level = 1.5;
  c.paths = 300;
  c.steps = 128;
  c.horizon = 8.0;
  c.bandwidth = 0.07;
  c.pv_epsilon = 0.002;
  c.seed = 11;

  const plab::XiBatchConfig def = plab::to_xi_config(c);
  CHECK(def.beta == doctest::Approx(1.0));
  CHECK(def.level == doctest::Approx(1.5));
  CHECK(def.passage_level == doctest::Approx(1.5));
  CHECK(def.n_paths == 300);
  CHECK(def.n_steps == 128);
  CHECK(def.seed == 11);
  CHECK(def.bandwidth == doctest::Approx(0.07));
  CHECK(def.pv_epsilon == doctest::Approx(0.002));

  c.beta = 0.5;
  CHECK(plab::to_xi_config(c).beta == doctest::Approx(0.5));
  CHECK(plab::to_xi_config(c, -1.0).beta == doctest::Approx(-1.0));
}
