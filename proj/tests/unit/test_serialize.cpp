#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "doctest.h"
#include "plab/serialize.hpp"

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

plab::TailEstimate small_curve() {
  plab::TailEstimate curve;
  curve.t_grid = Eigen::ArrayXd(2);
  curve.t_grid << 1.0, 2.0;
  curve.survivors = Eigen::Array<long, Eigen::Dynamic, 1>(2);
  curve.survivors << 50, 25;
  curve.n_effective = 100;
  curve.n_failures = 3;
  curve.survival = Eigen::ArrayXd(2);
  curve.survival << 0.5, 0.25;
  curve.se = Eigen::ArrayXd(2);
  curve.se << 0.05, 0.025;
  curve.dt = 0.01;
  return curve;
}

plab::ThetaResult small_theta() {
  plab::ThetaResult r;
  r.curve = small_curve();
  r.fit.theta_hat = 0.25;
  r.fit.theta_stderr = 0.01;
  r.fit.window_lo = 0;
  r.fit.window_hi = 1;
  r.fit.n_points = 2;
  r.coarse_fit = r.fit;
  r.coarse_fit.theta_hat = 0.26;
  r.resolution_passed = true;
  return r;
}

}  // namespace

TEST_CASE("decimal strings are shortest round trips") {
  CHECK(plab::decimal_string(0.1) == "0.1");
  CHECK(plab::decimal_string(-2.0) == "-2");
  CHECK(plab::decimal_string(0.0) == "0");
  const double third = 1.0 / 3.0;
  CHECK(std::strtod(plab::decimal_string(third).c_str(), nullptr) == third);
  const double big = 6.02e23;
  CHECK(std::strtod(plab::decimal_string(big).c_str(), nullptr) == big);
}

TEST_CASE("survival curves print as exact csv") {
  const std::string expected =
      "t,survivors,n_paths,p_hat,stderr\n"
      "1,50,100,0.5,0.05\n"
      "2,25,100,0.25,0.025\n";
  CHECK(plab::survival_csv(small_curve()) == expected);
}

TEST_CASE("sample dumps are one value per line") {
  Eigen::ArrayXd samples(3);
  samples << 1.5, -2.0, 0.125;
  CHECK(plab::sample_lines(samples) == "1.5\n-2\n0.125\n");
}

TEST_CASE("config echo resolves the seed and keeps unset beta null") {
  unsetenv("PERSISTENCE_LAB_SEED");
  plab::RunConfig c;
  nlohmann::ordered_json j = plab::config_json(c);
  CHECK(j["seed"] == 1);
  CHECK(j["beta"].is_null());
  CHECK(j["alpha"] == doctest::Approx(1.5));

  c.seed = 7;
  c.beta = -1.0;
  j = plab::config_json(c);
  CHECK(j["seed"] == 7);
  CHECK(j["beta"] == doctest::Approx(-1.0));
}

TEST_CASE("theta documents carry fit, resolution, and curve") {
  unsetenv("PERSISTENCE_LAB_SEED");
  plab::RunConfig c;
  plab::ThetaResult r = small_theta();

  SUBCASE("with a theoretical value") {
    r.theory = 0.25;
    r.agrees = true;
    const nlohmann::ordered_json j = plab::theta_json(c, r);
    CHECK(j["schema_version"] == plab::kSchemaVersion);
    CHECK(j["kind"] == "theta");
    CHECK(j["theta_hat"] == doctest::Approx(0.25));
    CHECK(j["fit_window"]["t_lo"] == doctest::Approx(1.0));
    CHECK(j["fit_window"]["t_hi"] == doctest::Approx(2.0));
    CHECK(j["fit_window"]["n_points"] == 2);
    CHECK(j["resolution_check"]["passed"] == true);
    CHECK(j["resolution_check"]["coarse_theta_hat"] == doctest::Approx(0.26));
    CHECK(j["theoretical_theta"] == doctest::Approx(0.25));
    CHECK(j["agreement"] == true);
    CHECK(j["comparison"] == "theory");
    CHECK(j["curve"].size() == 2);
    CHECK(j["curve"][1]["survivors"] == 25);
    CHECK(j["n_failures"] == 3);
  }
  SUBCASE("without one the comparison is exploratory") {
    const nlohmann::ordered_json j = plab::theta_json(c, r);
    CHECK(j["theoretical_theta"].is_null());
    CHECK(j["agreement"].is_null());
    CHECK(j["comparison"] == "exploratory");
  }
}

TEST_CASE("verify documents turn non-finite statistics into null") {
  plab::RunConfig c;
  plab::IdentityReport ok;
  ok.name = "demo";
  ok.status = plab::CheckStatus::passed;
  ok.statistic = 0.5;
  ok.threshold = 1.0;
  ok.detail = "fine";
  ok.n_effective = 10;
  plab::IdentityReport bad = ok;
  bad.statistic = kNaN;

  const nlohmann::ordered_json j = plab::verify_json(c, {ok, bad});
  CHECK(j["kind"] == "verify");
  CHECK(j["checks"].size() == 2);
  CHECK(j["checks"][0]["statistic"] == doctest::Approx(0.5));
  CHECK(j["checks"][0]["status"] == "passed");
  CHECK(j["checks"][1]["statistic"].is_null());
}

TEST_CASE("constant rows keep numbers and nulls apart") {
  plab::RunConfig c;
  plab::ConstantRow row{"demo_constant", 2.0,  0.5,  0.0, kNaN,
                        kNaN,            1.5,  1.5,  0.0, 1e-8,
                        "cross_checked", true};
  const nlohmann::ordered_json j = plab::constants_json(c, {row});
  CHECK(j["kind"] == "constants");
  CHECK(j["rows"].size() == 1);
  CHECK(j["rows"][0]["beta"].is_null());
  CHECK(j["rows"][0]["delta"].is_null());
  CHECK(j["rows"][0]["closed"] == doctest::Approx(1.5));
  CHECK(j["rows"][0]["validity"] == "cross_checked");
  CHECK(j["rows"][0]["ok"] == true);
}

TEST_CASE("merging routes documents by kind and nests reports") {
  plab::RunConfig c;
  const nlohmann::ordered_json theta = plab::theta_json(c, small_theta());
  const nlohmann::ordered_json verify = plab::verify_json(c, {});
  const nlohmann::ordered_json constants = plab::constants_json(c, {});

  const nlohmann::ordered_json merged = plab::merge_reports(
      {{"a.json", theta}, {"b.json", verify}, {"c.json", constants}});
  CHECK(merged["kind"] == "report");
  CHECK(merged["theta"].size() == 1);
  CHECK(merged["verify"].size() == 1);
  CHECK(merged["constants"].size() == 1);

  // Feeding a merged report back in reproduces the same sections.
  const nlohmann::ordered_json again =
      plab::merge_reports({{"m.json", merged}});
  CHECK(again == merged);

  // A report and a fresh document concatenate.
  const nlohmann::ordered_json both =
      plab::merge_reports({{"m.json", merged}, {"d.json", theta}});
  CHECK(both["theta"].size() == 2);
}

TEST_CASE("merging rejects malformed documents by source name") {
  const auto expect_message = [](const std::vector<
                                     std::pair<std::string,
                                               nlohmann::ordered_json>>& docs,
                                 const std::string& fragment) {
    try {
      plab::merge_reports(docs);
      FAIL_CHECK("expected std::invalid_argument for " << fragment);
    } catch (const std::invalid_argument& e) {
      const std::string what = e.what();
      CHECK(what.find("bad.json") != std::string::npos);
      CHECK(what.find(fragment) != std::string::npos);
    }
  };

  expect_message({{"bad.json", nlohmann::ordered_json::array()}},
                 "not a JSON object");

  nlohmann::ordered_json no_version{{"kind", "theta"}};
  expect_message({{"bad.json", no_version}}, "schema_version");

  nlohmann::ordered_json wrong_version{{"schema_version", 999},
                                       {"kind", "theta"}};
  expect_message({{"bad.json", wrong_version}}, "schema_version");

  nlohmann::ordered_json no_kind{{"schema_version", plab::kSchemaVersion}};
  expect_message({{"bad.json", no_kind}}, "missing kind");

  nlohmann::ordered_json odd_kind{{"schema_version", plab::kSchemaVersion},
                                  {"kind", "surprise"}};
  expect_message({{"bad.json", odd_kind}}, "unknown kind");

  nlohmann::ordered_json gutted{{"schema_version", plab::kSchemaVersion},
                                {"kind", "report"},
                                {"theta", nlohmann::ordered_json::array()}};
  expect_message({{"bad.json", gutted}}, "section");
}
