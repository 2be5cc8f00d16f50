#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

// The full command-line surface, exercised against the installed binary via
// a shell.  Every run redirects both streams to scratch files in the test
// working directory.

namespace {

using nlohmann::json;

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

CliResult run_cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const std::string tag = std::to_string(counter++);
  const std::string out_path = "cli_stdout_" + tag + ".tmp";
  const std::string err_path = "cli_stderr_" + tag + ".tmp";
  std::string cmd;
  if (!env.empty()) cmd += env + " ";
  cmd += "\"" PLAB_CLI_PATH "\" " + args;
  cmd += " >" + out_path + " 2>" + err_path;
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return r;
}

json load_json(const std::string& path) { return json::parse(slurp(path)); }

long count_lines(const std::string& text) {
  long n = 0;
  for (char c : text) n += c == '\n' ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("help prints the subcommands and exits cleanly") {
  const CliResult r = run_cli("--help");
  CHECK(r.code == 0);
  CHECK(r.out.find("sample") != std::string::npos);
  CHECK(r.out.find("verify") != std::string::npos);
  CHECK(r.out.find("constants") != std::string::npos);
}

TEST_CASE("sample emits one parseable value per draw, reproducibly") {
  const std::string args = "sample --alpha 2 --kappa 0.5 --n 5 --seed 3";
  const CliResult first = run_cli(args);
  CHECK(first.code == 0);
  CHECK(count_lines(first.out) == 5);
  std::istringstream in(first.out);
  std::string line;
  while (std::getline(in, line)) {
    size_t used = 0;
    const double v = std::stod(line, &used);
    CHECK(used == line.size());
    CHECK(std::isfinite(v));
  }
  const CliResult second = run_cli(args);
  CHECK(second.out == first.out);
}

TEST_CASE("sample rejects an index outside the supported range") {
  const CliResult r = run_cli("sample --alpha 0.9 --n 5");
  CHECK(r.code == 2);
  CHECK(r.err.find("(1, 2]") != std::string::npos);
}

TEST_CASE("constants lattice cross checks every row") {
  const CliResult r = run_cli("constants --out cli_constants.json");
  CHECK(r.code == 0);
  const json doc = load_json("cli_constants.json");
  CHECK(doc["kind"] == "constants");
  REQUIRE(doc["rows"].size() == 43);
  for (const auto& row : doc["rows"]) {
    CHECK(row["ok"] == true);
  }
  std::remove("cli_constants.json");
}

TEST_CASE("constants point mode reports the requested parameters") {
  const CliResult r = run_cli(
      "constants --alpha 2 --kappa 0.5 --beta -1 --out cli_point.json");
  CHECK(r.code == 0);
  const json doc = load_json("cli_point.json");
  REQUIRE(doc["rows"].size() == 10);
  const json& tau = doc["rows"][0];
  CHECK(tau["name"] == "kappa_tau");
  CHECK(tau["closed"].get<double>() ==
        doctest::Approx(1.4142135623730951).epsilon(1e-12));
  CHECK(tau["validity"] == "cross_checked");
  const json& xi = doc["rows"][1];
  CHECK(xi["name"] == "kappa_xi");
  CHECK(xi["closed"].get<double>() ==
        doctest::Approx(3.141592653589793).epsilon(1e-12));
  CHECK(xi["validity"] == "exact");
  const json& pre = doc["rows"][2];
  CHECK(pre["name"] == "passage_prefactor");
  CHECK(pre["closed"].get<double>() ==
        doctest::Approx(0.61780842494470076608).epsilon(1e-10));
  std::remove("cli_point.json");
}

TEST_CASE("theta on the driving process reports theory and a curve") {
  const CliResult r = run_cli(
      "theta --alpha 2 --kappa 0.5 --paths 2000 --steps 256 --horizon 50 "
      "--seed 5 --out cli_theta.json --curve-out cli_curve.csv");
  CHECK(r.code == 0);
  const json doc = load_json("cli_theta.json");
  CHECK(doc["kind"] == "theta");
  CHECK(doc["comparison"] == "theory");
  CHECK(doc["theoretical_theta"].get<double>() == doctest::Approx(0.5));
  CHECK(doc["agreement"].is_boolean());
  CHECK(doc["resolution_check"]["passed"] == true);
  const double theta = doc["theta_hat"].get<double>();
  CHECK(theta > 0.3);
  CHECK(theta < 0.6);
  CHECK(doc["curve"].size() > 10);
  const std::string csv = slurp("cli_curve.csv");
  CHECK(csv.rfind("t,survivors,n_paths,p_hat,stderr\n", 0) == 0);
  CHECK(count_lines(csv) == doc["curve"].size() + 1);
  std::remove("cli_theta.json");
  std::remove("cli_curve.csv");
}

TEST_CASE("theta without a closed exponent is labeled exploratory") {
  const CliResult r = run_cli(
      "theta --alpha 1.5 --chi 0 --kappa 1 --beta 1 --paths 1500 "
      "--steps 1024 --horizon 20 --seed 7 --out cli_expl.json");
  CHECK(r.code == 0);
  const json doc = load_json("cli_expl.json");
  CHECK(doc["comparison"] == "exploratory");
  CHECK(doc["theoretical_theta"].is_null());
  CHECK(doc["agreement"].is_null());
  std::remove("cli_expl.json");
}

TEST_CASE("verify runs a single suite end to end") {
  const CliResult r = run_cli(
      "verify --suite positivity --alpha 1.5 --chi -0.5 --paths 2000 "
      "--steps 64 --seed 3 --out cli_verify.json");
  CHECK(r.code == 0);
  const json doc = load_json("cli_verify.json");
  CHECK(doc["kind"] == "verify");
  REQUIRE(doc["checks"].size() == 1);
  CHECK(doc["checks"][0]["name"] == "functional_positivity_matches_driver");
  CHECK(doc["checks"][0]["status"] == "passed");
  std::remove("cli_verify.json");
}

TEST_CASE("verify maps an inconclusive check to its own exit code") {
  const CliResult r = run_cli(
      "verify --suite symmetry --alpha 1.5 --chi 1 --paths 300 --steps 128 "
      "--horizon 8 --seed 3 --out cli_inc.json");
  CHECK(r.code == 4);
  const json doc = load_json("cli_inc.json");
  CHECK(doc["checks"][0]["status"] == "inconclusive");
  std::remove("cli_inc.json");
}

TEST_CASE("verify rejects unusable requests before sampling") {
  const CliResult unknown = run_cli("verify --suite nonsense");
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("unknown suite 'nonsense'") != std::string::npos);

  const CliResult bingham = run_cli(
      "verify --suite bingham --alpha 1.5 --chi 1 --paths 2000 --steps 64");
  CHECK(bingham.code == 2);
  CHECK(bingham.err.find("no positive jumps") != std::string::npos);

  const CliResult kp = run_cli(
      "verify --suite kp --alpha 1.5 --chi -1 --paths 2000 --steps 64");
  CHECK(kp.code == 2);
  CHECK(kp.err.find("no negative jumps") != std::string::npos);
}

TEST_CASE("report merges documents and is idempotent") {
  CHECK(run_cli("constants --alpha 2 --kappa 0.5 --out cli_m_a.json").code ==
        0);
  CHECK(run_cli("verify --suite positivity --alpha 1.5 --chi -0.5 "
                "--paths 2000 --steps 64 --seed 3 --out cli_m_b.json")
            .code == 0);
  const CliResult merged =
      run_cli("report cli_m_a.json cli_m_b.json --out cli_m.json");
  CHECK(merged.code == 0);
  const json doc = load_json("cli_m.json");
  CHECK(doc["kind"] == "report");
  CHECK(doc["constants"].size() == 1);
  CHECK(doc["verify"].size() == 1);
  CHECK(doc["theta"].empty());

  const CliResult again = run_cli("report cli_m.json --out cli_m2.json");
  CHECK(again.code == 0);
  CHECK(load_json("cli_m2.json") == doc);

  for (const char* f :
       {"cli_m_a.json", "cli_m_b.json", "cli_m.json", "cli_m2.json"}) {
    std::remove(f);
  }
}

TEST_CASE("report names the file behind every input error") {
  const CliResult missing = run_cli("report cli_nope.json");
  CHECK(missing.code == 2);
  CHECK(missing.err.find("cannot open input file 'cli_nope.json'") !=
        std::string::npos);

  spit("cli_corrupt.json", "not json{{");
  const CliResult corrupt = run_cli("report cli_corrupt.json");
  CHECK(corrupt.code == 2);
  CHECK(corrupt.err.find("schema mismatch in 'cli_corrupt.json'") !=
        std::string::npos);
  std::remove("cli_corrupt.json");
}

TEST_CASE("flags override configuration file entries") {
  spit("cli_base.conf", "alpha=1.2\nn=3\nkappa=0.5\n");
  const CliResult from_file =
      run_cli("sample --config cli_base.conf --alpha 2 --seed 1");
  const CliResult direct =
      run_cli("sample --alpha 2 --kappa 0.5 --n 3 --seed 1");
  CHECK(from_file.code == 0);
  CHECK(count_lines(from_file.out) == 3);
  CHECK(from_file.out == direct.out);
  std::remove("cli_base.conf");
}

TEST_CASE("the seed environment variable acts as a default") {
  unsetenv("PERSISTENCE_LAB_SEED");
  const CliResult env_run = run_cli("sample --alpha 2 --kappa 0.5 --n 4",
                                    "PERSISTENCE_LAB_SEED=99");
  const CliResult flag_run = run_cli("sample --alpha 2 --kappa 0.5 --n 4 "
                                     "--seed 99");
  const CliResult default_run = run_cli("sample --alpha 2 --kappa 0.5 --n 4");
  CHECK(env_run.code == 0);
  CHECK(env_run.out == flag_run.out);
  CHECK(env_run.out != default_run.out);
}

TEST_CASE("thread count never changes the numbers") {
  const CliResult s1 =
      run_cli("sample --alpha 1.7 --chi 0.3 --n 200 --seed 4 --threads 1");
  const CliResult s2 =
      run_cli("sample --alpha 1.7 --chi 0.3 --n 200 --seed 4 --threads 2");
  CHECK(s1.code == 0);
  CHECK(s1.out == s2.out);

  const std::string theta_args =
      "theta --alpha 1.5 --chi 0 --kappa 1 --beta 1 --paths 1500 "
      "--steps 1024 --horizon 20 --seed 7 --out /dev/null ";
  CHECK(run_cli(theta_args + "--curve-out cli_t1.csv --threads 1").code == 0);
  CHECK(run_cli(theta_args + "--curve-out cli_t2.csv --threads 2").code == 0);
  CHECK(slurp("cli_t1.csv") == slurp("cli_t2.csv"));
  CHECK(!slurp("cli_t1.csv").empty());
  std::remove("cli_t1.csv");
  std::remove("cli_t2.csv");
}
