#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "plab/config.hpp"
#include "plab/errors.hpp"
#include "plab/functionals.hpp"
#include "plab/identities.hpp"
#include "plab/montecarlo.hpp"
#include "plab/serialize.hpp"
#include "plab/specfun.hpp"
#include "plab/stable.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitInconclusive = 4;
constexpr int kExitCheckFailed = 5;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::invalid_argument("cannot open output file '" + path + "'");
  }
  out << text;
}

int run_sample(const plab::RunConfig& cfg) {
  plab::StableParams params(cfg.alpha, cfg.kappa, cfg.chi);
  if (cfg.n < 1) throw std::invalid_argument("--n must be at least 1");
  Eigen::ArrayXd draws = plab::increment_batch(params, cfg.n,
                                               plab::resolve_seed(cfg),
                                               cfg.threads);
  write_output(plab::sample_lines(draws), cfg.out);
  return kExitOk;
}

int run_theta(const plab::RunConfig& cfg, const std::string& curve_out) {
  plab::MonteCarloConfig mc = plab::to_monte_carlo(cfg);
  plab::ThetaResult result = plab::estimate_theta(mc, cfg.threads);
  write_output(plab::theta_json(cfg, result).dump(2) + "\n", cfg.out);
  if (!curve_out.empty()) {
    write_output(plab::survival_csv(result.curve), curve_out);
  }
  return result.resolution_passed ? kExitOk : kExitNumeric;
}

std::string validity_name(plab::ConstantReport::Validity v) {
  switch (v) {
    case plab::ConstantReport::Validity::exact: return "exact";
    case plab::ConstantReport::Validity::cross_checked: return "cross_checked";
    case plab::ConstantReport::Validity::closed_form_only:
      return "closed_form_only";
    case plab::ConstantReport::Validity::unknown: return "unknown";
  }
  return "unknown";
}

plab::ConstantRow kappa_tau_row(double alpha, double kappa, double chi) {
  plab::StableParams p(alpha, kappa, chi);
  plab::ConstantRow row{"kappa_tau", alpha,        kappa, chi,  kNaN, kNaN,
                        kNaN,        kNaN,         kNaN,  1e-8, "",   false};
  row.closed = plab::kappa_tau_closed(p);
  try {
    row.quadrature = plab::kappa_tau_quadrature(p);
    row.rel_error = std::abs(row.closed - row.quadrature) / row.closed;
    row.validity = "cross_checked";
    row.ok = row.rel_error <= row.tolerance;
  } catch (const plab::NumericError&) {
    row.validity = "error";
    row.ok = false;
  }
  return row;
}

plab::ConstantRow oscillating_row(double delta) {
  plab::ConstantRow row{"oscillating_integral", kNaN, kNaN, kNaN, kNaN, delta,
                        kNaN,                   kNaN, kNaN, 1e-6, "",   false};
  row.closed = plab::oscillating_integral_closed(delta);
  try {
    row.quadrature = plab::oscillating_integral_numeric(delta);
    row.rel_error = std::abs(row.closed - row.quadrature) / row.closed;
    row.validity = "cross_checked";
    row.ok = row.rel_error <= row.tolerance;
  } catch (const plab::NumericError&) {
    row.validity = "error";
    row.ok = false;
  }
  return row;
}

plab::ConstantRow goldman_row() {
  plab::ConstantRow row{
      "integrated_brownian_tail_constant", 2.0,  0.5,     0.0,  1.0, 1.0 / 3.0,
      plab::goldman_constant(),            kNaN, kNaN,    kNaN, "exact", true};
  return row;
}

plab::ConstantRow kappa_xi_row(const plab::StableParams& p, double beta) {
  const double delta = (p.alpha - 1.0) / (p.alpha + beta);
  plab::ConstantRow row{"kappa_xi", p.alpha, p.kappa, p.chi, beta, delta,
                        kNaN,       kNaN,    kNaN,    kNaN,  "",   true};
  if (beta == -1.0) {
    row.closed = M_PI;
    row.validity = "exact";
  } else if (p.gaussian()) {
    row.closed = plab::kappa_xi_brownian(p.kappa, delta);
    row.validity = "closed_form_only";
  } else {
    row.validity = "unknown";
  }
  return row;
}

plab::ConstantRow prefactor_row(const plab::StableParams& p, double beta) {
  const double delta = (p.alpha - 1.0) / (p.alpha + beta);
  plab::ConstantRow row{"passage_prefactor", p.alpha, p.kappa, p.chi,
                        beta,                delta,   kNaN,    kNaN,
                        kNaN,                kNaN,    "",      true};
  try {
    plab::ConstantReport report = plab::composed_prefactor(p, beta, true);
    row.closed = report.value;
    row.validity = validity_name(report.validity);
  } catch (const plab::NumericError&) {
    row.validity = "error";
    row.ok = false;
  }
  return row;
}

int run_constants(const plab::RunConfig& cfg, bool explicit_point) {
  std::vector<plab::ConstantRow> rows;
  if (explicit_point) {
    rows.push_back(kappa_tau_row(cfg.alpha, cfg.kappa, cfg.chi));
    if (cfg.beta) {
      plab::StableParams p(cfg.alpha, cfg.kappa, cfg.chi);
      rows.push_back(kappa_xi_row(p, *cfg.beta));
      rows.push_back(prefactor_row(p, *cfg.beta));
    }
  } else {
    for (double alpha : {1.2, 1.5, 1.8, 2.0}) {
      for (double chi : {-1.0, 0.0, 1.0}) {
        for (double kappa : {0.5, 1.0, 2.0}) {
          rows.push_back(kappa_tau_row(alpha, kappa, chi));
        }
      }
    }
  }
  for (double delta : {0.25, 0.5, 2.0 / 3.0, 1.0, 1.5, 1.75}) {
    rows.push_back(oscillating_row(delta));
  }
  rows.push_back(goldman_row());

  write_output(plab::constants_json(cfg, rows).dump(2) + "\n", cfg.out);
  for (const plab::ConstantRow& row : rows) {
    if (!row.ok) return kExitCheckFailed;
  }
  return kExitOk;
}

int run_verify(const plab::RunConfig& cfg) {
  const std::string& suite = cfg.suite;
  const bool known = suite == "all" || suite == "symmetry" ||
                     suite == "fgb" || suite == "bingham" || suite == "kp" ||
                     suite == "tauberian" || suite == "positivity" ||
                     suite == "split";
  if (!known) throw std::invalid_argument("unknown suite '" + suite + "'");

  plab::StableParams params(cfg.alpha, cfg.kappa, cfg.chi);
  const std::uint64_t seed = plab::resolve_seed(cfg);
  const bool no_negative_jumps = params.gaussian() || params.chi == 1.0;
  const bool no_positive_jumps = params.gaussian() || params.chi == -1.0;

  std::vector<plab::IdentityReport> checks;

  // One local-time study feeds the symmetry, split, ordering and tail
  // checks; the principal-value study for the Cauchy identity always uses
  // its own exponent.
  std::optional<plab::XiBatch> batch;
  const auto main_batch = [&]() -> const plab::XiBatch& {
    if (!batch) batch = plab::sample_xi_batch(plab::to_xi_config(cfg),
                                              cfg.threads);
    return *batch;
  };

  if (suite == "all" || suite == "symmetry") {
    checks.push_back(plab::check_symmetry_lemma(main_batch()));
  }
  if (suite == "all" || suite == "split") {
    checks.push_back(plab::check_xi_split_symmetry(main_batch()));
  }
  if (suite == "all" || suite == "kp") {
    if (!no_negative_jumps && suite == "kp") {
      throw std::invalid_argument(
          "the passage ordering check needs a driver with no negative jumps");
    }
    if (no_negative_jumps) {
      checks.push_back(plab::check_kp_inequality(main_batch()));
    }
  }
  if (suite == "all" || suite == "tauberian") {
    checks.push_back(plab::check_tauberian_tail(main_batch(), params));
  }
  if (suite == "all" || suite == "fgb") {
    plab::XiBatch pv = plab::sample_xi_batch(plab::to_xi_config(cfg, -1.0),
                                             cfg.threads);
    checks.push_back(
        plab::check_fgb(pv, params.gaussian() ? 0.05 : 0.08));
  }
  if (suite == "all" || suite == "bingham") {
    if (!no_positive_jumps && suite == "bingham") {
      throw std::invalid_argument(
          "the sup tail identity needs a driver with no positive jumps");
    }
    if (no_positive_jumps) {
      Eigen::ArrayXd sup =
          plab::sup_batch(params, 1.0, cfg.steps, cfg.paths, seed,
                          cfg.threads);
      Eigen::ArrayXd inc =
          plab::increment_batch(params, cfg.paths, seed, cfg.threads);
      checks.push_back(plab::check_bingham_tail(sup, inc, params));
    }
  }
  if (suite == "all" || suite == "positivity") {
    const double beta = cfg.beta.value_or(1.0);
    const double eps =
        cfg.pv_epsilon >= 0.0
            ? cfg.pv_epsilon
            : (beta <= -1.0 ? plab::default_pv_epsilon(params, 1.0, cfg.steps)
                            : 0.0);
    plab::FunctionalParams functional(params, beta, eps);
    Eigen::ArrayXd terminal = plab::terminal_functional_batch(
        params, functional, 1.0, cfg.steps, cfg.paths, seed, cfg.threads);
    checks.push_back(plab::check_positivity_a1(terminal, params));
  }

  write_output(plab::verify_json(cfg, checks).dump(2) + "\n", cfg.out);
  bool any_failed = false, any_inconclusive = false;
  for (const plab::IdentityReport& r : checks) {
    if (r.status == plab::CheckStatus::failed) any_failed = true;
    if (r.status == plab::CheckStatus::inconclusive) any_inconclusive = true;
  }
  if (any_failed) return kExitCheckFailed;
  if (any_inconclusive) return kExitInconclusive;
  return kExitOk;
}

int run_report(const std::vector<std::string>& files,
               const plab::RunConfig& cfg) {
  std::vector<std::pair<std::string, nlohmann::ordered_json>> docs;
  for (const std::string& path : files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw std::invalid_argument("cannot open input file '" + path + "'");
    }
    try {
      docs.emplace_back(path, nlohmann::ordered_json::parse(in));
    } catch (const nlohmann::json::parse_error&) {
      throw std::invalid_argument("schema mismatch in '" + path +
                                  "': not valid JSON");
    }
  }
  write_output(plab::merge_reports(docs).dump(2) + "\n", cfg.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  plab::RunConfig cfg;

  // The configuration file loads before flag parsing so that flags given on
  // the command line override file entries.
  try {
    std::string config_path;
    for (int i = 1; i < argc; ++i) {
      const std::string arg = argv[i];
      if (arg == "--config" && i + 1 < argc) {
        config_path = argv[i + 1];
      } else if (arg.rfind("--config=", 0) == 0) {
        config_path = arg.substr(9);
      }
    }
    if (!config_path.empty()) cfg = plab::parse_config_file(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{
      "persistence-lab: survival exponents and distributional identities of "
      "stable processes and their homogeneous functionals"};
  app.require_subcommand(1);

  std::string config_path_echo;
  auto* config_opt = app.add_option(
      "--config", config_path_echo,
      "key=value configuration file; flags override file entries");
  auto* alpha_opt =
      app.add_option("--alpha", cfg.alpha, "stability index, in (1, 2]");
  auto* kappa_opt =
      app.add_option("--kappa", cfg.kappa, "scale parameter of the driver");
  auto* chi_opt = app.add_option(
      "--chi", cfg.chi, "skewness in [-1, 1]; +1 means no negative jumps");
  auto* beta_opt = app.add_option(
      "--beta", cfg.beta,
      "functional exponent; omit to study the driver process itself");
  app.add_option("--level", cfg.level, "passage and local-time level");
  app.add_option("--paths", cfg.paths, "number of sample paths");
  app.add_option("--steps", cfg.steps, "grid steps per path");
  app.add_option("--horizon", cfg.horizon, "time horizon of each path");
  app.add_option("--seed", cfg.seed,
                 "RNG seed (default: PERSISTENCE_LAB_SEED, then 1)");
  app.add_option("--threads", cfg.threads,
                 "worker threads; 0 or less uses every core");
  app.add_option("--suite", cfg.suite,
                 "verify suite: all|symmetry|fgb|bingham|kp|tauberian|"
                 "positivity|split");
  app.add_option("--pv-epsilon", cfg.pv_epsilon,
                 "principal value truncation radius; negative picks the "
                 "grid-scale default when one is required");
  app.add_option("--bandwidth", cfg.bandwidth,
                 "local-time bandwidth; non-positive picks the grid default");
  app.add_option("--out", cfg.out, "output file (default: stdout)");
  app.add_option("--n", cfg.n, "number of draws for the sample command");

  auto* sample_cmd = app.add_subcommand(
      "sample", "draw unit-time increments of the driver, one per line");
  auto* theta_cmd = app.add_subcommand(
      "theta", "estimate the survival exponent with a two-resolution fit");
  std::string curve_out;
  theta_cmd->add_option("--curve-out", curve_out,
                        "also write the survival curve CSV to this path");
  auto* constants_cmd = app.add_subcommand(
      "constants",
      "closed-form constants with independent cross-checks (full lattice "
      "unless point parameters are given)");
  auto* verify_cmd =
      app.add_subcommand("verify", "distributional identity checks");
  auto* report_cmd = app.add_subcommand(
      "report", "merge previously written JSON outputs into one document");
  std::vector<std::string> report_files;
  report_cmd->add_option("files", report_files, "paths of JSON outputs")
      ->required();
  for (CLI::App* sub :
       {sample_cmd, theta_cmd, constants_cmd, verify_cmd, report_cmd}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*sample_cmd) return run_sample(cfg);
    if (*theta_cmd) return run_theta(cfg, curve_out);
    if (*constants_cmd) {
      const bool explicit_point =
          alpha_opt->count() > 0 || kappa_opt->count() > 0 ||
          chi_opt->count() > 0 || beta_opt->count() > 0 ||
          config_opt->count() > 0;
      return run_constants(cfg, explicit_point);
    }
    if (*verify_cmd) return run_verify(cfg);
    if (*report_cmd) return run_report(report_files, cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}
