#include "plab/serialize.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace plab {

namespace {

using nlohmann::ordered_json;

// NaN is not representable in JSON; nlohmann would emit null anyway, this
// just makes the substitution explicit at the call sites that expect it.
ordered_json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string decimal_string(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string survival_csv(const TailEstimate& curve) {
  std::string out = "t,survivors,n_paths,p_hat,stderr\n";
  for (Eigen::Index i = 0; i < curve.t_grid.size(); ++i) {
    out += decimal_string(curve.t_grid[i]);
    out += ',';
    out += std::to_string(curve.survivors[i]);
    out += ',';
    out += std::to_string(curve.n_effective);
    out += ',';
    out += decimal_string(curve.survival[i]);
    out += ',';
    out += decimal_string(curve.se[i]);
    out += '\n';
  }
  return out;
}

std::string sample_lines(const Eigen::ArrayXd& samples) {
  std::string out;
  out.reserve(static_cast<std::size_t>(samples.size()) * 20);
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    out += decimal_string(samples[i]);
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["alpha"] = c.alpha;
  j["kappa"] = c.kappa;
  j["chi"] = c.chi;
  if (c.beta) {
    j["beta"] = *c.beta;
  } else {
    j["beta"] = nullptr;
  }
  j["level"] = c.level;
  j["paths"] = c.paths;
  j["steps"] = c.steps;
  j["horizon"] = c.horizon;
  j["seed"] = resolve_seed(c);
  j["threads"] = c.threads;
  j["suite"] = c.suite;
  j["pv_epsilon"] = c.pv_epsilon;
  j["bandwidth"] = c.bandwidth;
  j["n"] = c.n;
  return j;
}

nlohmann::ordered_json theta_json(const RunConfig& c, const ThetaResult& r) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "theta";
  j["config"] = config_json(c);
  j["theta_hat"] = r.fit.theta_hat;
  j["theta_stderr"] = r.fit.theta_stderr;
  j["fit_window"] = ordered_json{
      {"lo_index", r.fit.window_lo},
      {"hi_index", r.fit.window_hi},
      {"t_lo", r.curve.t_grid[r.fit.window_lo]},
      {"t_hi", r.curve.t_grid[r.fit.window_hi]},
      {"n_points", r.fit.n_points}};
  j["resolution_check"] =
      ordered_json{{"passed", r.resolution_passed},
                   {"coarse_theta_hat", r.coarse_fit.theta_hat},
                   {"coarse_theta_stderr", r.coarse_fit.theta_stderr}};
  if (r.theory) {
    j["theoretical_theta"] = *r.theory;
    j["agreement"] = r.agrees.value_or(false);
    j["comparison"] = "theory";
  } else {
    j["theoretical_theta"] = nullptr;
    j["agreement"] = nullptr;
    j["comparison"] = "exploratory";
  }
  j["n_effective"] = r.curve.n_effective;
  j["n_failures"] = r.curve.n_failures;
  ordered_json curve = ordered_json::array();
  for (Eigen::Index i = 0; i < r.curve.t_grid.size(); ++i) {
    curve.push_back(ordered_json{{"t", r.curve.t_grid[i]},
                                 {"survivors", r.curve.survivors[i]},
                                 {"n_paths", r.curve.n_effective},
                                 {"p_hat", r.curve.survival[i]},
                                 {"stderr", r.curve.se[i]}});
  }
  j["curve"] = std::move(curve);
  return j;
}

nlohmann::ordered_json verify_json(const RunConfig& c,
                                   const std::vector<IdentityReport>& checks) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "verify";
  j["config"] = config_json(c);
  ordered_json arr = ordered_json::array();
  for (const IdentityReport& r : checks) {
    arr.push_back(ordered_json{{"name", r.name},
                               {"status", to_string(r.status)},
                               {"statistic", number_or_null(r.statistic)},
                               {"threshold", number_or_null(r.threshold)},
                               {"detail", r.detail},
                               {"n_effective", r.n_effective}});
  }
  j["checks"] = std::move(arr);
  return j;
}

nlohmann::ordered_json constants_json(const RunConfig& c,
                                      const std::vector<ConstantRow>& rows) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "constants";
  j["config"] = config_json(c);
  ordered_json arr = ordered_json::array();
  for (const ConstantRow& r : rows) {
    arr.push_back(ordered_json{{"name", r.name},
                               {"alpha", number_or_null(r.alpha)},
                               {"kappa", number_or_null(r.kappa)},
                               {"chi", number_or_null(r.chi)},
                               {"beta", number_or_null(r.beta)},
                               {"delta", number_or_null(r.delta)},
                               {"closed", number_or_null(r.closed)},
                               {"quadrature", number_or_null(r.quadrature)},
                               {"rel_error", number_or_null(r.rel_error)},
                               {"tolerance", number_or_null(r.tolerance)},
                               {"validity", r.validity},
                               {"ok", r.ok}});
  }
  j["rows"] = std::move(arr);
  return j;
}

nlohmann::ordered_json merge_reports(
    const std::vector<std::pair<std::string, nlohmann::ordered_json>>& docs) {
  ordered_json merged;
  merged["schema_version"] = kSchemaVersion;
  merged["kind"] = "report";
  merged["theta"] = ordered_json::array();
  merged["constants"] = ordered_json::array();
  merged["verify"] = ordered_json::array();

  for (const auto& [path, doc] : docs) {
    const auto fail = [&path](const std::string& why) {
      throw std::invalid_argument("schema mismatch in '" + path + "': " + why);
    };
    if (!doc.is_object()) fail("not a JSON object");
    if (!doc.contains("schema_version") ||
        !doc["schema_version"].is_number_integer() ||
        doc["schema_version"].get<int>() != kSchemaVersion) {
      fail("missing or unsupported schema_version");
    }
    if (!doc.contains("kind") || !doc["kind"].is_string()) {
      fail("missing kind");
    }
    const std::string kind = doc["kind"].get<std::string>();
    if (kind == "report") {
      for (const char* section : {"theta", "constants", "verify"}) {
        if (!doc.contains(section) || !doc[section].is_array()) {
          fail(std::string("report lacks section '") + section + "'");
        }
        for (const auto& entry : doc[section]) {
          merged[section].push_back(entry);
        }
      }
    } else if (kind == "theta" || kind == "constants" || kind == "verify") {
      merged[kind].push_back(doc);
    } else {
      fail("unknown kind '" + kind + "'");
    }
  }
  return merged;
}

}  // namespace plab
