#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "plab/config.hpp"
#include "plab/identities.hpp"
#include "plab/montecarlo.hpp"

namespace plab {

inline constexpr int kSchemaVersion = 1;

// Shortest decimal string that parses back to the same double.
std::string decimal_string(double v);

// Survival curve as plot-ready CSV: t,survivors,n_paths,p_hat,stderr.
std::string survival_csv(const TailEstimate& curve);

// One value per line, for raw sample dumps.
std::string sample_lines(const Eigen::ArrayXd& samples);

// Echo of the run configuration embedded in every JSON document; the seed
// is the resolved one so a report alone suffices to reproduce the run.
nlohmann::ordered_json config_json(const RunConfig& c);

nlohmann::ordered_json theta_json(const RunConfig& c, const ThetaResult& r);

nlohmann::ordered_json verify_json(const RunConfig& c,
                                   const std::vector<IdentityReport>& checks);

// One evaluated constant: closed form, independent evaluation when one
// exists, and their relative error against the row's tolerance.
struct ConstantRow {
  std::string name;
  double alpha;
  double kappa;
  double chi;
  double beta;        // NaN when the row does not involve a functional
  double delta;       // stable index of xi, NaN when not applicable
  double closed;
  double quadrature;  // NaN when no independent evaluation exists
  double rel_error;   // NaN when not cross-checked
  double tolerance;   // NaN when not cross-checked
  std::string validity;
  bool ok;
};

nlohmann::ordered_json constants_json(const RunConfig& c,
                                      const std::vector<ConstantRow>& rows);

// Merges previously written documents into one report; inputs of kind
// "report" contribute their sections, everything else lands in the section
// named by its kind.  Throws std::invalid_argument naming the offending
// source on any schema mismatch.
nlohmann::ordered_json merge_reports(
    const std::vector<std::pair<std::string, nlohmann::ordered_json>>& docs);

}  // namespace plab
