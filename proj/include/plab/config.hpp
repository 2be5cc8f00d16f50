#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "plab/montecarlo.hpp"

namespace plab {

// Flat run configuration shared by every command.  The same keys are
// accepted as command-line flags and as lines of a key=value file; flags
// win over file entries.  Optional fields stay unset unless given, which is
// what makes parse(serialize(c)) == c hold exactly.
struct RunConfig {
  double alpha = 1.5;
  double kappa = 1.0;
  double chi = 0.0;
  std::optional<double> beta;  // unset: study the driving process itself
  double level = 1.0;
  long paths = 10000;
  long steps = 4096;
  double horizon = 100.0;
  std::optional<std::uint64_t> seed;  // unset: environment, then 1
  int threads = 0;                    // 0 or less: all available cores
  std::string suite = "all";
  double pv_epsilon = -1.0;  // negative: truncate at the grid scale iff
                             // the functional needs a principal value
  double bandwidth = 0.0;    // non-positive: default local-time bandwidth
  std::string out;           // empty: stdout
  long n = 1000;             // draw count for the sample command

  bool operator==(const RunConfig&) const = default;
};

// Parses key=value lines with # comments and blank lines allowed.  Unknown
// keys and malformed values raise std::invalid_argument naming the key.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

std::string serialize_config(const RunConfig& c);

// Seed precedence: explicit value, then PERSISTENCE_LAB_SEED, then 1.
std::uint64_t resolve_seed(const RunConfig& c);

// Assembles the sampling configuration for a survival study; the functional
// is attached exactly when beta is set.
MonteCarloConfig to_monte_carlo(const RunConfig& c);

// Assembles the local-time study configuration; beta_override replaces the
// configured beta when given (some identities fix their own exponent).
XiBatchConfig to_xi_config(const RunConfig& c,
                           std::optional<double> beta_override = {});

}  // namespace plab
