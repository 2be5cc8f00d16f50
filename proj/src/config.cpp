#include "plab/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "plab/functionals.hpp"

namespace plab {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view value, const std::string& key) {
  double out = 0.0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw std::invalid_argument("invalid value for key '" + key + "'");
  }
  return out;
}

template <typename Int>
Int parse_int(std::string_view value, const std::string& key) {
  Int out = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw std::invalid_argument("invalid value for key '" + key + "'");
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("expected key=value, got '" +
                                  std::string(body) + "'");
    }
    const std::string key{trim(body.substr(0, eq))};
    const std::string_view value = trim(body.substr(eq + 1));
    if (key == "alpha") {
      c.alpha = parse_double(value, key);
    } else if (key == "kappa") {
      c.kappa = parse_double(value, key);
    } else if (key == "chi") {
      c.chi = parse_double(value, key);
    } else if (key == "beta") {
      c.beta = parse_double(value, key);
    } else if (key == "level") {
      c.level = parse_double(value, key);
    } else if (key == "paths") {
      c.paths = parse_int<long>(value, key);
    } else if (key == "steps") {
      c.steps = parse_int<long>(value, key);
    } else if (key == "horizon") {
      c.horizon = parse_double(value, key);
    } else if (key == "seed") {
      c.seed = parse_int<std::uint64_t>(value, key);
    } else if (key == "threads") {
      c.threads = parse_int<int>(value, key);
    } else if (key == "suite") {
      c.suite = std::string(value);
    } else if (key == "pv_epsilon") {
      c.pv_epsilon = parse_double(value, key);
    } else if (key == "bandwidth") {
      c.bandwidth = parse_double(value, key);
    } else if (key == "out") {
      c.out = std::string(value);
    } else if (key == "n") {
      c.n = parse_int<long>(value, key);
    } else {
      throw std::invalid_argument("unknown configuration key '" + key + "'");
    }
  }
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::invalid_argument("cannot open configuration file '" + path +
                                "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "alpha=" << format_double(c.alpha) << '\n';
  out << "kappa=" << format_double(c.kappa) << '\n';
  out << "chi=" << format_double(c.chi) << '\n';
  if (c.beta) out << "beta=" << format_double(*c.beta) << '\n';
  out << "level=" << format_double(c.level) << '\n';
  out << "paths=" << c.paths << '\n';
  out << "steps=" << c.steps << '\n';
  out << "horizon=" << format_double(c.horizon) << '\n';
  if (c.seed) out << "seed=" << *c.seed << '\n';
  out << "threads=" << c.threads << '\n';
  out << "suite=" << c.suite << '\n';
  out << "pv_epsilon=" << format_double(c.pv_epsilon) << '\n';
  out << "bandwidth=" << format_double(c.bandwidth) << '\n';
  if (!c.out.empty()) out << "out=" << c.out << '\n';
  out << "n=" << c.n << '\n';
  return out.str();
}

std::uint64_t resolve_seed(const RunConfig& c) {
  if (c.seed) return *c.seed;
  if (const char* env = std::getenv("PERSISTENCE_LAB_SEED")) {
    const std::string_view value{env};
    std::uint64_t seed = 0;
    const auto [ptr, ec] =
        std::from_chars(value.data(), value.data() + value.size(), seed);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
      throw std::invalid_argument(
          "PERSISTENCE_LAB_SEED is not an unsigned integer");
    }
    return seed;
  }
  return 1;
}

MonteCarloConfig to_monte_carlo(const RunConfig& c) {
  StableParams params(c.alpha, c.kappa, c.chi);
  MonteCarloConfig mc{params, {}, c.level, c.paths, c.steps, c.horizon,
                      resolve_seed(c), {}};
  if (c.beta) {
    const double eps =
        c.pv_epsilon >= 0.0
            ? c.pv_epsilon
            : (*c.beta <= -1.0
                   ? default_pv_epsilon(params, c.horizon, c.steps)
                   : 0.0);
    mc.functional = FunctionalParams(params, *c.beta, eps);
  }
  mc.validate();
  return mc;
}

XiBatchConfig to_xi_config(const RunConfig& c,
                           std::optional<double> beta_override) {
  StableParams params(c.alpha, c.kappa, c.chi);
  XiBatchConfig xc{params,
                   beta_override ? *beta_override : c.beta.value_or(1.0),
                   c.level,
                   c.level,
                   c.paths,
                   c.steps,
                   c.horizon,
                   resolve_seed(c),
                   c.bandwidth,
                   c.pv_epsilon};
  return xc;
}

}  // namespace plab
