// Copyright 2026 The wmplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wmp/errors.hpp"
#include "wmp/real.hpp"

namespace wmp::cli {

/// Run configuration. Real-valued settings are kept as decimal text so the
/// file round-trips exactly and the map is built from the literal.
struct RunConfig {
  std::string alpha = "2";
  std::string a = "0.975";
  int precision_bits = 256;
  int orbit_horizon = 10000;
  int entry_horizon = 1000;
  int niceness_horizon = 1000;
  int max_time = 1000;
  std::string min_width = "1e-8";
  std::string rho = "0.1";
  std::string delta_min = "1e-3";
  std::string coverage_min = "0.99";
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  int candidate_depth = 12;
  int refine_depth = 48;
  int prop35_components = 50;
  int cor36_grid = 16;
  int markov_samples = 1000;
  int markov_windows = 5;
  int density_samples = 10000;
  std::string density_halfwidth = "0.05";
  int report_digits = 30;
  unsigned threads = 1;

  bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_integer(const std::string& key, const std::string& text) {
  T v{};
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw ConfigError(key + ": not an integer: '" + text + "'");
  }
  return v;
}

inline std::string parse_decimal(const std::string& key, const std::string& text) {
  try {
    Real probe(text, 64);
    if (!probe.is_finite()) throw DomainError("not finite");
  } catch (const Error&) {
    throw ConfigError(key + ": not a decimal number: '" + text + "'");
  }
  return text;
}

struct Key {
  const char* name;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
  /// Excluded from the report echo: output location and scheduling.
  bool run_local = false;
};

template <class T>
Key int_key(const char* name, T RunConfig::*field, bool local = false) {
  return {name, [field](const RunConfig& c) { return std::to_string(c.*field); },
          [field, name](RunConfig& c, const std::string& v) { c.*field = parse_integer<T>(name, v); },
          local};
}

inline Key text_key(const char* name, std::string RunConfig::*field, bool decimal,
                    bool local = false) {
  return {name, [field](const RunConfig& c) { return c.*field; },
          [field, name, decimal](RunConfig& c, const std::string& v) {
            c.*field = decimal ? parse_decimal(name, v) : v;
          },
          local};
}

}  // namespace detail

/// Config keys in file order.
inline const std::vector<detail::Key>& config_keys() {
  using detail::int_key;
  using detail::text_key;
  static const std::vector<detail::Key> keys = {
      text_key("family.alpha", &RunConfig::alpha, true),
      text_key("family.a", &RunConfig::a, true),
      int_key("precision.bits", &RunConfig::precision_bits),
      int_key("horizons.orbit", &RunConfig::orbit_horizon),
      int_key("horizons.entry", &RunConfig::entry_horizon),
      int_key("horizons.niceness", &RunConfig::niceness_horizon),
      int_key("enumeration.max_time", &RunConfig::max_time),
      text_key("enumeration.min_width", &RunConfig::min_width, true),
      text_key("thresholds.rho", &RunConfig::rho, true),
      text_key("thresholds.delta_min", &RunConfig::delta_min, true),
      text_key("thresholds.coverage_min", &RunConfig::coverage_min, true),
      int_key("seed", &RunConfig::seed),
      text_key("output.dir", &RunConfig::output_dir, false, true),
      int_key("anchors.candidate_depth", &RunConfig::candidate_depth),
      int_key("anchors.refine_depth", &RunConfig::refine_depth),
      int_key("geometry.prop35_components", &RunConfig::prop35_components),
      int_key("geometry.cor36_grid", &RunConfig::cor36_grid),
      int_key("markov.samples", &RunConfig::markov_samples),
      int_key("markov.windows", &RunConfig::markov_windows),
      int_key("density.samples", &RunConfig::density_samples),
      text_key("density.reference_halfwidth", &RunConfig::density_halfwidth, true),
      int_key("report.digits", &RunConfig::report_digits),
      int_key("parallel.threads", &RunConfig::threads, true),
  };
  return keys;
}

inline const detail::Key& config_key(const std::string& name) {
  for (const auto& k : config_keys()) {
    if (name == k.name) return k;
  }
  throw ConfigError("unknown config key '" + name + "'");
}

inline void set_key(RunConfig& cfg, const std::string& name, const std::string& value) {
  config_key(name).set(cfg, detail::trim(value));
}

/// Throws ConfigError on any out-of-range setting.
inline void validate(const RunConfig& c) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  auto dec = [](const std::string& s) { return Real(s, 128); };
  require(dec(c.alpha) >= 2, "family.alpha must be >= 2");
  require(dec(c.a) > 0 && dec(c.a) <= 1, "family.a must lie in (0, 1]");
  require(c.precision_bits >= 64, "precision.bits must be >= 64");
  require(c.orbit_horizon >= 1, "horizons.orbit must be positive");
  require(c.entry_horizon >= 1, "horizons.entry must be positive");
  require(c.niceness_horizon >= 1, "horizons.niceness must be positive");
  require(c.max_time >= 1, "enumeration.max_time must be positive");
  require(dec(c.min_width) > 0, "enumeration.min_width must be positive");
  require(dec(c.rho) > 0, "thresholds.rho must be positive");
  require(dec(c.delta_min) > 0, "thresholds.delta_min must be positive");
  require(dec(c.coverage_min) > 0 && dec(c.coverage_min) <= 1,
          "thresholds.coverage_min must lie in (0, 1]");
  require(!c.output_dir.empty(), "output.dir must not be empty");
  require(c.candidate_depth >= 0, "anchors.candidate_depth must be non-negative");
  require(c.refine_depth >= 0, "anchors.refine_depth must be non-negative");
  require(c.prop35_components >= 1, "geometry.prop35_components must be positive");
  require(c.cor36_grid >= 2, "geometry.cor36_grid must be >= 2");
  require(c.markov_samples >= 1, "markov.samples must be positive");
  require(c.markov_windows >= 1, "markov.windows must be positive");
  require(c.density_samples >= 1, "density.samples must be positive");
  require(dec(c.density_halfwidth) > 0, "density.reference_halfwidth must be positive");
  require(c.report_digits >= 6 && c.report_digits <= 1000, "report.digits must lie in [6, 1000]");
  require(c.threads >= 1, "parallel.threads must be positive");
}

/// Flat key=value text; '#' starts a comment. Unknown or repeated keys are
/// errors.
inline RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::set<std::string> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = detail::trim(line.substr(0, eq));
    if (!seen.insert(key).second) throw ConfigError("duplicate config key '" + key + "'");
    set_key(cfg, key, line.substr(eq + 1));
  }
  validate(cfg);
  return cfg;
}

inline std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& k : config_keys()) out += std::string(k.name) + "=" + k.get(cfg) + "\n";
  return out;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

/// Applies LAB_PRECISION_BITS when set.
inline void apply_environment(RunConfig& cfg) {
  if (const char* bits = std::getenv("LAB_PRECISION_BITS"); bits != nullptr && *bits != '\0') {
    set_key(cfg, "precision.bits", bits);
    validate(cfg);
  }
}

}  // namespace wmp::cli
