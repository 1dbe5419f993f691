// Copyright 2026 The kaneq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Run configuration in a flat `key = value` format.
//
//   # y-polarized carrier, field along theta = 0
//   init     = y
//   theta    = 0
//   kappa    = 0.05
//   gamma_d  = 0.5
//   tau_max  = 20
//
// Keys: scenario, init, theta, kappa | omega, epsilon | gamma_d,
// kappa_convention (text | caption), tau_max, dtau, method (rk4 | exact |
// oracle), output, emit_plot. A scenario id excludes every physics key.

#pragma once

#include <charconv>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kaneq/dynamics.hpp"
#include "kaneq/experiments.hpp"

namespace kaneq {

inline constexpr double kDefaultDtau = 1e-3;
inline constexpr double kDefaultGammaD = 0.5;

/// Malformed or contradictory configuration. Carries the offending line
/// (1-based, 0 when not tied to a line) and key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& msg, int line = 0, std::string key = {})
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line),
        key_(std::move(key)) {}
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::optional<double> parse_plain_double(std::string_view s) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace detail

/// Parses a real number. Also accepts `pi`, `pi/N` and `M*pi/N` so that
/// angles can be written exactly.
inline std::optional<double> parse_real(std::string_view text) {
  const std::string_view s = detail::trim(text);
  if (auto v = detail::parse_plain_double(s)) return v;

  const auto pi_pos = s.find("pi");
  if (pi_pos == std::string_view::npos) return std::nullopt;
  double num = 1.0;
  double den = 1.0;
  const std::string_view head = detail::trim(s.substr(0, pi_pos));
  const std::string_view tail = detail::trim(s.substr(pi_pos + 2));
  if (!head.empty()) {
    if (head.back() != '*') return std::nullopt;
    const auto v = detail::parse_plain_double(detail::trim(head.substr(0, head.size() - 1)));
    if (!v) return std::nullopt;
    num = *v;
  }
  if (!tail.empty()) {
    if (tail.front() != '/') return std::nullopt;
    const auto v = detail::parse_plain_double(detail::trim(tail.substr(1)));
    if (!v || *v == 0.0) return std::nullopt;
    den = *v;
  }
  return num * std::numbers::pi / den;
}

/// Comma-separated list of reals (see parse_real).
inline std::optional<std::vector<double>> parse_real_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    const auto v = parse_real(piece);
    if (!v) return std::nullopt;
    out.push_back(*v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) return std::nullopt;
  return out;
}

struct ExplicitRun {
  InitialState initial;
  ModelParams params;
  double tau_max{0.0};
  double dtau{kDefaultDtau};
};

struct RunConfig {
  std::optional<std::string> scenario;
  std::optional<ExplicitRun> explicit_run;
  Method method{Method::kRk4};
  std::string output;
  bool emit_plot{false};
};

inline RunConfig parse_config(std::string_view text) {
  static const std::set<std::string, std::less<>> kKnown = {
      "scenario", "init",    "theta",  "kappa",  "omega",     "epsilon",  "gamma_d",
      "kappa_convention", "tau_max", "dtau", "method", "output", "emit_plot"};
  static const std::set<std::string, std::less<>> kPhysics = {
      "init", "theta", "kappa", "omega", "epsilon", "gamma_d", "kappa_convention", "tau_max", "dtau"};

  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry, std::less<>> kv;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("missing key", line_no);
    if (!kKnown.count(key)) throw ConfigError("unknown key '" + key + "'", line_no, key);
    if (kv.count(key)) {
      throw ConfigError("duplicate key '" + key + "' (first set on line " +
                            std::to_string(kv[key].line) + ")",
                        line_no, key);
    }
    if (value.empty()) throw ConfigError("empty value for '" + key + "'", line_no, key);
    kv.emplace(key, Entry{value, line_no});
  }

  auto number = [&](const std::string& key) -> std::optional<double> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    const auto v = parse_real(it->second.value);
    if (!v || !std::isfinite(*v)) {
      throw ConfigError("malformed number '" + it->second.value + "' for key '" + key + "'",
                        it->second.line, key);
    }
    return v;
  };
  auto line_of = [&](const std::string& key) { return kv.count(key) ? kv.at(key).line : 0; };

  RunConfig cfg;
  if (const auto it = kv.find("method"); it != kv.end()) {
    try {
      cfg.method = parse_method(it->second.value);
    } catch (const DomainError& e) {
      throw ConfigError(e.what(), it->second.line, "method");
    }
  }
  if (const auto it = kv.find("output"); it != kv.end()) cfg.output = it->second.value;
  if (const auto it = kv.find("emit_plot"); it != kv.end()) {
    if (it->second.value == "true" || it->second.value == "1") cfg.emit_plot = true;
    else if (it->second.value == "false" || it->second.value == "0") cfg.emit_plot = false;
    else throw ConfigError("emit_plot must be true or false", it->second.line, "emit_plot");
  }

  if (const auto it = kv.find("scenario"); it != kv.end()) {
    for (const auto& [key, entry] : kv) {
      if (kPhysics.count(key)) {
        throw ConfigError("'" + key + "' conflicts with 'scenario'; use one or the other",
                          entry.line, key);
      }
    }
    try {
      (void)figure_scenario(it->second.value);
    } catch (const DomainError& e) {
      throw ConfigError(e.what(), it->second.line, "scenario");
    }
    cfg.scenario = it->second.value;
    return cfg;
  }

  if (!kv.count("init")) throw ConfigError("missing 'init' (or a 'scenario')");
  if (kv.count("kappa") && kv.count("omega")) {
    throw ConfigError("'kappa' and 'omega' are mutually exclusive", line_of("omega"), "omega");
  }
  if (!kv.count("kappa") && !kv.count("omega")) throw ConfigError("missing 'kappa' or 'omega'");
  if (kv.count("epsilon") && kv.count("gamma_d")) {
    throw ConfigError("'epsilon' and 'gamma_d' are mutually exclusive", line_of("gamma_d"),
                      "gamma_d");
  }

  ExplicitRun run;
  try {
    run.initial = parse_initial_state(kv.at("init").value);
  } catch (const DomainError& e) {
    throw ConfigError(e.what(), line_of("init"), "init");
  }

  KappaConvention conv = KappaConvention::kText;
  if (const auto it = kv.find("kappa_convention"); it != kv.end()) {
    if (it->second.value == "text") conv = KappaConvention::kText;
    else if (it->second.value == "caption") conv = KappaConvention::kCaption;
    else throw ConfigError("kappa_convention must be text or caption", it->second.line, "kappa_convention");
  }

  const double theta = number("theta").value_or(0.0);
  const auto kappa = number("kappa");
  const auto omega = number("omega");
  const auto epsilon = number("epsilon");
  const auto gamma = number("gamma_d");

  if (kappa) {
    const double eps = epsilon ? *epsilon : 0.5 * gamma.value_or(kDefaultGammaD);
    run.params = ModelParams::from_raw(theta, RawParams{*kappa, eps, conv});
  } else {
    run.params.theta = theta;
    run.params.omega = *omega;
    run.params.gamma_d = epsilon ? gamma_from_epsilon(*epsilon) : gamma.value_or(kDefaultGammaD);
  }
  try {
    run.params.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }

  run.dtau = number("dtau").value_or(kDefaultDtau);
  if (const auto t = number("tau_max")) {
    run.tau_max = *t;
  } else if (run.params.gamma_d > 0.0) {
    run.tau_max = 10.0 / run.params.gamma_d;
  } else {
    throw ConfigError("missing 'tau_max' (required when gamma_d = 0)");
  }
  if (!(run.tau_max > 0.0)) throw ConfigError("tau_max must be > 0", line_of("tau_max"), "tau_max");
  if (!(run.dtau > 0.0) || run.dtau > run.tau_max) {
    throw ConfigError("dtau must satisfy 0 < dtau <= tau_max", line_of("dtau"), "dtau");
  }

  cfg.explicit_run = run;
  return cfg;
}

}  // namespace kaneq
