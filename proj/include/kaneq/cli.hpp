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

// Command-line front end. Exit codes: 0 success, 1 domain or I/O error,
// 2 usage error.

#pragma once

#include <CLI11.hpp>

#include <filesystem>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "kaneq/config.hpp"
#include "kaneq/csv.hpp"
#include "kaneq/dynamics.hpp"
#include "kaneq/experiments.hpp"
#include "kaneq/observables.hpp"
#include "kaneq/selftest.hpp"
#include "kaneq/svg.hpp"

namespace kaneq {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace cli {

struct NamedSeries {
  std::string label;
  ObservableSeries series;
};

/// out.csv -> out_<index>.csv
inline std::string indexed_path(const std::string& path, std::size_t index) {
  const std::filesystem::path p(path);
  std::filesystem::path name = p.stem();
  name += "_" + std::to_string(index);
  name += p.extension();
  return (p.parent_path() / name).string();
}

inline std::string svg_sibling(const std::string& path) {
  std::filesystem::path p(path);
  p.replace_extension(".svg");
  return p.string();
}

inline void emit_runs(const std::vector<NamedSeries>& runs, const std::string& out_path,
                      const std::string& svg_path,
                      std::vector<std::pair<std::string, std::string>> meta, const std::string& title,
                      std::ostream& out) {
  if (out_path.empty()) {
    if (runs.size() != 1) throw UsageError("--out is required when a run produces several series");
    out << series_csv(runs.front().series);
  } else if (runs.size() == 1) {
    write_csv(runs.front().series, out_path);
    meta.emplace_back("series_0", runs.front().label + " -> " + out_path);
  } else {
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const std::string path = indexed_path(out_path, i);
      write_csv(runs[i].series, path);
      meta.emplace_back("series_" + std::to_string(i), runs[i].label + " -> " + path);
    }
  }
  if (!svg_path.empty()) {
    std::vector<LabeledSeries> curves;
    for (const auto& r : runs) curves.push_back({runs.size() == 1 ? std::string{} : r.label, &r.series});
    SvgOptions opt;
    opt.title = title;
    emit_svg(curves, svg_path, opt);
  }
  if (!out_path.empty()) write_metadata(meta, out_path + ".meta");
}

inline std::vector<NamedSeries> run_preset(const ScenarioSpec& spec) {
  std::vector<NamedSeries> out;
  for (ScenarioRun& run : run_scenario(spec)) {
    out.push_back({grid_label(run.kappa, run.theta), std::move(run.observables)});
  }
  return out;
}

inline std::vector<std::pair<std::string, std::string>> explicit_metadata(const ExplicitRun& run,
                                                                         Method method) {
  std::vector<std::pair<std::string, std::string>> meta = {
      {"init", run.initial.label},
      {"theta", format_number(run.params.theta)},
      {"omega", format_number(run.params.omega)},
      {"gamma_d", format_number(run.params.gamma_d)},
      {"tau_max", format_number(run.tau_max)},
      {"dtau", format_number(run.dtau)},
      {"method", std::string(to_string(method))},
      {"abrupt_threshold", "1/gamma_d"},
  };
  if (run.params.raw) {
    meta.emplace_back("kappa", format_number(run.params.raw->kappa));
    meta.emplace_back("epsilon", format_number(run.params.raw->epsilon));
    meta.emplace_back("kappa_convention", run.params.raw->convention == KappaConvention::kText
                                              ? "text (omega = kappa / 2)"
                                              : "caption (omega = kappa)");
  }
  return meta;
}

inline int run_config(const RunConfig& cfg, std::string out_path, std::string svg_path,
                      std::ostream& out) {
  if (out_path.empty()) out_path = cfg.output;
  if (svg_path.empty() && cfg.emit_plot) {
    if (out_path.empty()) throw UsageError("emit_plot requires an output path");
    svg_path = svg_sibling(out_path);
  }
  if (cfg.scenario) {
    ScenarioSpec spec = figure_scenario(*cfg.scenario);
    spec.method = cfg.method;
    emit_runs(run_preset(spec), out_path, svg_path, scenario_metadata(spec), "scenario " + spec.id,
              out);
    return kExitOk;
  }
  const ExplicitRun& run = *cfg.explicit_run;
  const Trajectory traj = integrate(run.params, run.initial.s, run.tau_max, run.dtau, cfg.method);
  std::vector<NamedSeries> runs;
  runs.push_back({"init=" + run.initial.label, series(traj)});
  emit_runs(runs, out_path, svg_path, explicit_metadata(run, cfg.method), "simulate", out);
  return kExitOk;
}

}  // namespace cli

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"kaneq: driven, dephased qubit simulator", "kaneq"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run one configuration (config file, preset or flags)");
  std::string config_path, scenario, init, theta, kappa, omega, epsilon, gamma_d, convention, tau_max,
      dtau, method, out_path, svg_path;
  auto* o_config = simulate->add_option("--config", config_path, "key = value config file");
  auto* o_scenario = simulate->add_option("--scenario", scenario, "figure preset id");
  std::vector<CLI::Option*> physics = {
      simulate->add_option("--init", init, "x, y, z or sx,sy,sz"),
      simulate->add_option("--theta", theta, "polarization angle (accepts pi/4 etc.)"),
      simulate->add_option("--kappa", kappa, "field ratio kappa"),
      simulate->add_option("--omega", omega, "drive rate"),
      simulate->add_option("--epsilon", epsilon, "raw noise strength"),
      simulate->add_option("--gamma-d", gamma_d, "dephasing rate"),
      simulate->add_option("--kappa-convention", convention, "text | caption"),
      simulate->add_option("--tau-max", tau_max, "final scaled time"),
      simulate->add_option("--dtau", dtau, "step size"),
  };
  auto* o_method = simulate->add_option("--method", method, "rk4 | exact | oracle");
  simulate->add_option("--out", out_path, "CSV output path (stdout if omitted)");
  simulate->add_option("--svg", svg_path, "SVG plot path");
  o_config->excludes(o_scenario)->excludes(o_method);
  for (auto* o : physics) {
    o_config->excludes(o);
    o_scenario->excludes(o);
  }

  // figure
  auto* figure = app.add_subcommand("figure", "Run a figure preset");
  std::string fig_id, fig_out, fig_svg, fig_method = "rk4";
  figure->add_option("--id", fig_id, "preset id")->required();
  figure->add_option("--out", fig_out, "CSV output path (stdout if the preset has one series)");
  figure->add_option("--svg", fig_svg, "SVG plot path");
  figure->add_option("--method", fig_method, "rk4 | exact | oracle");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Cartesian sweep over theta and kappa");
  std::string sw_init = "y", sw_thetas, sw_kappas, sw_gamma, sw_tau, sw_dtau, sw_method = "rk4",
              sw_tracked = "purity", sw_out, sw_svg;
  sweep_cmd->add_option("--init", sw_init, "x, y, z or sx,sy,sz");
  sweep_cmd->add_option("--theta-list", sw_thetas, "comma-separated angles")->required();
  sweep_cmd->add_option("--kappa-list", sw_kappas, "comma-separated kappa values")->required();
  sweep_cmd->add_option("--gamma-d", sw_gamma, "dephasing rate (default: calibrated preset value)");
  sweep_cmd->add_option("--tau-max", sw_tau, "final scaled time (default 10/gamma_d)");
  sweep_cmd->add_option("--dtau", sw_dtau, "step size");
  sweep_cmd->add_option("--method", sw_method, "rk4 | exact | oracle");
  sweep_cmd->add_option("--tracked", sw_tracked, "purity | bloch_norm | fidelity");
  sweep_cmd->add_option("--out", sw_out, "summary CSV path (stdout if omitted)");
  sweep_cmd->add_option("--svg", sw_svg, "SVG plot path");

  // validate
  auto* validate = app.add_subcommand("validate", "Check a series CSV against observable invariants");
  std::string val_path;
  validate->add_option("csv", val_path, "series CSV")->required();

  auto* selftest = app.add_subcommand("selftest", "Run the analytic-oracle checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  // Bad flag values are usage errors, not domain errors.
  auto flag = [](auto parse, const std::string& name, const std::string& value) {
    try {
      return parse(value);
    } catch (const DomainError& e) {
      throw UsageError(name + ": " + e.what());
    }
  };
  auto method_flag = [&](const std::string& v) {
    return flag([](const std::string& t) { return parse_method(t); }, "--method", v);
  };

  try {
    if (simulate->parsed()) {
      RunConfig cfg;
      if (!config_path.empty()) {
        cfg = parse_config(detail::read_file(config_path));
      } else {
        std::string text;
        auto line = [&](const char* key, const std::string& v) {
          if (!v.empty()) text += std::string(key) + " = " + v + "\n";
        };
        line("scenario", scenario);
        line("init", init);
        line("theta", theta);
        line("kappa", kappa);
        line("omega", omega);
        line("epsilon", epsilon);
        line("gamma_d", gamma_d);
        line("kappa_convention", convention);
        line("tau_max", tau_max);
        line("dtau", dtau);
        line("method", method);
        cfg = parse_config(text);
      }
      return cli::run_config(cfg, out_path, svg_path, out);
    }

    if (figure->parsed()) {
      ScenarioSpec spec = flag([](const std::string& t) { return figure_scenario(t); }, "--id", fig_id);
      spec.method = method_flag(fig_method);
      cli::emit_runs(cli::run_preset(spec), fig_out, fig_svg, scenario_metadata(spec),
                     "figure " + spec.id, out);
      return kExitOk;
    }

    if (sweep_cmd->parsed()) {
      const auto thetas = parse_real_list(sw_thetas);
      const auto kappas = parse_real_list(sw_kappas);
      if (!thetas) throw UsageError("malformed --theta-list '" + sw_thetas + "'");
      if (!kappas) throw UsageError("malformed --kappa-list '" + sw_kappas + "'");
      auto real_flag = [](const std::string& name, const std::string& v, double fallback) {
        if (v.empty()) return fallback;
        const auto parsed = parse_real(v);
        if (!parsed) throw UsageError("malformed " + name + " '" + v + "'");
        return *parsed;
      };
      const double gamma = real_flag("--gamma-d", sw_gamma, kCalibratedGammaD);
      if (sw_tau.empty() && !(gamma > 0.0)) throw UsageError("--tau-max is required when gamma_d = 0");
      const double tmax = real_flag("--tau-max", sw_tau, gamma > 0.0 ? 10.0 / gamma : 0.0);
      SweepOptions opts;
      opts.dtau = real_flag("--dtau", sw_dtau, kPresetDtau);
      opts.method = method_flag(sw_method);
      opts.tracked = flag([](const std::string& t) { return parse_tracked(t); }, "--tracked", sw_tracked);
      const InitialState initial =
          flag([](const std::string& t) { return parse_initial_state(t); }, "--init", sw_init);
      const SweepResult result = sweep(initial, *thetas, *kappas, gamma, tmax, opts);
      if (sw_out.empty()) {
        out << sweep_csv(result);
      } else {
        write_sweep_csv(result, sw_out);
        write_metadata({{"tracked", std::string(to_string(opts.tracked))},
                        {"gamma_d", format_number(gamma)},
                        {"tau_max", format_number(tmax)},
                        {"dtau", format_number(opts.dtau)},
                        {"abrupt_threshold", "1/gamma_d"},
                        {"kappa_convention", "text (omega = kappa / 2)"}},
                       sw_out + ".meta");
      }
      if (!sw_svg.empty()) {
        SvgOptions svg_opt;
        svg_opt.title = "sweep init=" + sw_init;
        emit_svg(result, sw_svg, svg_opt);
      }
      return kExitOk;
    }

    if (validate->parsed()) {
      const CsvValidation v = validate_series_csv(val_path);
      if (v.ok) {
        out << "ok: " << val_path << " (" << v.rows << " rows)\n";
        return kExitOk;
      }
      for (const auto& p : v.problems) err << val_path << ": " << p << "\n";
      return kExitDomain;
    }

    if (selftest->parsed()) {
      bool all = true;
      for (const SelfCheck& c : run_selftest()) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
        all = all && c.passed;
      }
      return all ? kExitOk : kExitDomain;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace kaneq
