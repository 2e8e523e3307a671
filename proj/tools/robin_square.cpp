// robin_square: spectra, crossings, nodal counts and verdicts for the Robin
// Laplacian on the square. Data goes to stdout (or --out), diagnostics to
// stderr.
//
// Exit codes:
//   0 success            4 Unresolved            7 CountMismatch, CapViolation,
//   1 other failure      5 RegimeError              InconsistentTheta
//   2 configuration      6 NonConvergence        8 an acceptance criterion failed
//   3 CutoffTooSmall, ScanTooCoarse

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "robin/acceptance.hpp"
#include "robin/contour.hpp"
#include "robin/errors.hpp"
#include "robin/nodal_analysis.hpp"
#include "robin/report.hpp"
#include "robin/square_spectrum.hpp"

using namespace robin;
using robin::cli::RunConfig;

namespace {

constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCutoff = 3;
constexpr int kExitUnresolved = 4;
constexpr int kExitRegime = 5;
constexpr int kExitNonConvergence = 6;
constexpr int kExitConsistency = 7;
constexpr int kExitAcceptance = 8;

const std::map<std::string, std::string> kFlagHelp = {
    {"h", "Robin parameter h < 0"},
    {"h-min", "Lower end of the h range (crossings)"},
    {"h-max", "Upper end of the h range, < 0 (crossings)"},
    {"pair", "Slot pair p,q (repeatable)"},
    {"k", "Number of eigenvalue labels"},
    {"theta", "Eigenspace angle in radians, or pi/4, pi/2, 3pi/4"},
    {"theta-samples", "Uniform theta samples (sweep-theta, verdict)"},
    {"resolution", "Grid resolution, a power of two >= 256"},
    {"out", "Write the CSV here instead of stdout"},
    {"svg", "Also write an SVG plot (nodal, crossings)"},
    {"tol-root", "Relative tolerance of the interval root solvers"},
    {"seed", "Seed for randomised property samples (accept)"},
};

struct FlagStore {
  std::map<std::string, std::vector<std::string>> values;
  std::map<std::string, std::map<std::string, CLI::Option*>> options;  // command -> key
  std::map<std::string, CLI::Option*> config_option;
  std::string config_path;
};

void add_flags(CLI::App* sub, FlagStore& store) {
  for (const auto& key : cli::config_keys()) {
    auto* opt = sub->add_option("--" + key, store.values[key], kFlagHelp.at(key));
    if (key != "pair") opt->expected(1)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    store.options[sub->get_name()][key] = opt;
  }
  store.config_option[sub->get_name()] =
      sub->add_option("--config", store.config_path, "key=value file (flags take precedence)");
}

RunConfig build_config(const std::string& command, FlagStore& store) {
  RunConfig cfg;
  cfg.command = command;
  if (store.config_option.at(command)->count() > 0) {
    for (const auto& [key, value] : cli::load_config_file(store.config_path)) {
      if (key == "pair" && store.options.at(command).at("pair")->count() > 0) continue;
      cli::apply_setting(cfg, key, value);
    }
  }
  for (const auto& [key, opt] : store.options.at(command)) {
    if (opt->count() == 0) continue;
    if (key == "pair") {
      cfg.pairs.clear();
      for (const auto& v : store.values.at(key)) cli::apply_setting(cfg, key, v);
    } else {
      cli::apply_setting(cfg, key, store.values.at(key).back());
    }
  }
  cli::validate(cfg);
  return cfg;
}

void emit(const RunConfig& cfg, const std::string& data) {
  if (cfg.out.empty()) {
    std::cout << data << std::flush;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f || !(f << data)) throw std::runtime_error("cannot write '" + cfg.out + "'");
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << data)) throw std::runtime_error("cannot write '" + path + "'");
}

int cmd_spectrum(const RunConfig& cfg) {
  const auto entries = enumerate_spectrum(RobinParam(cfg.h), cfg.k);
  std::ostringstream os;
  report::write_spectrum_csv(os, entries, cfg.k);
  emit(cfg, os.str());
  return 0;
}

int cmd_crossings(const RunConfig& cfg) {
  std::vector<CrossingRecord> rows;
  for (std::size_t i = 0; i < cfg.pairs.size(); ++i) {
    for (std::size_t j = i + 1; j < cfg.pairs.size(); ++j) {
      const auto rec = find_crossings(cfg.pairs[i], cfg.pairs[j], cfg.h_min, cfg.h_max);
      rows.insert(rows.end(), rec.begin(), rec.end());
    }
  }
  std::ostringstream os;
  report::write_crossings_csv(os, rows);
  emit(cfg, os.str());
  if (!cfg.svg.empty()) {
    std::ostringstream svg;
    report::write_eigencurve_svg(
        svg, report::sample_eigencurves(cfg.pairs, cfg.h_min, cfg.h_max, 400), rows);
    write_file(cfg.svg, svg.str());
  }
  return 0;
}

std::vector<Point2> critical_points(const EigenfunctionSpec& spec) {
  std::vector<Point2> out;
  const PairIndex p = spec.pair;
  if (p.p != 0 || p.q < 4 || p.q % 2 != 0) return out;
  if (!(pair_value(p, RobinParam(spec.h)) < 0.0)) return out;
  for (const auto& [x, y] : critical_thetas(p.q, RobinParam(spec.h)).points_at(spec.theta)) {
    out.push_back({x, y});
  }
  return out;
}

int cmd_nodal(const RunConfig& cfg) {
  const PairIndex pr = cfg.pairs.front();
  const auto spec = EigenfunctionSpec::make(pr.p, pr.q, RobinParam(cfg.h), cfg.theta);
  NodalOptions opts;
  if (cfg.resolution) opts.resolution = cfg.resolution;
  const NodalReport rep = count_nodal_domains(spec, opts);
  std::ostringstream os;
  report::write_nodal_csv(os, {rep});
  emit(cfg, os.str());
  if (!cfg.svg.empty()) {
    std::ostringstream svg;
    report::write_nodal_svg(svg, nodal_polylines(spec, opts.resolution), critical_points(spec),
                            "Phi " + to_string(pr) + " h=" + report::format_number(cfg.h) +
                                " theta=" + report::format_number(spec.theta));
    write_file(cfg.svg, svg.str());
  }
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  const PairIndex pr = cfg.pairs.front();
  const RobinParam h(cfg.h);
  NodalOptions opts;
  opts.resolution = cfg.resolution ? cfg.resolution : 512;
  const auto samples =
      sweep_theta(pr, h, theta_grid(pr, h, cfg.theta_samples ? cfg.theta_samples : 90), opts);
  std::vector<NodalReport> rows;
  int unresolved = 0;
  for (const auto& s : samples) {
    if (s.resolved) {
      rows.push_back(s.report);
    } else {
      ++unresolved;
      std::cerr << "theta " << report::format_number(s.theta) << ": " << s.error << '\n';
    }
  }
  std::ostringstream os;
  report::write_nodal_csv(os, rows);
  emit(cfg, os.str());
  return unresolved ? kExitUnresolved : 0;
}

int cmd_verdict(const RunConfig& cfg) {
  VerdictOptions opts;
  if (cfg.theta_samples) opts.theta_samples = cfg.theta_samples;
  if (cfg.resolution) opts.resolution = cfg.resolution;
  const auto rows = verdict_table(RobinParam(cfg.h), cfg.k, opts);
  std::ostringstream os;
  report::write_verdict_csv(os, rows);
  emit(cfg, os.str());
  return 0;
}

int cmd_accept(const RunConfig& cfg) {
  const auto results = run_acceptance(cfg.seed, std::cout);
  for (const auto& r : results) {
    if (!r.pass) return kExitAcceptance;
  }
  return 0;
}

int run(const RunConfig& cfg) {
  if (cfg.tol_root) set_root_tolerance(*cfg.tol_root);
  if (cfg.command == "spectrum") return cmd_spectrum(cfg);
  if (cfg.command == "crossings") return cmd_crossings(cfg);
  if (cfg.command == "nodal") return cmd_nodal(cfg);
  if (cfg.command == "sweep-theta") return cmd_sweep(cfg);
  if (cfg.command == "verdict") return cmd_verdict(cfg);
  return cmd_accept(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robin Laplacian on the square: spectra, crossings, nodal domains"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  FlagStore store;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"spectrum", "First k eigenvalues with pairs and multiplicities"},
      {"crossings", "Eigencurve crossings between the given pairs on [h-min, h-max]"},
      {"nodal", "Nodal domain count of one eigenfunction"},
      {"sweep-theta", "Nodal domain counts across the eigenspace angle"},
      {"verdict", "Courant-sharpness verdicts for labels 1..k"},
      {"accept", "Run the acceptance criteria"},
  };
  for (const auto& [name, help] : commands) add_flags(app.add_subcommand(name, help), store);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(build_config(command, store));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CutoffTooSmall& e) {
    std::cerr << "cutoff too small: " << e.what() << '\n';
    return kExitCutoff;
  } catch (const ScanTooCoarse& e) {
    std::cerr << "scan too coarse: " << e.what() << '\n';
    return kExitCutoff;
  } catch (const Unresolved& e) {
    std::cerr << "unresolved: " << e.what() << '\n';
    return kExitUnresolved;
  } catch (const RegimeError& e) {
    std::cerr << "regime error: " << e.what() << '\n';
    return kExitRegime;
  } catch (const NonConvergence& e) {
    std::cerr << "no convergence: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const CountMismatch& e) {
    std::cerr << "count mismatch: " << e.what() << '\n';
    return kExitConsistency;
  } catch (const CapViolation& e) {
    std::cerr << "cap violation: " << e.what() << '\n';
    return kExitConsistency;
  } catch (const InconsistentTheta& e) {
    std::cerr << "inconsistent theta: " << e.what() << '\n';
    return kExitConsistency;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
}
