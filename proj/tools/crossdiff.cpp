#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "acceptance.hpp"
#include "crossdiff/error.hpp"
#include "crossdiff/pipeline.hpp"

namespace {

using namespace crossdiff;

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse number '" + item + "'");
    }
  }
  return out;
}

struct Common {
  std::string config;
  std::string output;
  std::string csv;
  int grid = 64;
  double tol = tol::newton;
  int sigma_steps = 10;
  bool no_homotopy = false;
  bool picard = false;
  bool relaxation = false;
  int seed_mode = 0;
  double amp = 0.1;
  std::string seed_constant;
  long long seed_random = -1;
  double radius = 0.0;
  bool timings = false;
};

void add_common(CLI::App* cmd, Common& c, bool solve_flags) {
  cmd->add_option("--config", c.config, "model configuration (JSON)")->required();
  cmd->add_option("--output", c.output, "report path (JSON); printed to stdout when omitted");
  cmd->add_flag("--timings", c.timings, "include wall-clock timings in the report");
  if (!solve_flags) return;
  cmd->add_option("--csv", c.csv, "field CSV path (default: report path with .csv)");
  cmd->add_option("--grid", c.grid, "cells per axis");
  cmd->add_option("--tol", c.tol, "relative Newton tolerance");
  cmd->add_option("--sigma-steps", c.sigma_steps, "uniform sigma-homotopy steps");
  cmd->add_flag("--no-homotopy", c.no_homotopy, "direct Newton from the seed");
  cmd->add_flag("--picard", c.picard, "frozen-coefficient fixed-point iteration instead of Newton");
  cmd->add_flag("--relaxation", c.relaxation, "add (sigma - 1) U to the homotopy family");
  cmd->add_option("--seed-mode", c.seed_mode, "seed u* + amp c psi_K from Neumann mode K");
  cmd->add_option("--amp", c.amp, "mode seed amplitude");
  cmd->add_option("--seed-constant", c.seed_constant, "constant seed \"v1,...,vm\"");
  cmd->add_option("--seed-random", c.seed_random, "uniform random seed with this integer seed");
  cmd->add_option("--radius", c.radius, "BMO radius");
}

RunOptions to_options(const Common& c) {
  RunOptions o;
  o.grid = c.grid;
  o.tol = c.tol;
  o.sigma_steps = c.sigma_steps;
  o.no_homotopy = c.no_homotopy;
  o.picard = c.picard;
  o.relaxation = c.relaxation;
  if (c.seed_mode != 0) o.seed_mode = c.seed_mode;
  o.amp = c.amp;
  if (!c.seed_constant.empty()) {
    const std::vector<double> v = parse_list(c.seed_constant);
    o.seed_constant = Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
  if (c.seed_random >= 0) o.seed_random = static_cast<unsigned long long>(c.seed_random);
  if (c.radius > 0.0) o.radius = c.radius;
  o.timings = c.timings;
  return o;
}

std::string csv_path(const Common& c) {
  if (!c.csv.empty()) return c.csv;
  if (c.output.empty()) return "";
  const auto dot = c.output.rfind('.');
  const auto slash = c.output.rfind('/');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? c.output.substr(0, dot) : c.output) + ".csv";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
}

int emit(const RunOutput& out, const Common& c, bool with_csv) {
  const std::string report = out.report.dump(2) + "\n";
  if (c.output.empty()) {
    std::cout << report;
  } else {
    write_file(c.output, report);
    std::cout << out.summary;
  }
  if (with_csv) {
    const std::string path = csv_path(c);
    if (!path.empty()) write_file(path, out.csv);
  }
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap();
  CLI::App app{"Steady states of cross-diffusion systems: index analysis and solver"};
  app.require_subcommand(1);

  Common analyze_c, solve_c, sweep_c;
  auto* analyze = app.add_subcommand("analyze", "constant states, indices and existence verdict");
  add_common(analyze, analyze_c, false);
  auto* solve = app.add_subcommand("solve", "solve the steady-state system on a grid");
  add_common(solve, solve_c, true);
  auto* sweep = app.add_subcommand("sweep", "vary one parameter and tabulate verdicts");
  add_common(sweep, sweep_c, true);
  SweepSpec spec;
  std::string values, range;
  sweep->add_option("--param", spec.param, "parameter path: d.I, alpha.I.J, r.I, c.I.J, domain.length.K")->required();
  sweep->add_option("--values", values, "comma-separated values");
  sweep->add_option("--range", range, "from,to,count");
  sweep->add_flag("--solve", spec.solve, "also solve each model");
  auto* selftest = app.add_subcommand("selftest", "run the built-in acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*selftest) return acceptance::run_all(std::cout) == 0 ? kExitOk : kExitSolver;
    if (*analyze) return emit(run_analyze(load_model(analyze_c.config), to_options(analyze_c)), analyze_c, false);
    if (*solve) return emit(run_solve(load_model(solve_c.config), to_options(solve_c)), solve_c, true);
    if (*sweep) {
      if (!values.empty()) spec.values = parse_list(values);
      if (!range.empty()) {
        const std::vector<double> r = parse_list(range);
        if (r.size() != 3 || r[2] < 1) throw ConfigError("--range needs from,to,count");
        const int n = static_cast<int>(r[2]);
        for (int i = 0; i < n; ++i) spec.values.push_back(n == 1 ? r[0] : r[0] + (r[1] - r[0]) * i / (n - 1));
      }
      return emit(run_sweep(load_model(sweep_c.config), spec, to_options(sweep_c)), sweep_c, true);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}
