#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crossdiff/report.hpp"

namespace crossdiff {

/// Process exit codes.
enum ExitCode : int { kExitOk = 0, kExitInput = 1, kExitInconclusive = 2, kExitSolver = 3 };

struct RunOptions {
  int grid = 64;
  double tol = tol::newton;
  int sigma_steps = 10;
  bool no_homotopy = false;
  bool picard = false;
  bool relaxation = false;
  std::optional<int> seed_mode;
  double amp = 0.1;
  std::optional<Vector> seed_constant;
  std::optional<unsigned long long> seed_random;
  std::optional<double> radius;
  bool timings = false;
  int structure_samples = 256;
};

struct RunOutput {
  ojson report;
  int exit_code = kExitOk;
  std::string summary;  ///< verdict lines for standard output
  std::string csv;      ///< field CSV (solve) or row table (sweep)
};

/// Caps OpenMP threads from CROSSDIFF_THREADS when set.
void apply_thread_cap();

/// validate_structure -> find_constant_states -> stability/indices -> verdict.
RunOutput run_analyze(const Model& model, const RunOptions& opts);

/// Seeds, solves (continuation, direct Newton, or pseudo-transient from a mode seed)
/// and diagnoses one field.
RunOutput run_solve(const Model& model, const RunOptions& opts);

/// Copy of `model` with one parameter replaced. Paths are 1-based:
/// d.I, alpha.I.J, r.I, c.I.J, domain.length.K.
Model with_parameter(const Model& model, const std::string& path, double value);

struct SweepSpec {
  std::string param;
  std::vector<double> values;
  bool solve = false;
};

/// Independent runs per value, aggregated in input order.
RunOutput run_sweep(const Model& model, const SweepSpec& spec, const RunOptions& opts);

}  // namespace crossdiff
