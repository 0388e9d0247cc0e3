#include "crossdiff/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <sstream>

#include <omp.h>

#include "crossdiff/error.hpp"

namespace crossdiff {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Solution box [0, 2 max(1, largest constant-state component)] per component.
void state_box(const Model& model, const SteadyStateSet& states, Vector& lo, Vector& hi) {
  double top = 1.0;
  for (const ConstantState& s : states.states) top = std::max(top, s.u_star.maxCoeff());
  lo = Vector::Zero(model.m());
  hi = Vector::Constant(model.m(), 2.0 * top);
}

struct Analysis {
  IndexAnalysis idx;
  StructureReport structure;
  NonexistenceThreshold threshold;
  ojson json;
  std::vector<std::string> notices;
};

Analysis analyze(const Model& model, const RunOptions& opts, ojson& timings) {
  Analysis a;
  auto t0 = Clock::now();
  a.idx = analyze_indices(model);
  timings["index_analysis_s"] = seconds_since(t0);

  Vector lo, hi;
  state_box(model, a.idx.states, lo, hi);
  t0 = Clock::now();
  a.structure = validate_structure(model, lo, hi, opts.structure_samples, 0);
  a.threshold = nonexistence_threshold(model, lo, hi);
  timings["structure_s"] = seconds_since(t0);

  if (model.bc() != BoundaryCondition::Neumann)
    a.notices.push_back("boundary condition is " + to_string(model.bc()) +
                        ": index analysis skipped, constant states enumerated only");

  const int m = model.m();
  ojson& j = a.json;
  j["structure"] = to_json(a.structure);
  ojson states = ojson::array();
  for (const ConstantState& s : a.idx.states.states) states.push_back(to_json(s, m));
  j["constant_states"] = states;
  ojson deg = ojson::array();
  for (const DegenerateSubset& d : a.idx.states.degenerate) deg.push_back(to_json(d, m));
  j["degenerate_subsets"] = deg;
  ojson stab = ojson::array();
  for (const StabilityVerdict& v : a.idx.stability) stab.push_back(to_json(v, m));
  j["stability"] = stab;
  ojson idx = ojson::array();
  for (const IndexReport& r : a.idx.indices) idx.push_back(to_json(r));
  j["indices"] = idx;
  j["verdict"] = to_json(a.idx.verdict, m);
  ojson thr = to_json(a.threshold);
  thr["lambda_floor"] = a.structure.lambda_floor;
  thr["only_constants"] = a.structure.lambda_floor > a.threshold.threshold;
  j["nonexistence"] = thr;
  j["notices"] = a.notices;
  return a;
}

std::string summary_lines(const ExistenceVerdict& v, const std::vector<std::string>& notices) {
  std::ostringstream os;
  os << "verdict: " << verdict_statement(v) << "\n";
  os << "  case: " << v.case_label << "\n";
  if (v.sum_of_boundary_indices) os << "  boundary index sum: " << *v.sum_of_boundary_indices << "\n";
  if (v.total) os << "  total index: " << *v.total << "\n";
  os << "  predicts nontrivial: " << (v.predicts_nontrivial ? "yes" : "no")
     << ", predicts nonconstant: " << (v.predicts_nonconstant ? "yes" : "no") << "\n";
  for (const std::string& n : notices) os << "  notice: " << n << "\n";
  return os.str();
}

ojson header(const Model& model) {
  ojson j;
  j["schema_version"] = kSchemaVersion;
  j["tool_version"] = kToolVersion;
  j["model"] = model_to_json(model);
  return j;
}

// First nontrivial constant state, if any.
std::optional<Vector> nontrivial_state(const SteadyStateSet& s) {
  for (const ConstantState& c : s.states)
    if (c.classification == StateClass::Nontrivial) return c.u_star;
  return std::nullopt;
}

ModeDecision decide_mode(const Model& model, const Vector& u_star, int k) {
  const ModeSpectrum spec = neumann_eigenvalues(model.domain(), k + 1);
  const ModeEntry& e = spec.entries[static_cast<std::size_t>(k)];
  ModeDecision md;
  md.mode_index = k;
  md.lambda_hat = e.lambda_hat;
  md.M = e.multiplicity;
  md.modes = e.modes;
  const Evaluation ev = model.evaluate(u_star);
  md.A_i = mode_matrix(ev.A, ev.J, e.lambda_hat);
  md.count = negative_count(ev.A.diagonal(), md.A_i);
  return md;
}

}  // namespace

void apply_thread_cap() {
  if (const char* env = std::getenv("CROSSDIFF_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
}

RunOutput run_analyze(const Model& model, const RunOptions& opts) {
  RunOutput out;
  ojson timings;
  const auto t0 = Clock::now();
  Analysis a = analyze(model, opts, timings);
  timings["total_s"] = seconds_since(t0);
  out.report = header(model);
  out.report["command"] = "analyze";
  for (auto& [k, v] : a.json.items()) out.report[k] = v;
  if (opts.timings) out.report["timings"] = timings;
  out.summary = summary_lines(a.idx.verdict, a.notices);
  out.exit_code = a.idx.verdict.inconclusive && model.bc() == BoundaryCondition::Neumann ? kExitInconclusive : kExitOk;
  return out;
}

RunOutput run_solve(const Model& model, const RunOptions& opts) {
  require_production_grid(opts.grid);
  RunOutput out;
  ojson timings;
  const auto t0 = Clock::now();
  Analysis a = analyze(model, opts, timings);
  const Grid grid(model.domain(), opts.grid);
  const int m = model.m();

  SolveOptions so;
  so.tol = opts.tol;
  so.relaxation = opts.relaxation;
  if (opts.picard) so.method = SolveMethod::Picard;

  ojson seed_info;
  std::vector<std::string> seed_warnings;
  std::optional<DiscreteField> seed;
  bool direct = opts.no_homotopy;
  if (opts.seed_mode) {
    const int k = *opts.seed_mode;
    if (k < 1) throw ConfigError("--seed-mode must be at least 1");
    const std::optional<Vector> us = nontrivial_state(a.idx.states);
    if (!us) throw ConfigError("mode seed needs a nontrivial constant state");
    const ModeDecision md = decide_mode(model, *us, k);
    SeedResult sr = seed_from_mode(model, *us, md, opts.amp, grid);
    seed = sr.field;
    seed_warnings = sr.warnings;
    seed_info = ojson{{"kind", "mode"}, {"mode", k}, {"amplitude", opts.amp}, {"lambda_hat", md.lambda_hat},
                      {"N", md.count.N}, {"direction", to_json(sr.direction)}, {"u_star", to_json(*us)}};
    direct = true;
    if (!opts.picard) so.method = SolveMethod::PseudoTransient;
  } else if (opts.seed_constant) {
    if (opts.seed_constant->size() != m) throw ConfigError("--seed-constant needs m values");
    seed = DiscreteField::constant(grid, *opts.seed_constant);
    seed_info = ojson{{"kind", "constant"}, {"value", to_json(*opts.seed_constant)}};
  } else {
    const unsigned long long s = opts.seed_random.value_or(0);
    Vector lo, hi;
    state_box(model, a.idx.states, lo, hi);
    seed = random_field(grid, m, s, 0.0, hi.maxCoeff());
    seed_info = ojson{{"kind", "random"}, {"seed", s}, {"range", ojson::array({0.0, hi.maxCoeff()})}};
  }

  const auto ts = Clock::now();
  SolveResult r = direct ? newton_solve(model, *seed, so)
                         : continuation_solve(model, *seed, uniform_sigma_schedule(opts.sigma_steps), so);
  for (const std::string& w : seed_warnings) r.warnings.push_back(w);
  timings["solve_s"] = seconds_since(ts);

  const double radius =
      opts.radius.value_or(std::max(0.25 * *std::min_element(model.domain().lengths.begin(), model.domain().lengths.end()),
                                    2.0 * std::max(grid.h(0), grid.dimension() == 2 ? grid.h(1) : 0.0)));
  const auto td = Clock::now();
  const DiagnosticsReport diag = diagnose(model, r.field, radius, a.structure.lambda_sup);
  timings["diagnostics_s"] = seconds_since(td);
  timings["total_s"] = seconds_since(t0);

  out.report = header(model);
  out.report["command"] = "solve";
  out.report["grid"] = opts.grid;
  out.report["seed"] = seed_info;
  out.report["verdict"] = a.json["verdict"];
  out.report["structure"] = a.json["structure"];
  out.report["nonexistence"] = a.json["nonexistence"];
  out.report["solve"] = to_json(r);
  out.report["diagnostics"] = to_json(diag);
  if (opts.timings) out.report["timings"] = timings;
  out.csv = field_to_csv(r.field);

  std::ostringstream os;
  os << summary_lines(a.idx.verdict, a.notices);
  os << "solve: " << (r.converged ? "converged" : "not converged") << ", " << to_string(r.classification)
     << ", grad_l2 = " << r.grad_l2 << ", residual = " << r.residual_norm << "\n";
  if (!r.converged) os << "  failure: " << r.message << "\n";
  for (const std::string& w : r.warnings) os << "  warning: " << w << "\n";
  out.summary = os.str();
  out.exit_code = r.converged ? kExitOk : kExitSolver;
  return out;
}

Model with_parameter(const Model& model, const std::string& path, double value) {
  ojson j = model_to_json(model);
  std::vector<std::string> parts;
  std::stringstream ss(path);
  for (std::string p; std::getline(ss, p, '.');) parts.push_back(p);
  auto index = [&](std::size_t k, int bound) {
    if (k >= parts.size()) throw ConfigError("parameter path '" + path + "' is missing an index");
    const int i = std::stoi(parts[k]);
    if (i < 1 || i > bound) throw ConfigError("parameter index out of range in '" + path + "'");
    return static_cast<std::size_t>(i - 1);
  };
  const int m = model.m();
  if (parts.empty()) throw ConfigError("empty parameter path");
  const std::string& head = parts[0];
  if ((head == "d" || head == "r") && parts.size() == 2) {
    j[head][index(1, m)] = value;
  } else if ((head == "alpha" || head == "c") && parts.size() == 3) {
    j[head][index(1, m)][index(2, m)] = value;
  } else if (head == "domain" && parts.size() == 3 && parts[1] == "length") {
    j["domain"]["lengths"][index(2, model.domain().dimension())] = value;
  } else {
    throw ConfigError("unknown parameter path '" + path + "'");
  }
  return build_model(nlohmann::json::parse(j.dump()));
}

RunOutput run_sweep(const Model& model, const SweepSpec& spec, const RunOptions& opts) {
  if (spec.values.empty()) throw ConfigError("sweep needs at least one value");
  if (spec.solve) require_production_grid(opts.grid);
  const int n = static_cast<int>(spec.values.size());
  struct Row {
    std::string text;
    ojson json;
    bool inconclusive = false;
  };
  std::vector<Row> rows(static_cast<std::size_t>(n));
  // Validate every path up front so input errors surface as exit 1.
  for (double v : spec.values) (void)with_parameter(model, spec.param, v);

#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) {
    Row& row = rows[static_cast<std::size_t>(i)];
    const double v = spec.values[static_cast<std::size_t>(i)];
    std::ostringstream os;
    os.precision(17);
    try {
      const Model mi = with_parameter(model, spec.param, v);
      RunOutput ra = run_analyze(mi, opts);
      const ojson& verdict = ra.report["verdict"];
      row.inconclusive = verdict["inconclusive"].get<bool>();
      std::string cls = "", grad = "", res = "";
      row.json = ojson{{"value", v}, {"verdict", verdict["statement"]}, {"case", verdict["case"]},
                       {"predicts_nonconstant", verdict["predicts_nonconstant"]}, {"inconclusive", row.inconclusive}};
      if (spec.solve) {
        RunOutput rs = run_solve(mi, opts);
        const ojson& s = rs.report["solve"];
        cls = s["classification"].get<std::string>();
        std::ostringstream g, r;
        g.precision(17);
        r.precision(17);
        g << s["grad_l2"].get<double>();
        r << s["residual_norm"].get<double>();
        grad = g.str();
        res = r.str();
        row.json["solve"] = s;
      }
      os << spec.param << "," << v << "," << verdict["case"].get<std::string>() << ","
         << (verdict["predicts_nonconstant"].get<bool>() ? 1 : 0) << "," << (row.inconclusive ? 1 : 0) << "," << cls
         << "," << grad << "," << res;
    } catch (const std::exception& e) {
      os << spec.param << "," << v << ",error,,,,,";
      row.json = ojson{{"value", v}, {"error", e.what()}};
    }
    row.text = os.str();
  }

  RunOutput out;
  out.report = header(model);
  out.report["command"] = "sweep";
  out.report["parameter"] = spec.param;
  std::ostringstream csv;
  csv << "parameter,value,case,predicts_nonconstant,inconclusive,classification,grad_l2,residual\n";
  ojson arr = ojson::array();
  for (const Row& r : rows) {
    csv << r.text << "\n";
    arr.push_back(r.json);
  }
  out.report["rows"] = arr;
  out.csv = csv.str();
  out.summary = csv.str();
  out.exit_code = kExitOk;
  return out;
}

}  // namespace crossdiff
