#include "crossdiff/report.hpp"

#include <cmath>

namespace crossdiff {

namespace {

ojson num(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }

ojson complex_list(const std::vector<Complex>& z) {
  ojson a = ojson::array();
  for (const Complex& c : z) a.push_back(ojson::array({num(c.real()), num(c.imag())}));
  return a;
}

ojson mode_json(const ModeDecision& md) {
  ojson j;
  j["mode_index"] = md.mode_index;
  j["lambda_hat"] = num(md.lambda_hat);
  j["multiplicity"] = md.M;
  ojson modes = ojson::array();
  for (const auto& k : md.modes) modes.push_back(ojson::array({k[0], k[1]}));
  j["lattice_modes"] = modes;
  j["N"] = md.count.N;
  j["N_geometric"] = md.count.N_geometric;
  j["margin"] = num(md.count.margin);
  j["degenerate"] = md.count.degenerate;
  j["eigenvalues"] = complex_list(md.count.eigs);
  if (!md.count.warnings.empty()) j["warnings"] = md.count.warnings;
  return j;
}

template <class T>
ojson opt(const std::optional<T>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

}  // namespace

ojson to_json(const Vector& v) {
  ojson a = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

std::string support_string(SupportMask mask, int m) {
  std::string s;
  for (int i = 0; i < m; ++i) s += (mask >> i) & 1u ? '1' : '0';
  return s;
}

ojson to_json(const StructureReport& s) {
  ojson j;
  j["lambda_floor"] = num(s.lambda_floor);
  j["c_star"] = num(s.c_star);
  j["sg_check"] = to_string(s.sg_check);
  j["ellipticity"] = to_string(s.ellipticity);
  j["growth_exponent"] = num(s.growth_exponent);
  j["lambda_sup"] = num(s.lambda_sup);
  j["box_lo"] = to_json(s.box_lo);
  j["box_hi"] = to_json(s.box_hi);
  j["samples"] = s.samples;
  j["failed_samples"] = s.failed_samples;
  return j;
}

ojson to_json(const ConstantState& s, int m) {
  ojson j;
  j["u_star"] = to_json(s.u_star);
  j["support"] = support_string(s.support, m);
  j["classification"] = to_string(s.classification);
  j["residual"] = num(s.residual);
  return j;
}

ojson to_json(const DegenerateSubset& d, int m) {
  return ojson{{"support", support_string(d.support, m)}, {"reason", d.reason}};
}

ojson to_json(const StabilityVerdict& v, int m) {
  ojson j;
  j["state"] = to_json(v.state, m);
  ojson signs = ojson::array();
  for (const auto& [i, g] : v.complement_signs) signs.push_back(ojson{{"component", i + 1}, {"g", num(g)}});
  j["complement_growth_rates"] = signs;
  j["class"] = to_string(v.v_class);
  return j;
}

ojson to_json(const IndexReport& r) {
  ojson j;
  j["u_star"] = to_json(r.u_star);
  ojson modes = ojson::array();
  for (const ModeDecision& md : r.mode_decisions) modes.push_back(mode_json(md));
  j["mode_decisions"] = modes;
  ojson scan = ojson::array();
  for (const ModeDecision& md : r.safety_scan) scan.push_back(mode_json(md));
  j["safety_scan"] = scan;
  j["cutoff"] = ojson{{"L0", r.cutoff.L0},
                      {"rho", num(r.cutoff.rho)},
                      {"kappa_V", num(r.cutoff.kappa_V)},
                      {"norm_dinv_J", num(r.cutoff.norm_dinv_J)},
                      {"bauer_fike_bound", num(r.cutoff.bauer_fike_bound)},
                      {"lyapunov_bound", num(r.cutoff.lyapunov_bound)},
                      {"bound", num(r.cutoff.bound)},
                      {"method", r.cutoff.method}};
  ojson dets = ojson::array();
  for (double d : r.nondegeneracy.normalized_dets) dets.push_back(num(d));
  j["nondegeneracy"] = ojson{{"nondegenerate", r.nondegeneracy.nondegenerate},
                             {"offending_modes", r.nondegeneracy.offending_modes},
                             {"normalized_dets", dets}};
  j["gamma"] = r.gamma;
  j["gamma_geometric"] = r.gamma_geometric;
  j["index"] = opt(r.index);
  j["nondegenerate"] = r.nondegenerate;
  j["min_relative_gap"] = num(r.min_relative_gap);
  j["warnings"] = r.warnings;
  return j;
}

std::string verdict_statement(const ExistenceVerdict& v) {
  if (v.inconclusive) return "inconclusive: " + v.cause;
  const std::string tag = v.case_label == "n/a" || v.case_label == "none" ? "" : " (case " + v.case_label + ")";
  std::string s;
  if (v.predicts_nontrivial)
    s = "nontrivial positive solution exists" + tag;
  else if (v.predicts_nonconstant)
    s = "nonconstant solution exists" + tag;
  else
    s = "index count gives no existence claim" + tag;
  if (v.predicts_nonconstant && v.predicts_nontrivial)
    s += "; nonconstant solution exists (total index " + std::to_string(*v.total) + " != 1)";
  if (v.experimental) s += " [experimental: m != 2]";
  return s;
}

ojson to_json(const ExistenceVerdict& v, int m) {
  ojson j;
  j["statement"] = verdict_statement(v);
  j["case"] = v.case_label;
  j["experimental"] = v.experimental;
  ojson b = ojson::array();
  for (const BoundaryIndex& bi : v.boundary_indices)
    b.push_back(ojson{{"state", to_json(bi.state, m)}, {"index", opt(bi.index)}, {"reason", bi.reason}});
  j["boundary_indices"] = b;
  j["sum_of_boundary_indices"] = opt(v.sum_of_boundary_indices);
  ojson n = ojson::array();
  for (const NontrivialIndex& ni : v.nontrivial_constant_indices)
    n.push_back(ojson{{"u_star", to_json(ni.u_star)}, {"index", opt(ni.index)}});
  j["nontrivial_constant_indices"] = n;
  j["total"] = opt(v.total);
  j["predicts_nontrivial"] = v.predicts_nontrivial;
  j["predicts_nonconstant"] = v.predicts_nonconstant;
  j["inconclusive"] = v.inconclusive;
  j["cause"] = v.cause;
  j["assumptions"] = v.assumptions;
  j["warnings"] = v.warnings;
  return j;
}

ojson to_json(const SolveResult& r) {
  ojson j;
  j["converged"] = r.converged;
  j["method"] = to_string(r.method);
  j["residual_norm"] = num(r.residual_norm);
  j["residual_rms"] = num(r.residual_rms);
  j["iterations"] = r.iterations;
  ojson path = ojson::array();
  for (double s : r.sigma_path) path.push_back(num(s));
  j["sigma_path"] = path;
  j["classification"] = to_string(r.classification);
  j["grad_l2"] = num(r.grad_l2);
  j["failure"] = to_string(r.failure);
  j["message"] = r.message;
  const int m = r.field.m();
  ojson comps = ojson::array();
  for (int i = 0; i < m; ++i) {
    const Vector ui = r.field.component(i);
    comps.push_back(ojson{{"component", i + 1}, {"min", num(ui.minCoeff())}, {"max", num(ui.maxCoeff())}, {"mean", num(ui.mean())}});
  }
  j["field_summary"] = ojson{{"cells_per_axis", r.field.grid().cells(0)}, {"nodes", r.field.grid().nodes()}, {"components", comps}};
  j["positivity_min"] = num(r.positivity_min);
  j["positivity_violation"] = r.positivity_violation;
  j["warnings"] = r.warnings;
  return j;
}

ojson to_json(const DiagnosticsReport& d) {
  ojson j;
  j["l1_norm"] = num(d.l1_norm);
  j["grad_l2"] = num(d.grad_l2);
  j["grad_ln"] = num(d.grad_ln);
  j["bmo_radius"] = num(d.bmo_radius);
  j["bmo_sup"] = num(d.bmo_sup);
  j["lambda_sq_bmo_sq"] = num(d.lambda_bmo_product);
  j["identity_residuals"] = ojson{{"mass", num(d.identities.mass)},
                                  {"energy", num(d.identities.energy)},
                                  {"residual_rms", num(d.identities.residual_rms)},
                                  {"is_solution", d.identities.is_solution},
                                  {"flags", d.identities.flags}};
  j["positivity_min"] = num(d.positivity_min);
  j["warnings"] = d.warnings;
  return j;
}

ojson to_json(const NonexistenceThreshold& t) {
  return ojson{{"F_star", num(t.F_star)},   {"B_star", num(t.B_star)},   {"diameter", num(t.diameter)},
               {"threshold", num(t.threshold)}, {"samples", t.samples}, {"statement", t.statement}};
}

}  // namespace crossdiff
