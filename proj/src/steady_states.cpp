#include "crossdiff/steady_states.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <Eigen/LU>

#include "crossdiff/error.hpp"

namespace crossdiff {

std::string to_string(StateClass c) {
  switch (c) {
    case StateClass::Trivial: return "trivial";
    case StateClass::Semitrivial: return "semitrivial";
    case StateClass::Nontrivial: return "nontrivial";
  }
  return "unknown";
}

std::vector<int> ConstantState::support_indices(int m) const {
  std::vector<int> out;
  for (int i = 0; i < m; ++i)
    if ((support >> i) & 1u) out.push_back(i);
  return out;
}

std::vector<int> ConstantState::complement_indices(int m) const {
  std::vector<int> out;
  for (int i = 0; i < m; ++i)
    if (!((support >> i) & 1u)) out.push_back(i);
  return out;
}

StateClass classify_support(SupportMask support, int m) {
  if (support == 0) return StateClass::Trivial;
  if (support == (1u << m) - 1u) return StateClass::Nontrivial;
  return StateClass::Semitrivial;
}

namespace {

double state_residual(const Model& model, const Vector& u) {
  return model.f(u).cwiseAbs().maxCoeff();
}

struct SubsetOutcome {
  std::optional<ConstantState> state;
  std::optional<DegenerateSubset> degenerate;
};

SubsetOutcome solve_subset(const Model& model, SupportMask mask) {
  const int m = model.m();
  SubsetOutcome out;
  std::vector<int> idx;
  for (int i = 0; i < m; ++i)
    if ((mask >> i) & 1u) idx.push_back(i);
  const auto k = static_cast<Eigen::Index>(idx.size());

  Vector u = Vector::Zero(m);
  if (k > 0) {
    Matrix cs(k, k);
    Vector rs(k);
    for (Eigen::Index a = 0; a < k; ++a) {
      rs(a) = model.r()(idx[a]);
      for (Eigen::Index b = 0; b < k; ++b) cs(a, b) = model.c()(idx[a], idx[b]);
    }
    Eigen::FullPivLU<Matrix> lu(cs);
    lu.setThreshold(1e-12);
    if (lu.rank() < k) {
      out.degenerate = DegenerateSubset{mask, "degenerate-subset: restricted interaction matrix is singular"};
      return out;
    }
    const Vector us = lu.solve(rs);
    for (Eigen::Index a = 0; a < k; ++a) {
      // Zero or negative components: not a root with this exact support.
      if (!(us(a) > tol::sign)) return out;
      u(idx[a]) = us(a);
    }
  }
  ConstantState s;
  s.u_star = u;
  s.support = mask;
  s.classification = classify_support(mask, m);
  s.residual = state_residual(model, u);
  out.state = s;
  return out;
}

}  // namespace

SteadyStateSet find_constant_states(const Model& model) {
  const int m = model.m();
  if (m > 12) throw ConfigError("constant-state enumeration is limited to m <= 12");
  const int count = 1 << m;
  std::vector<SubsetOutcome> outcomes(static_cast<std::size_t>(count));

#pragma omp parallel for schedule(dynamic)
  for (int mask = 0; mask < count; ++mask)
    outcomes[static_cast<std::size_t>(mask)] = solve_subset(model, static_cast<SupportMask>(mask));

  SteadyStateSet set;
  for (const SubsetOutcome& o : outcomes) {
    if (o.degenerate) set.degenerate.push_back(*o.degenerate);
    if (!o.state) continue;
    const bool dup = std::any_of(set.states.begin(), set.states.end(), [&](const ConstantState& s) {
      return (s.u_star - o.state->u_star).cwiseAbs().maxCoeff() <= tol::dedup;
    });
    if (!dup) set.states.push_back(*o.state);
  }
  return set;
}

ConstantState refine_root(const Model& model, SupportMask support, const Vector& u0, int max_iter) {
  const int m = model.m();
  if (u0.size() != m) throw SolverError("initial guess has wrong dimension");
  std::vector<int> idx;
  for (int i = 0; i < m; ++i) {
    if ((support >> i) & 1u) {
      idx.push_back(i);
    } else if (u0(i) != 0.0) {
      throw SolverError("initial guess does not respect the support mask");
    }
  }
  const auto k = static_cast<Eigen::Index>(idx.size());
  Vector u = u0;

  auto restricted_g = [&](const Vector& v) {
    const Vector gv = model.g(v);
    Vector out(k);
    for (Eigen::Index a = 0; a < k; ++a) out(a) = gv(idx[a]);
    return out;
  };

  for (int it = 0; it <= max_iter; ++it) {
    const double res = state_residual(model, u);
    const Vector gs = restricted_g(u);
    if (res <= tol::root && (k == 0 || gs.cwiseAbs().maxCoeff() <= tol::root)) {
      ConstantState s;
      s.u_star = u;
      s.support = support;
      s.classification = classify_support(support, m);
      s.residual = res;
      return s;
    }
    if (it == max_iter) break;

    // d g_i / d u_j = -c_ij on the support.
    Matrix jac(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = 0; b < k; ++b) jac(a, b) = -model.c()(idx[a], idx[b]);
    Eigen::FullPivLU<Matrix> lu(jac);
    lu.setThreshold(1e-12);
    if (lu.rank() < k) throw SolverError("no convergence: singular Jacobian on the support");
    const Vector step = lu.solve(-gs);

    double lambda = 1.0;
    const double g0 = gs.norm();
    Vector trial = u;
    while (true) {
      trial = u;
      for (Eigen::Index a = 0; a < k; ++a) trial(idx[a]) += lambda * step(a);
      if (restricted_g(trial).norm() <= (1.0 - 1e-4 * lambda) * g0 || lambda < 1e-8) break;
      lambda *= 0.5;
    }
    for (Eigen::Index a = 0; a < k; ++a)
      if (trial(idx[a]) < -tol::sign) throw SolverError("iterate left the positive orthant");
    u = trial;
  }
  throw SolverError("no convergence within max_iter");
}

}  // namespace crossdiff
