#include "crossdiff/pde_solver.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseLU>

#include "crossdiff/diagnostics.hpp"
#include "crossdiff/error.hpp"

namespace crossdiff {

namespace {

double rms(const Vector& v) { return v.size() ? v.norm() / std::sqrt(static_cast<double>(v.size())) : 0.0; }

using LU = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

SparseMatrix to_sparse(const std::vector<Triplet>& t, Eigen::Index n) {
  SparseMatrix J(n, n);
  J.setFromTriplets(t.begin(), t.end());
  J.makeCompressed();
  return J;
}

// Frozen-coefficient operator L(u) w = -Div(A(u) Dw), faces at the average state.
SparseMatrix frozen_operator(const Model& model, const Grid& grid, const Vector& u) {
  const int m = model.m();
  const int nx = grid.cells(0);
  const int ny = grid.dimension() == 2 ? grid.cells(1) : 1;
  const bool dirichlet = model.bc() == BoundaryCondition::Dirichlet;
  const Matrix A0 = model.A(Vector::Zero(m));
  std::vector<Triplet> t;
  auto push = [&](int r, int c, const Matrix& B) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) t.emplace_back(r * m + i, c * m + j, B(i, j));
  };
  for (int axis = 0; axis < grid.dimension(); ++axis) {
    const double s = 1.0 / (grid.h(axis) * grid.h(axis));
    const int stride = axis == 0 ? 1 : nx;
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix) {
        const int a = ix + nx * iy;
        const int pos = axis == 0 ? ix : iy;
        const int len = axis == 0 ? nx : ny;
        if (pos + 1 < len) {
          const int b = a + stride;
          const Matrix Af =
              s * model.A(0.5 * (u.segment(static_cast<Eigen::Index>(a) * m, m) + u.segment(static_cast<Eigen::Index>(b) * m, m)));
          push(a, a, Af);
          push(a, b, -Af);
          push(b, b, Af);
          push(b, a, -Af);
        }
        if (dirichlet && (pos == 0 || pos + 1 == len)) push(a, a, 2.0 * s * A0);
      }
  }
  return to_sparse(t, static_cast<Eigen::Index>(grid.nodes()) * m);
}

struct Measure {
  double abs = 0.0;
  double rel = 0.0;
};

Measure measure(const Discretization& disc, const Vector& R, const Vector& u, const ResidualParams& p) {
  const double a = rms(R);
  return {a, a / (1.0 + rms(disc.reaction(u, p)))};
}

void finish(SolveResult& r, const Model& model, const DiscreteField& seed) {
  r.grad_l2 = norms(r.field).grad_l2;
  r.classification = classify_field(r.field);
  r.positivity_min = r.field.values().minCoeff();
  if (seed.values().minCoeff() >= 0.0 && r.positivity_min < -tol::zero) {
    r.positivity_violation = true;
    r.warnings.push_back("positivity violated: component below -tol_zero");
  }
  (void)model;
}

SolveResult newton_core(const Discretization& disc, const DiscreteField& seed, const ResidualParams& p,
                        const SolveOptions& opts) {
  SolveResult res{seed};
  res.method = SolveMethod::Newton;
  Vector u = seed.values();
  Vector R = disc.residual(u, p);
  if (!R.allFinite()) {
    res.failure = SolveFailure::NonFiniteResidual;
    res.message = "non-finite residual at the seed";
    return res;
  }
  LU lu;
  bool analyzed = false;
  for (int it = 0; it <= opts.max_iter; ++it) {
    const Measure mm = measure(disc, R, u, p);
    res.residual_rms = mm.abs;
    res.residual_norm = mm.rel;
    res.iterations = it;
    if (mm.rel <= opts.tol) {
      res.converged = true;
      break;
    }
    if (it == opts.max_iter) {
      res.failure = SolveFailure::MaxIterations;
      res.message = "maximum Newton iterations exceeded";
      break;
    }
    const SparseMatrix J = disc.jacobian(u, p);
    if (!analyzed) {
      lu.analyzePattern(J);
      analyzed = true;
    }
    lu.factorize(J);
    Vector delta;
    if (lu.info() == Eigen::Success) delta = lu.solve(-R);
    if (lu.info() != Eigen::Success || !delta.allFinite()) {
      res.failure = SolveFailure::LineSearchStagnation;
      res.message = "line search stagnates: singular Jacobian";
      break;
    }
    // Armijo backtracking on ||R||.
    const double r0 = R.norm();
    double t = 1.0;
    bool accepted = false;
    while (t >= 1e-10) {
      const Vector trial = u + t * delta;
      const Vector Rt = disc.residual(trial, p);
      if (Rt.allFinite() && Rt.norm() <= (1.0 - 1e-4 * t) * r0) {
        u = trial;
        R = Rt;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      res.failure = SolveFailure::LineSearchStagnation;
      res.message = "line search stagnates";
      break;
    }
  }
  res.field.values() = u;
  return res;
}

SolveResult ptc_core(const Discretization& disc, const DiscreteField& seed, const ResidualParams& p,
                     const SolveOptions& opts) {
  SolveResult res{seed};
  res.method = SolveMethod::PseudoTransient;
  Vector u = seed.values();
  Vector R = disc.residual(u, p);
  if (!R.allFinite()) {
    res.failure = SolveFailure::NonFiniteResidual;
    res.message = "non-finite residual at the seed";
    return res;
  }
  const Eigen::Index n = u.size();
  SparseMatrix I(n, n);
  I.setIdentity();
  double dt = opts.ptc_dt0;
  LU lu;
  bool analyzed = false;
  for (int it = 0; it <= opts.ptc_max_iter; ++it) {
    const Measure mm = measure(disc, R, u, p);
    res.residual_rms = mm.abs;
    res.residual_norm = mm.rel;
    res.iterations = it;
    if (mm.rel <= opts.tol) {
      res.converged = true;
      break;
    }
    if (it == opts.ptc_max_iter) {
      res.failure = SolveFailure::MaxIterations;
      res.message = "maximum pseudo-transient iterations exceeded";
      break;
    }
    const SparseMatrix K = disc.jacobian(u, p) + (1.0 / dt) * I;
    if (!analyzed) {
      lu.analyzePattern(K);
      analyzed = true;
    }
    lu.factorize(K);
    Vector delta;
    if (lu.info() == Eigen::Success) delta = lu.solve(-R);
    const Vector trial = delta.size() ? Vector(u + delta) : u;
    const Vector Rt = disc.residual(trial, p);
    if (lu.info() != Eigen::Success || !Rt.allFinite()) {
      dt *= 0.1;
      if (dt < 1e-12) {
        res.failure = SolveFailure::NonFiniteResidual;
        res.message = "pseudo-time step collapsed";
        break;
      }
      continue;
    }
    // Switched evolution relaxation.
    dt = std::clamp(dt * R.norm() / std::max(Rt.norm(), 1e-300), 1e-12, 1e12);
    u = trial;
    R = Rt;
  }
  res.field.values() = u;
  return res;
}

SolveResult picard_core(const Discretization& disc, const DiscreteField& seed, const ResidualParams& p,
                        const SolveOptions& opts) {
  SolveResult res{seed};
  res.method = SolveMethod::Picard;
  const Model& model = disc.model();
  const Grid& grid = disc.grid();
  const int m = model.m();
  Vector u = seed.values();
  double k = 0.0;
  for (int a = 0; a < grid.nodes(); ++a)
    k = std::max(k, model.J(u.segment(static_cast<Eigen::Index>(a) * m, m)).norm());
  k += 1.0;
  const Eigen::Index n = u.size();
  SparseMatrix I(n, n);
  I.setIdentity();
  for (int it = 0; it <= opts.picard_max_iter; ++it) {
    const Vector R = disc.residual(u, p);
    if (!R.allFinite()) {
      res.failure = SolveFailure::NonFiniteResidual;
      res.message = "non-finite residual";
      break;
    }
    const Measure mm = measure(disc, R, u, p);
    res.residual_rms = mm.abs;
    res.residual_norm = mm.rel;
    res.iterations = it;
    if (mm.rel <= opts.tol) {
      res.converged = true;
      break;
    }
    if (it == opts.picard_max_iter) {
      res.failure = SolveFailure::MaxIterations;
      res.message = "maximum Picard iterations exceeded";
      break;
    }
    // (L(u) + k) w = f(u) + k u, where -L(u) u - f(u) equals the residual.
    const SparseMatrix L = frozen_operator(model, grid, u);
    LU lu(SparseMatrix(L + k * I));
    if (lu.info() != Eigen::Success) {
      res.failure = SolveFailure::LineSearchStagnation;
      res.message = "singular frozen-coefficient operator";
      break;
    }
    const Vector rhs = L * u - R + k * u;
    u = lu.solve(rhs);
  }
  res.field.values() = u;
  return res;
}

}  // namespace

void require_production_grid(int n_cells) {
  if (n_cells < kMinProductionCells)
    throw ConfigError("grid too coarse: need at least " + std::to_string(kMinProductionCells) + " cells per axis");
}

Discretization::Discretization(Model model, Grid grid) : model_(std::move(model)), grid_(std::move(grid)) {}

Vector Discretization::residual(const Vector& u, const ResidualParams& p) const {
  return kernels::residual(model_, grid_, u, p);
}

SparseMatrix Discretization::jacobian(const Vector& u, const ResidualParams& p) const {
  return to_sparse(kernels::jacobian_triplets(model_, grid_, u, p), u.size());
}

Vector Discretization::reaction(const Vector& u, const ResidualParams& p) const {
  const int m = model_.m();
  Vector out(u.size());
  for (int a = 0; a < grid_.nodes(); ++a)
    out.segment(static_cast<Eigen::Index>(a) * m, m) =
        p.reaction_scale * model_.f(u.segment(static_cast<Eigen::Index>(a) * m, m));
  return out;
}

Discretization discretize(const Model& model, const Grid& grid) { return Discretization(model, grid); }

std::string to_string(SolutionClass c) {
  switch (c) {
    case SolutionClass::Trivial: return "trivial";
    case SolutionClass::SemitrivialConstant: return "semitrivial-constant";
    case SolutionClass::NontrivialConstant: return "nontrivial-constant";
    case SolutionClass::Nonconstant: return "nonconstant";
  }
  return "unknown";
}

std::string to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::Newton: return "newton";
    case SolveMethod::PseudoTransient: return "pseudo-transient";
    case SolveMethod::Picard: return "picard";
  }
  return "unknown";
}

std::string to_string(SolveFailure f) {
  switch (f) {
    case SolveFailure::None: return "none";
    case SolveFailure::MaxIterations: return "max-iterations";
    case SolveFailure::LineSearchStagnation: return "line-search-stagnation";
    case SolveFailure::NonFiniteResidual: return "non-finite-residual";
    case SolveFailure::StepUnderflow: return "step-underflow";
  }
  return "unknown";
}

SolutionClass classify_field(const DiscreteField& field) {
  const int m = field.m();
  const Vector mean = field.mean();
  int zeros = 0;
  bool constant = true;
  for (int i = 0; i < m; ++i) {
    const Vector ui = field.component(i);
    if (ui.cwiseAbs().maxCoeff() < tol::zero) ++zeros;
    const double dev = (ui.array() - mean(i)).abs().maxCoeff();
    if (dev >= tol::constant * (1.0 + std::abs(mean(i)))) constant = false;
  }
  if (!constant && norms(field).grad_l2 > tol::constant) return SolutionClass::Nonconstant;
  if (zeros == m) return SolutionClass::Trivial;
  if (zeros > 0) return SolutionClass::SemitrivialConstant;
  return SolutionClass::NontrivialConstant;
}

SolveResult solve_system(const Model& model, const DiscreteField& seed, const ResidualParams& params,
                         const SolveOptions& opts) {
  if (seed.m() != model.m()) throw ConfigError("seed has wrong component count");
  if (!seed.all_finite()) throw ConfigError("seed is not finite");
  const Discretization disc(model, seed.grid());
  SolveResult r{seed};
  switch (opts.method) {
    case SolveMethod::Newton: r = newton_core(disc, seed, params, opts); break;
    case SolveMethod::PseudoTransient: r = ptc_core(disc, seed, params, opts); break;
    case SolveMethod::Picard: r = picard_core(disc, seed, params, opts); break;
  }
  finish(r, model, seed);
  return r;
}

SolveResult newton_solve(const Model& model, const DiscreteField& seed, const SolveOptions& opts) {
  SolveResult r = solve_system(model, seed, ResidualParams{}, opts);
  r.sigma_path = {1.0};
  return r;
}

std::vector<double> uniform_sigma_schedule(int steps) {
  if (steps < 1) throw ConfigError("sigma schedule needs at least one step");
  std::vector<double> s;
  for (int k = 1; k <= steps; ++k) s.push_back(static_cast<double>(k) / steps);
  return s;
}

SolveResult continuation_solve(const Model& model, const DiscreteField& seed, const std::vector<double>& schedule,
                               const SolveOptions& opts) {
  std::vector<double> targets;
  for (double s : schedule)
    if (s > 0.0) targets.push_back(s);
  if (targets.empty() || std::abs(targets.back() - 1.0) > 1e-14) throw ConfigError("sigma schedule must end at 1");
  for (std::size_t i = 1; i < targets.size(); ++i)
    if (!(targets[i] > targets[i - 1])) throw ConfigError("sigma schedule must be strictly increasing");
  if (!seed.all_finite()) throw ConfigError("seed is not finite");

  DiscreteField U = model.bc() == BoundaryCondition::Neumann ? DiscreteField::constant(seed.grid(), seed.mean()) : seed;
  std::vector<double> path{0.0};
  double sigma = 0.0;
  int total_iterations = 0;
  SolveResult last{U};
  for (double target : targets) {
    double step = target - sigma;
    while (sigma < target - 1e-15) {
      step = std::min(step, target - sigma);
      const double next = (target - sigma - step) < 1e-15 ? target : sigma + step;
      ResidualParams p;
      p.reaction_scale = next;
      if (opts.relaxation) p.shift = next - 1.0;
      SolveResult trial = solve_system(model, U, p, opts);
      total_iterations += trial.iterations;
      if (trial.converged) {
        U = trial.field;
        sigma = next;
        path.push_back(sigma);
        last = std::move(trial);
        continue;
      }
      step *= 0.5;
      if (step < opts.sigma_min_step) {
        const std::string cause = trial.message;
        SolveResult fail = std::move(trial);
        fail.field = U;
        fail.converged = false;
        fail.failure = SolveFailure::StepUnderflow;
        fail.message = "sigma step underflow at sigma = " + std::to_string(sigma) + " (" + cause + ")";
        fail.sigma_path = path;
        fail.iterations = total_iterations;
        finish(fail, model, seed);
        return fail;
      }
    }
  }
  last.sigma_path = path;
  last.iterations = total_iterations;
  finish(last, model, seed);
  return last;
}

SeedResult seed_from_mode(const Model& model, const Vector& u_star, const ModeDecision& mode, double amplitude,
                          const Grid& grid) {
  const int m = model.m();
  if (u_star.size() != m) throw ConfigError("u_star has wrong component count");
  SeedResult out{DiscreteField::constant(grid, u_star), Vector::Zero(m), {}};
  if (model.bc() != BoundaryCondition::Neumann) out.warnings.push_back("mode seeds assume Neumann conditions");
  if (mode.count.N < 1) out.warnings.push_back("mode not unstable");
  Vector c = mode.count.direction;
  if (c.size() != m || c.norm() == 0.0) c = Vector::Unit(m, 0);
  c.normalize();
  out.direction = c;
  const std::array<int, 2> k = mode.modes.empty() ? std::array<int, 2>{0, 0} : mode.modes.front();
  const bool positive = (u_star.array() > 0.0).all();
  for (int a = 0; a < grid.nodes(); ++a) {
    const auto x = grid.coordinates(a);
    const double psi = neumann_eigenfunction(grid.domain(), k, x.data());
    for (int i = 0; i < m; ++i) {
      double v = u_star(i) + amplitude * c(i) * psi;
      if (positive) v = std::max(v, 1e-3 * u_star(i));
      out.field.at(a, i) = v;
    }
  }
  return out;
}

}  // namespace crossdiff
