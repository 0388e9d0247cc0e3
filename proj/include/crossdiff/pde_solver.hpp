#pragma once

#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "crossdiff/index_theory.hpp"
#include "crossdiff/kernels.hpp"

namespace crossdiff {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Minimum cells per axis accepted by the solvers.
inline constexpr int kMinProductionCells = 8;

/// Throws ConfigError("grid too coarse ...") below kMinProductionCells.
void require_production_grid(int n_cells);

/// Cell-centered finite-volume operator for -Div(A(u)Du) - f(u); faces carry
/// A at the average of the adjacent states, boundaries use ghost reflection
/// (u_ghost = u for Neumann, -u for Dirichlet).
class Discretization {
 public:
  Discretization(Model model, Grid grid);

  const Model& model() const { return model_; }
  const Grid& grid() const { return grid_; }

  Vector residual(const Vector& u, const ResidualParams& p = {}) const;
  SparseMatrix jacobian(const Vector& u, const ResidualParams& p = {}) const;
  /// Node-major f(u), scaled like the residual's reaction term.
  Vector reaction(const Vector& u, const ResidualParams& p = {}) const;

 private:
  Model model_;
  Grid grid_;
};

Discretization discretize(const Model& model, const Grid& grid);

enum class SolutionClass { Trivial, SemitrivialConstant, NontrivialConstant, Nonconstant };
std::string to_string(SolutionClass c);

enum class SolveMethod { Newton, PseudoTransient, Picard };
std::string to_string(SolveMethod m);

enum class SolveFailure { None, MaxIterations, LineSearchStagnation, NonFiniteResidual, StepUnderflow };
std::string to_string(SolveFailure f);

struct SolveOptions {
  SolveMethod method = SolveMethod::Newton;
  int max_iter = 100;
  double tol = tol::newton;
  double ptc_dt0 = 0.1;      ///< initial pseudo-time step
  int ptc_max_iter = 1000;
  int picard_max_iter = 5000;
  double sigma_min_step = 1e-4;
  /// Adds (sigma - 1) U to the right-hand side of the sigma family.
  bool relaxation = false;
};

struct SolveResult {
  explicit SolveResult(DiscreteField f) : field(std::move(f)) {}

  DiscreteField field;
  bool converged = false;
  double residual_norm = 0.0;  ///< rms(R) / (1 + rms(f)), the convergence measure
  double residual_rms = 0.0;
  int iterations = 0;
  std::vector<double> sigma_path;
  SolutionClass classification = SolutionClass::Trivial;
  double grad_l2 = 0.0;
  SolveMethod method = SolveMethod::Newton;
  SolveFailure failure = SolveFailure::None;
  std::string message;
  double positivity_min = 0.0;
  bool positivity_violation = false;
  std::vector<std::string> warnings;
};

/// Component i is zero when max|u_i| < tol::zero; a field is constant when every
/// node is within tol::constant (1 + |mean|) of the mean.
SolutionClass classify_field(const DiscreteField& field);

/// Solves R(u) = 0 from `seed` with the method in `opts`. Failures are reported
/// through `converged`, `failure` and `message`.
SolveResult newton_solve(const Model& model, const DiscreteField& seed, const SolveOptions& opts = {});

/// Same, on a general residual (used by continuation and manufactured tests).
SolveResult solve_system(const Model& model, const DiscreteField& seed, const ResidualParams& params,
                         const SolveOptions& opts);

/// Uniform schedule k/steps, k = 1..steps.
std::vector<double> uniform_sigma_schedule(int steps);

/// Follows -Div(A(U)DU) = sigma f(U) (U = sigma u) from sigma = 0 to 1. The sigma = 0
/// start is the constant seed mean (Neumann) or the seed itself (Dirichlet).
/// Failed steps are bisected down to opts.sigma_min_step.
SolveResult continuation_solve(const Model& model, const DiscreteField& seed, const std::vector<double>& schedule,
                               const SolveOptions& opts = {});

struct SeedResult {
  DiscreteField field;
  Vector direction;  ///< unit c
  std::vector<std::string> warnings;
};

/// u* + amplitude c psi_i on `grid`, with c the unstable direction of the mode.
SeedResult seed_from_mode(const Model& model, const Vector& u_star, const ModeDecision& mode, double amplitude,
                          const Grid& grid);

}  // namespace crossdiff
