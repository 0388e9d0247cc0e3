#pragma once

#include <string>
#include <vector>

#include "crossdiff/grid.hpp"

namespace crossdiff {

struct FieldNorms {
  double l1 = 0.0;       ///< int |u|
  double grad_l2 = 0.0;  ///< (int |Du|^2)^(1/2)
  double grad_ln = 0.0;  ///< (int |Du|^n)^(1/n), n = dimension
};

/// Midpoint quadrature; central differences inside, one-sided at the boundary.
FieldNorms norms(const DiscreteField& field);

/// Radii 2h, 4h, 8h, ... below `radius`, followed by `radius` itself (h = max spacing).
std::vector<double> bmo_radii(const Grid& grid, double radius);

/// sup over node centers and radii of the mean oscillation over B_r(x0) (node sets).
/// Throws ConfigError("unresolvable ball") when radius < 2h.
double bmo_seminorm(const DiscreteField& field, double radius);

struct IdentityResiduals {
  double mass = 0.0;    ///< max_i |int f_i(u)|
  double energy = 0.0;  ///< |int <A(u)Du, Du> - int <f(u), u>|
  double residual_rms = 0.0;
  bool is_solution = true;
  std::vector<std::string> flags;
};

/// Weak-form identities evaluated on the continuous piecewise-(bi)linear
/// reconstruction through the cell centers, with ghost values at the boundary.
IdentityResiduals identity_residuals(const Model& model, const DiscreteField& field);

struct NonexistenceThreshold {
  double F_star = 0.0;  ///< max ||J(u)||_2 over the box
  double B_star = 0.0;
  double diameter = 0.0;
  double threshold = 0.0;
  int samples = 0;
  std::string statement;
};

/// Box is [lo, hi] componentwise. Throws ConfigError for an empty box.
NonexistenceThreshold nonexistence_threshold(const Model& model, const Vector& lo, const Vector& hi);

struct DiagnosticsReport {
  double l1_norm = 0.0;
  double grad_l2 = 0.0;
  double grad_ln = 0.0;
  double bmo_radius = 0.0;
  double bmo_sup = 0.0;
  double lambda_bmo_product = 0.0;  ///< Lambda^2 * bmo_sup^2
  IdentityResiduals identities;
  double positivity_min = 0.0;
  std::vector<std::string> warnings;
};

/// `lambda_sup` is the Lambda of the structure check.
DiagnosticsReport diagnose(const Model& model, const DiscreteField& field, double bmo_radius, double lambda_sup);

}  // namespace crossdiff
