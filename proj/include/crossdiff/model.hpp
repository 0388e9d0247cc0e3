#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "crossdiff/types.hpp"

namespace crossdiff {

struct Domain {
  enum class Kind { Interval, Rectangle };

  Kind kind = Kind::Interval;
  std::vector<double> lengths{1.0};

  static Domain interval(double length);
  static Domain rectangle(double l1, double l2);

  int dimension() const { return kind == Kind::Interval ? 1 : 2; }
  double diameter() const;
  double measure() const;
  /// Same shape with every length multiplied by `s`.
  Domain scaled(double s) const;
};

enum class BoundaryCondition { Neumann, Dirichlet };

std::string to_string(Domain::Kind kind);
std::string to_string(BoundaryCondition bc);

/// Value, reaction and reaction Jacobian at one state.
struct Evaluation {
  Matrix A;  ///< dP/du
  Vector f;  ///< f_i = u_i g_i(u)
  Matrix J;  ///< df/du
};

/// Polynomial SKT system -Div(A(u) Du) = f(u) with
///   P_i(u) = u_i (d_i + sum_j alpha_ij u_j),  A = dP/du,
///   g_i(u) = r_i - sum_j c_ij u_j,            f_i = u_i g_i(u).
///
/// A is affine in u, so the face average A((u_a + u_b)/2) equals the mean of
/// A(u_a) and A(u_b), and P(u_b) - P(u_a) = A((u_a + u_b)/2) (u_b - u_a)
/// exactly. The discretization relies on both identities.
class Model {
 public:
  Model(Vector d, Matrix alpha, Vector r, Matrix c, Domain domain, BoundaryCondition bc);

  int m() const { return static_cast<int>(d_.size()); }
  const Vector& d() const { return d_; }
  const Matrix& alpha() const { return alpha_; }
  const Vector& r() const { return r_; }
  const Matrix& c() const { return c_; }
  const Domain& domain() const { return domain_; }
  BoundaryCondition bc() const { return bc_; }

  Vector P(const Vector& u) const;
  Matrix A(const Vector& u) const;
  /// dA/du_k, constant in u.
  const Matrix& dA(int k) const { return dA_[static_cast<std::size_t>(k)]; }
  Vector g(const Vector& u) const;
  Vector f(const Vector& u) const;
  Matrix J(const Vector& u) const;
  Evaluation evaluate(const Vector& u) const;

  /// Copies with modified pieces, used by sweeps and invariance checks.
  Model with_domain(Domain domain) const;
  Model with_bc(BoundaryCondition bc) const;
  /// Multiplies diffusion data (d, alpha) by `a` and reaction data (r, c) by `b`.
  Model scaled(double a, double b) const;
  /// Restriction to the species listed in `support` (diffusion and reaction).
  Model restricted(const std::vector<int>& support) const;

 private:
  Vector d_;
  Matrix alpha_;
  Vector r_;
  Matrix c_;
  Domain domain_;
  BoundaryCondition bc_;
  std::vector<Matrix> dA_;
};

/// Parses a config tree with keys m, d, alpha, r, c, domain{kind,lengths}, bc.
/// Unknown keys, shape mismatches, d_i <= 0 and alpha_ij < 0 throw ConfigError.
Model build_model(const nlohmann::json& config);
Model load_model(const std::string& path);
nlohmann::ordered_json model_to_json(const Model& model);

Evaluation evaluate(const Model& model, const Vector& u);

enum class CheckStatus { Vacuous, Pass, Fail };
std::string to_string(CheckStatus s);

/// Sampled-box estimates of the structural constants. None of these are
/// certified global bounds.
struct StructureReport {
  double lambda_floor = 0.0;      ///< min over samples of lambda(u)
  double c_star = 0.0;            ///< max ||A(u)|| / lambda(u)
  CheckStatus sg_check = CheckStatus::Vacuous;
  CheckStatus ellipticity = CheckStatus::Pass;
  double growth_exponent = 0.0;   ///< slope of log lambda vs log(1+|u|)
  double lambda_sup = 0.0;        ///< max |grad lambda| / lambda
  Vector box_lo;
  Vector box_hi;
  int samples = 0;
  int failed_samples = 0;         ///< samples with lambda(u) <= 0
};

/// lambda(u): smallest eigenvalue of the symmetric part of A(u).
double ellipticity(const Model& model, const Vector& u);

StructureReport validate_structure(const Model& model, const Vector& box_lo, const Vector& box_hi,
                                   int samples, unsigned seed = 0);

}  // namespace crossdiff
