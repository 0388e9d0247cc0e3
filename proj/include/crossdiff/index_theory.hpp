#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "crossdiff/spectral.hpp"
#include "crossdiff/steady_states.hpp"

namespace crossdiff {

using Complex = std::complex<double>;

/// Real-eigenvalue census of d_A^{-1} A_i.
struct NegativeCount {
  int N = 0;            ///< real eigenvalues < 0, algebraic multiplicity
  int N_geometric = 0;  ///< same count by eigenspace dimension
  std::vector<Complex> eigs;
  double margin = 0.0;  ///< min |Re(eig)|
  bool degenerate = false;
  /// Unit real eigenvector of the most negative real eigenvalue; when there is
  /// none, of the eigenvalue with the smallest real part (real part of the vector).
  Vector direction;
  std::vector<std::string> warnings;
};

struct ModeDecision {
  int mode_index = 0;  ///< index into the Neumann spectrum
  double lambda_hat = 0.0;
  int M = 1;
  std::vector<std::array<int, 2>> modes;
  Matrix A_i;
  NegativeCount count;
};

/// For lambda_hat > bound no eigenvalue of d_A^{-1} A_i reaches the closed
/// left half-plane. Two certificates, the smaller bound is used:
///   Bauer-Fike: kappa_V ||d_A^{-1} J|| / rho (needs a diagonalizable d_A^{-1} A);
///   Lyapunov:   ||P C + C^T P|| / 2 with B^T P + P B = 2I, B = d_A^{-1} A, C = d_A^{-1} J.
struct CutoffCertificate {
  int L0 = 0;
  double rho = 0.0;          ///< min Re eig(d_A^{-1} A)
  double kappa_V = 1.0;      ///< cond_2 of the eigenvector basis of d_A^{-1} A (inf if defective)
  double norm_dinv_J = 0.0;  ///< ||d_A^{-1} J||_2
  double bauer_fike_bound = 0.0;
  double lyapunov_bound = 0.0;
  double bound = 0.0;
  std::string method;        ///< "bauer-fike" or "lyapunov"
};

struct NondegeneracyResult {
  bool nondegenerate = true;
  std::vector<int> offending_modes;          ///< spectrum indices (0 = constant mode, tests det J)
  std::vector<double> normalized_dets;       ///< |det(lambda_hat A - J)| / ||lambda_hat A - J||_2^m, per mode
};

struct IndexReport {
  Vector u_star;
  std::vector<ModeDecision> mode_decisions;  ///< modes 1..L0
  std::vector<ModeDecision> safety_scan;     ///< modes L0+1..L0+3, all expected stable
  CutoffCertificate cutoff;
  NondegeneracyResult nondegeneracy;
  int gamma = 0;            ///< sum N_i M_i (algebraic)
  int gamma_geometric = 0;  ///< sum with geometric multiplicities
  std::optional<int> index; ///< (-1)^gamma, absent when degenerate
  bool nondegenerate = false;
  double min_relative_gap = 0.0;
  std::vector<std::string> warnings;
};

/// A(u*) - J(u*) / lambda_hat. Throws IndexError for lambda_hat <= 0.
Matrix mode_matrix(const Matrix& A, const Matrix& J, double lambda_hat);
Matrix mode_matrix(const Model& model, const Vector& u_star, double lambda_hat);

NegativeCount negative_count(const Vector& d_A, const Matrix& A_i);

CutoffCertificate mode_cutoff(const Matrix& A, const Matrix& J, const Domain& domain);
CutoffCertificate mode_cutoff(const Model& model, const Vector& u_star);

NondegeneracyResult check_nondegeneracy(const Matrix& A, const Matrix& J, const ModeSpectrum& spectrum);
NondegeneracyResult check_nondegeneracy(const Model& model, const Vector& u_star, const ModeSpectrum& spectrum);

/// Index of the linearization at a constant state from A(u*), J(u*) alone.
IndexReport linearized_index(const Matrix& A, const Matrix& J, const Domain& domain);
/// Requires a nontrivial state and Neumann boundary conditions.
IndexReport constant_state_index(const Model& model, const Vector& u_star);

/// Solutions mu of lambda_hat [A + (mu - 1) d_A] c = J c, i.e. mu = 1 - eig(d_A^{-1} A_i).
std::vector<Complex> mode_mu_values(const Matrix& A, const Matrix& J, double lambda_hat);

enum class VClass { Stable, Unstable, Degenerate };
std::string to_string(VClass v);

struct StabilityVerdict {
  ConstantState state;
  std::vector<std::pair<int, double>> complement_signs;  ///< (component, g_i at the state)
  VClass v_class = VClass::Stable;
};

StabilityVerdict semitrivial_stability(const Model& model, const ConstantState& state);

struct BoundaryIndex {
  ConstantState state;
  std::optional<int> index;
  std::string reason;
};

struct NontrivialIndex {
  Vector u_star;
  std::optional<int> index;
};

struct ExistenceVerdict {
  std::string case_label;  ///< "a", "b", "c", "c'", "none" (m = 2) or "n/a"
  bool experimental = false;  ///< m != 2: same bookkeeping without the two-species theorem
  std::vector<BoundaryIndex> boundary_indices;
  std::optional<int> sum_of_boundary_indices;
  std::vector<NontrivialIndex> nontrivial_constant_indices;
  std::optional<int> total;
  bool predicts_nontrivial = false;   ///< boundary sum != 1
  bool predicts_nonconstant = false;  ///< total != 1
  bool inconclusive = false;
  std::string cause;
  std::vector<std::string> assumptions;
  std::vector<std::string> warnings;
};

/// Everything the existence verdict is built from.
struct IndexAnalysis {
  SteadyStateSet states;
  std::vector<StabilityVerdict> stability;
  std::vector<IndexReport> indices;
  ExistenceVerdict verdict;
};

IndexAnalysis analyze_indices(const Model& model);
ExistenceVerdict existence_verdict(const Model& model);

}  // namespace crossdiff
