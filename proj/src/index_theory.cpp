#include "crossdiff/index_theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "crossdiff/error.hpp"

namespace crossdiff {

namespace {

// Eigenvalues closer than this (relative) are treated as one cluster.
constexpr double kClusterTol = 1e-6;
// Imaginary parts below this (relative) are rounding noise.
constexpr double kImagTol = 1e-7;

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
}

Matrix dinv(const Vector& d_A) { return d_A.cwiseInverse().asDiagonal(); }

}  // namespace

std::string to_string(VClass v) {
  switch (v) {
    case VClass::Stable: return "v-stable";
    case VClass::Unstable: return "v-unstable";
    case VClass::Degenerate: return "degenerate";
  }
  return "unknown";
}

Matrix mode_matrix(const Matrix& A, const Matrix& J, double lambda_hat) {
  if (!(lambda_hat > 0.0))
    throw IndexError("mode_matrix requires lambda_hat > 0 (the constant mode is checked via det J)");
  return A - J / lambda_hat;
}

Matrix mode_matrix(const Model& model, const Vector& u_star, double lambda_hat) {
  const Evaluation e = model.evaluate(u_star);
  return mode_matrix(e.A, e.J, lambda_hat);
}

NegativeCount negative_count(const Vector& d_A, const Matrix& A_i) {
  const Eigen::Index m = d_A.size();
  if (A_i.rows() != m || A_i.cols() != m) throw IndexError("negative_count: shape mismatch");
  if ((d_A.array() <= 0.0).any()) throw IndexError("negative_count: d_A must be positive");

  const Matrix B = dinv(d_A) * A_i;
  const double scale = std::max(1.0, spectral_norm(B));
  const double tol_deg = tol::degenerate * scale;

  Eigen::EigenSolver<Matrix> es(B, true);
  NegativeCount out;
  const auto ev = es.eigenvalues();
  out.margin = std::numeric_limits<double>::infinity();
  std::vector<double> counted;
  Eigen::Index most_negative = -1;
  Eigen::Index smallest_re = 0;
  for (Eigen::Index k = 0; k < m; ++k) {
    const Complex z = ev(k);
    out.eigs.push_back(z);
    out.margin = std::min(out.margin, std::abs(z.real()));
    if (z.real() < ev(smallest_re).real()) smallest_re = k;
    const bool real = std::abs(z.imag()) <= kImagTol * scale;
    if (real && z.real() < -tol_deg) {
      ++out.N;
      counted.push_back(z.real());
      if (most_negative < 0 || z.real() < ev(most_negative).real()) most_negative = k;
    }
  }
  out.degenerate = out.margin <= tol_deg;
  if (out.degenerate) out.warnings.push_back("eigenvalue with |Re| <= tol_degenerate: mode undecidable");

  // Geometric multiplicity per cluster of counted eigenvalues.
  std::sort(counted.begin(), counted.end());
  std::size_t i = 0;
  while (i < counted.size()) {
    std::size_t j = i + 1;
    while (j < counted.size() && counted[j] - counted[j - 1] <= kClusterTol * scale) ++j;
    const int algebraic = static_cast<int>(j - i);
    int geometric = algebraic;
    if (algebraic > 1) {
      double mean = 0.0;
      for (std::size_t k = i; k < j; ++k) mean += counted[k];
      mean /= algebraic;
      Eigen::FullPivLU<Matrix> lu(B - mean * Matrix::Identity(m, m));
      lu.setThreshold(kClusterTol);
      geometric = std::min<int>(algebraic, static_cast<int>(m - lu.rank()));
      if (geometric < algebraic)
        out.warnings.push_back("defective negative eigenvalue: geometric multiplicity below algebraic");
    }
    out.N_geometric += geometric;
    i = j;
  }

  const Eigen::Index pick = most_negative >= 0 ? most_negative : smallest_re;
  Vector v = es.eigenvectors().col(pick).real();
  if (v.norm() == 0.0) v = es.eigenvectors().col(pick).imag();
  v.normalize();
  // Deterministic sign: largest-magnitude component positive.
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v(imax) < 0.0) v = -v;
  out.direction = v;
  return out;
}

CutoffCertificate mode_cutoff(const Matrix& A, const Matrix& J, const Domain& domain) {
  const Vector d_A = A.diagonal();
  if ((d_A.array() <= 0.0).any()) throw IndexError("cutoff uncertifiable: diagonal of A(u*) not positive");
  const Matrix B = dinv(d_A) * A;
  Eigen::EigenSolver<Matrix> es(B, true);
  CutoffCertificate cert;
  cert.rho = es.eigenvalues().real().minCoeff();
  if (!(cert.rho > 0.0))
    throw IndexError("cutoff uncertifiable: d_A^{-1} A(u*) has an eigenvalue with nonpositive real part");
  const Matrix C = dinv(d_A) * J;
  cert.norm_dinv_J = spectral_norm(C);

  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(es.eigenvectors());
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (smin > 1e-12 * sv(0)) {
    cert.kappa_V = sv(0) / smin;
    cert.bauer_fike_bound = cert.kappa_V * cert.norm_dinv_J / cert.rho;
  } else {
    cert.kappa_V = std::numeric_limits<double>::infinity();
    cert.bauer_fike_bound = std::numeric_limits<double>::infinity();
  }

  // Lyapunov equation B^T P + P B = 2I as an m^2 linear system.
  const Eigen::Index m = B.rows();
  Matrix K = Matrix::Zero(m * m, m * m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      for (Eigen::Index k = 0; k < m; ++k) {
        // Row (i, j) of B^T P + P B: sum_k B(k, i) P(k, j) + P(i, k) B(k, j); P stored column-major.
        K(i + j * m, k + j * m) += B(k, i);
        K(i + j * m, i + k * m) += B(k, j);
      }
  Vector rhs = Vector::Zero(m * m);
  for (Eigen::Index i = 0; i < m; ++i) rhs(i + i * m) = 2.0;
  const Vector p = K.fullPivLu().solve(rhs);
  Matrix P = Eigen::Map<const Matrix>(p.data(), m, m);
  P = 0.5 * (P + P.transpose());
  cert.lyapunov_bound = 0.5 * spectral_norm(P * C + C.transpose() * P);
  if (!std::isfinite(cert.lyapunov_bound)) cert.lyapunov_bound = std::numeric_limits<double>::infinity();

  if (cert.bauer_fike_bound <= cert.lyapunov_bound) {
    cert.bound = cert.bauer_fike_bound;
    cert.method = "bauer-fike";
  } else {
    cert.bound = cert.lyapunov_bound;
    cert.method = "lyapunov";
  }
  if (!std::isfinite(cert.bound)) throw IndexError("cutoff uncertifiable: no finite certificate");

  const ModeSpectrum spec = neumann_eigenvalues_upto(domain, cert.bound, 0);
  cert.L0 = static_cast<int>(spec.entries.size()) - 1;
  return cert;
}

CutoffCertificate mode_cutoff(const Model& model, const Vector& u_star) {
  const Evaluation e = model.evaluate(u_star);
  return mode_cutoff(e.A, e.J, model.domain());
}

NondegeneracyResult check_nondegeneracy(const Matrix& A, const Matrix& J, const ModeSpectrum& spectrum) {
  NondegeneracyResult out;
  for (std::size_t i = 0; i < spectrum.entries.size(); ++i) {
    const Matrix K = spectrum.entries[i].lambda_hat * A - J;
    // |det K| <= ||K||_2^m; row norms would hide a single tiny diagonal entry.
    const double scale = std::pow(Eigen::JacobiSVD<Matrix>(K).singularValues()(0), static_cast<double>(K.rows()));
    const double det = std::abs(K.determinant());
    const double normalized = scale > 0.0 ? det / scale : 0.0;
    out.normalized_dets.push_back(normalized);
    if (!(det > tol::degenerate * scale) || scale == 0.0) {
      out.nondegenerate = false;
      out.offending_modes.push_back(static_cast<int>(i));
    }
  }
  return out;
}

NondegeneracyResult check_nondegeneracy(const Model& model, const Vector& u_star, const ModeSpectrum& spectrum) {
  const Evaluation e = model.evaluate(u_star);
  return check_nondegeneracy(e.A, e.J, spectrum);
}

namespace {

ModeDecision decide_mode(const Matrix& A, const Matrix& J, const ModeSpectrum& spec, std::size_t i) {
  const ModeEntry& entry = spec.entries[i];
  ModeDecision md;
  md.mode_index = static_cast<int>(i);
  md.lambda_hat = entry.lambda_hat;
  md.M = entry.multiplicity;
  md.modes = entry.modes;
  md.A_i = mode_matrix(A, J, entry.lambda_hat);
  md.count = negative_count(A.diagonal(), md.A_i);
  return md;
}

}  // namespace

IndexReport linearized_index(const Matrix& A, const Matrix& J, const Domain& domain) {
  constexpr int kSafetyModes = 3;
  IndexReport rep;
  rep.cutoff = mode_cutoff(A, J, domain);
  const ModeSpectrum spec = neumann_eigenvalues_upto(domain, rep.cutoff.bound, kSafetyModes);
  rep.min_relative_gap = spec.min_relative_gap();
  rep.nondegeneracy = check_nondegeneracy(A, J, spec);

  const auto L0 = static_cast<std::size_t>(rep.cutoff.L0);
  std::vector<ModeDecision> decisions(spec.entries.size() > 1 ? spec.entries.size() - 1 : 0);
#pragma omp parallel for schedule(static) if (decisions.size() > 16)
  for (std::size_t k = 0; k < decisions.size(); ++k) decisions[k] = decide_mode(A, J, spec, k + 1);

  bool margins_ok = true;
  for (ModeDecision& md : decisions) {
    const auto i = static_cast<std::size_t>(md.mode_index);
    if (md.count.degenerate) margins_ok = false;
    for (const std::string& w : md.count.warnings)
      rep.warnings.push_back("mode " + std::to_string(i) + ": " + w);
    if (i <= L0) {
      rep.gamma += md.count.N * md.M;
      rep.gamma_geometric += md.count.N_geometric * md.M;
      rep.mode_decisions.push_back(std::move(md));
    } else {
      if (md.count.N != 0)
        rep.warnings.push_back("safety scan found an unstable mode beyond the certified cutoff");
      rep.safety_scan.push_back(std::move(md));
    }
  }
  if (rep.gamma != rep.gamma_geometric)
    rep.warnings.push_back("gamma differs between algebraic and geometric multiplicity counts");
  if (rep.min_relative_gap < 1e-6)
    rep.warnings.push_back("near-degenerate Neumann eigenvalues: multiplicities may be split");

  rep.nondegenerate = rep.nondegeneracy.nondegenerate && margins_ok;
  if (rep.nondegenerate) rep.index = (rep.gamma % 2 == 0) ? 1 : -1;
  return rep;
}

IndexReport constant_state_index(const Model& model, const Vector& u_star) {
  if (model.bc() != BoundaryCondition::Neumann)
    throw IndexError("index formula requires Neumann boundary conditions");
  if (u_star.size() != model.m() || (u_star.array() <= 0.0).any())
    throw IndexError("constant_state_index requires a nontrivial (positive) constant state");
  const Evaluation e = model.evaluate(u_star);
  IndexReport rep = linearized_index(e.A, e.J, model.domain());
  rep.u_star = u_star;
  return rep;
}

std::vector<Complex> mode_mu_values(const Matrix& A, const Matrix& J, double lambda_hat) {
  const Matrix B = dinv(A.diagonal()) * mode_matrix(A, J, lambda_hat);
  Eigen::EigenSolver<Matrix> es(B, false);
  std::vector<Complex> out;
  for (Eigen::Index k = 0; k < B.rows(); ++k) out.push_back(Complex(1.0, 0.0) - es.eigenvalues()(k));
  return out;
}

StabilityVerdict semitrivial_stability(const Model& model, const ConstantState& state) {
  if (state.classification == StateClass::Nontrivial)
    throw IndexError("semitrivial_stability applies to trivial or semitrivial states");
  StabilityVerdict v;
  v.state = state;
  const Vector g = model.g(state.u_star);
  bool any_pos = false, any_zero = false;
  for (int i : state.complement_indices(model.m())) {
    v.complement_signs.emplace_back(i, g(i));
    if (std::abs(g(i)) <= tol::sign) {
      any_zero = true;
    } else if (g(i) > 0.0) {
      any_pos = true;
    }
  }
  v.v_class = any_zero ? VClass::Degenerate : (any_pos ? VClass::Unstable : VClass::Stable);
  return v;
}

namespace {

std::string two_species_case(const Model& model) {
  const double r1 = model.r()(0), r2 = model.r()(1);
  const Matrix& c = model.c();
  // Semitrivial states u_{1,*} = (r1/c11, 0), u_{2,*} = (0, r2/c22) when positive.
  const bool has1 = c(0, 0) != 0.0 && r1 / c(0, 0) > 0.0;
  const bool has2 = c(1, 1) != 0.0 && r2 / c(1, 1) > 0.0;
  const double g2_at_1 = has1 ? r2 - c(1, 0) * r1 / c(0, 0) : std::numeric_limits<double>::quiet_NaN();
  const double g1_at_2 = has2 ? r1 - c(0, 1) * r2 / c(1, 1) : std::numeric_limits<double>::quiet_NaN();
  if (r1 > 0 && r2 > 0 && has1 && has2) {
    if (g1_at_2 > 0 && g2_at_1 > 0) return "a";
    if (g1_at_2 < 0 && g2_at_1 < 0) return "b";
  }
  if (r1 > 0 && r2 < 0 && has1 && g2_at_1 > 0) return "c";
  if (r2 > 0 && r1 < 0 && has2 && g1_at_2 > 0) return "c'";
  return "none";
}

}  // namespace

IndexAnalysis analyze_indices(const Model& model) {
  IndexAnalysis out;
  out.states = find_constant_states(model);
  ExistenceVerdict& v = out.verdict;
  const int m = model.m();
  v.experimental = m != 2;
  v.assumptions = {
      "no nonconstant semitrivial solutions exist",
      "the listed constant states exhaust the trivial and semitrivial solutions",
      "strong positivity of the complement linearization is not verified; sign criteria on g_i are used",
  };

  if (model.bc() != BoundaryCondition::Neumann) {
    v.case_label = "n/a";
    v.inconclusive = true;
    v.cause = "index analysis requires Neumann boundary conditions";
    return out;
  }
  v.case_label = m == 2 ? two_species_case(model) : "n/a";

  auto fail = [&v](const std::string& cause) {
    if (!v.inconclusive) {
      v.inconclusive = true;
      v.cause = cause;
    }
  };
  if (!out.states.degenerate.empty()) fail("degenerate-subset: a restricted interaction matrix is singular");

  int boundary_sum = 0;
  for (const ConstantState& s : out.states.states) {
    if (s.classification == StateClass::Nontrivial) continue;
    StabilityVerdict sv = semitrivial_stability(model, s);
    BoundaryIndex bi{s, std::nullopt, ""};
    switch (sv.v_class) {
      case VClass::Unstable:
        bi.index = 0;
        bi.reason = "unstable in a complement direction";
        break;
      case VClass::Degenerate:
        bi.reason = "g_i vanishes in a complement direction";
        fail("degenerate boundary state (g_i = 0 in a complement direction)");
        break;
      case VClass::Stable:
        if (s.classification == StateClass::Trivial) {
          bi.index = 1;
          bi.reason = "stable in all directions";
        } else {
          const std::vector<int> S = s.support_indices(m);
          const Model sub = model.restricted(S);
          Vector us(static_cast<Eigen::Index>(S.size()));
          for (std::size_t a = 0; a < S.size(); ++a) us(static_cast<Eigen::Index>(a)) = s.u_star(S[a]);
          try {
            const IndexReport r = constant_state_index(sub, us);
            bi.index = r.index;
            bi.reason = "stable in complement directions; index of the restricted subsystem";
            if (!r.index) fail("degenerate restricted subsystem at a semitrivial state");
          } catch (const IndexError& e) {
            bi.reason = e.what();
            fail(e.what());
          }
        }
        break;
    }
    if (bi.index) boundary_sum += *bi.index;
    out.stability.push_back(std::move(sv));
    v.boundary_indices.push_back(std::move(bi));
  }

  int total = boundary_sum;
  for (const ConstantState& s : out.states.states) {
    if (s.classification != StateClass::Nontrivial) continue;
    NontrivialIndex ni{s.u_star, std::nullopt};
    try {
      IndexReport r = constant_state_index(model, s.u_star);
      ni.index = r.index;
      if (!r.index) fail("degenerate nontrivial constant state");
      for (const std::string& w : r.warnings) v.warnings.push_back(w);
      out.indices.push_back(std::move(r));
    } catch (const IndexError& e) {
      fail(e.what());
    }
    if (ni.index) total += *ni.index;
    v.nontrivial_constant_indices.push_back(std::move(ni));
  }

  if (v.inconclusive) return out;
  v.sum_of_boundary_indices = boundary_sum;
  v.total = total;
  v.predicts_nontrivial = boundary_sum != 1;
  v.predicts_nonconstant = total != 1;

  if (m == 2 && v.case_label != "none") {
    const int expected = v.case_label == "b" ? 2 : 0;
    if (boundary_sum != expected)
      v.warnings.push_back("boundary index sum disagrees with the two-species case analysis");
  }
  return out;
}

ExistenceVerdict existence_verdict(const Model& model) { return analyze_indices(model).verdict; }

}  // namespace crossdiff
