#pragma once

#include <array>
#include <vector>

#include "crossdiff/model.hpp"

namespace crossdiff {

/// One distinct eigenvalue of the Neumann Laplacian and the lattice tuples
/// (k1[, k2]) generating its eigenspace.
struct ModeEntry {
  double lambda_hat = 0.0;
  int multiplicity = 1;
  std::vector<std::array<int, 2>> modes;
};

struct ModeSpectrum {
  Domain domain;
  std::vector<ModeEntry> entries;  ///< strictly increasing lambda_hat; entries[0] = (0, 1)

  /// Smallest relative gap between consecutive nonzero entries (infinity when < 2 nonzero).
  double min_relative_gap() const;
};

/// First `count` distinct Neumann eigenvalues of -Laplace on the domain.
ModeSpectrum neumann_eigenvalues(const Domain& domain, int count);

/// All distinct Neumann eigenvalues <= lambda_max, followed by `extra` further entries.
ModeSpectrum neumann_eigenvalues_upto(const Domain& domain, double lambda_max, int extra = 0);

/// Neumann eigenfunction for lattice tuple `mode`, evaluated at point x (1 or 2 coordinates).
double neumann_eigenfunction(const Domain& domain, const std::array<int, 2>& mode, const double* x);

/// Second-order cell-centered finite-difference Laplacian (-Laplace_h) with
/// ghost-cell reflection at the boundary (even for Neumann, odd for
/// Dirichlet). `grid_n` cells per axis.
Matrix discrete_laplacian(const Domain& domain, int grid_n, BoundaryCondition bc);

/// Eigenvalues of discrete_laplacian, sorted ascending.
std::vector<double> discrete_laplacian_spectrum(const Domain& domain, int grid_n, BoundaryCondition bc);

}  // namespace crossdiff
