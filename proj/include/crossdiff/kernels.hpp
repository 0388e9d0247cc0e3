#pragma once

#include <vector>

#include <Eigen/SparseCore>

#include "crossdiff/grid.hpp"

namespace crossdiff {

using Triplet = Eigen::Triplet<double>;

/// R(u) = -Lap_h P(u) - s f(u) - shift u - source, node-major like DiscreteField.
struct ResidualParams {
  double reaction_scale = 1.0;
  double shift = 0.0;
  const Vector* source = nullptr;
};

namespace kernels {

/// OpenMP versions, used by the solver.
Vector residual(const Model& model, const Grid& grid, const Vector& u, const ResidualParams& p);
std::vector<Triplet> jacobian_triplets(const Model& model, const Grid& grid, const Vector& u,
                                       const ResidualParams& p);
double bmo_scan(const Grid& grid, int m, const Vector& u, const std::vector<double>& radii);

/// Single-threaded references with the same results.
Vector residual_serial(const Model& model, const Grid& grid, const Vector& u, const ResidualParams& p);
std::vector<Triplet> jacobian_triplets_serial(const Model& model, const Grid& grid, const Vector& u,
                                              const ResidualParams& p);
double bmo_scan_serial(const Grid& grid, int m, const Vector& u, const std::vector<double>& radii);

}  // namespace kernels
}  // namespace crossdiff
