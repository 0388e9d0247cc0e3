#pragma once

#include <Eigen/Dense>

namespace crossdiff {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Numerical thresholds shared across modules.
namespace tol {
inline constexpr double root = 1e-12;        ///< constant-state residual
inline constexpr double dedup = 1e-9;        ///< constant-state deduplication
inline constexpr double collide = 1e-9;      ///< relative eigenvalue collision
inline constexpr double degenerate = 1e-8;   ///< relative to mode-matrix norm
inline constexpr double sign = 1e-10;        ///< sign decisions on g_i
inline constexpr double zero = 1e-8;         ///< component considered identically zero
inline constexpr double constant = 1e-6;     ///< field considered constant
inline constexpr double newton = 1e-10;      ///< nonlinear residual (relative)
}  // namespace tol

}  // namespace crossdiff
