#pragma once

#include <array>
#include <string>

#include "crossdiff/model.hpp"

namespace crossdiff {

/// Uniform cell-centered grid; node (ix, iy) sits at ((ix + 1/2) hx, (iy + 1/2) hy)
/// and has flat index ix + nx * iy.
class Grid {
 public:
  Grid(Domain domain, int n_cells);

  const Domain& domain() const { return domain_; }
  int dimension() const { return domain_.dimension(); }
  int cells(int axis) const { return n_[static_cast<std::size_t>(axis)]; }
  double h(int axis) const { return h_[static_cast<std::size_t>(axis)]; }
  int nodes() const { return n_[0] * n_[1]; }
  double cell_volume() const { return h_[0] * (dimension() == 2 ? h_[1] : 1.0); }
  std::array<double, 2> coordinates(int node) const;
  int index(int ix, int iy = 0) const { return ix + n_[0] * iy; }

 private:
  Domain domain_;
  std::array<int, 2> n_{1, 1};
  std::array<double, 2> h_{1.0, 1.0};
};

/// Grid-sampled u: grid -> R^m, interleaved (node-major) storage.
class DiscreteField {
 public:
  DiscreteField(Grid grid, int m);
  DiscreteField(Grid grid, int m, Vector values);

  const Grid& grid() const { return grid_; }
  int m() const { return m_; }
  const Vector& values() const { return values_; }
  Vector& values() { return values_; }

  double& at(int node, int comp) { return values_(static_cast<Eigen::Index>(node) * m_ + comp); }
  double at(int node, int comp) const { return values_(static_cast<Eigen::Index>(node) * m_ + comp); }
  Vector node_value(int node) const { return values_.segment(static_cast<Eigen::Index>(node) * m_, m_); }
  Vector component(int comp) const;
  Vector mean() const;
  bool all_finite() const { return values_.allFinite(); }

  static DiscreteField constant(const Grid& grid, const Vector& u);

 private:
  Grid grid_;
  int m_;
  Vector values_;
};

/// Uniform random values in [lo, hi] per node and component; deterministic in `seed`.
DiscreteField random_field(const Grid& grid, int m, unsigned long long seed, double lo, double hi);

/// CSV with columns x[, y], u_1, ..., u_m.
std::string field_to_csv(const DiscreteField& field);

}  // namespace crossdiff
