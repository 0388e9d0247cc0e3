#include "crossdiff/grid.hpp"

#include <random>
#include <sstream>

#include "crossdiff/error.hpp"

namespace crossdiff {

Grid::Grid(Domain domain, int n_cells) : domain_(std::move(domain)) {
  if (n_cells < 3) throw ConfigError("grid needs at least 3 cells per axis");
  n_[0] = n_cells;
  h_[0] = domain_.lengths[0] / n_cells;
  if (domain_.dimension() == 2) {
    n_[1] = n_cells;
    h_[1] = domain_.lengths[1] / n_cells;
  }
}

std::array<double, 2> Grid::coordinates(int node) const {
  const int ix = node % n_[0];
  const int iy = node / n_[0];
  return {(ix + 0.5) * h_[0], dimension() == 2 ? (iy + 0.5) * h_[1] : 0.0};
}

DiscreteField::DiscreteField(Grid grid, int m)
    : grid_(std::move(grid)), m_(m), values_(Vector::Zero(static_cast<Eigen::Index>(grid_.nodes()) * m)) {}

DiscreteField::DiscreteField(Grid grid, int m, Vector values)
    : grid_(std::move(grid)), m_(m), values_(std::move(values)) {
  if (values_.size() != static_cast<Eigen::Index>(grid_.nodes()) * m)
    throw ConfigError("field size does not match grid and component count");
}

Vector DiscreteField::component(int comp) const {
  Vector out(grid_.nodes());
  for (int k = 0; k < grid_.nodes(); ++k) out(k) = at(k, comp);
  return out;
}

Vector DiscreteField::mean() const {
  Vector s = Vector::Zero(m_);
  for (int k = 0; k < grid_.nodes(); ++k) s += node_value(k);
  return s / grid_.nodes();
}

DiscreteField DiscreteField::constant(const Grid& grid, const Vector& u) {
  const auto m = static_cast<int>(u.size());
  DiscreteField f(grid, m);
  for (int k = 0; k < grid.nodes(); ++k) f.values().segment(static_cast<Eigen::Index>(k) * m, m) = u;
  return f;
}

DiscreteField random_field(const Grid& grid, int m, unsigned long long seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  DiscreteField f(grid, m);
  for (Eigen::Index i = 0; i < f.values().size(); ++i) f.values()(i) = dist(rng);
  return f;
}

std::string field_to_csv(const DiscreteField& field) {
  std::ostringstream os;
  os.precision(17);
  const bool two_d = field.grid().dimension() == 2;
  os << "x";
  if (two_d) os << ",y";
  for (int i = 0; i < field.m(); ++i) os << ",u_" << (i + 1);
  os << "\n";
  for (int k = 0; k < field.grid().nodes(); ++k) {
    const auto x = field.grid().coordinates(k);
    os << x[0];
    if (two_d) os << "," << x[1];
    for (int i = 0; i < field.m(); ++i) os << "," << field.at(k, i);
    os << "\n";
  }
  return os.str();
}

}  // namespace crossdiff
