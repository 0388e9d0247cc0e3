#include "crossdiff/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "crossdiff/error.hpp"
#include "crossdiff/kernels.hpp"

namespace crossdiff {

namespace {

// Derivative of component `comp` along `axis` at `node`.
double partial(const DiscreteField& u, int node, int comp, int axis) {
  const Grid& g = u.grid();
  const int nx = g.cells(0);
  const int len = g.cells(axis);
  const int stride = axis == 0 ? 1 : nx;
  const int pos = axis == 0 ? node % nx : node / nx;
  const double h = g.h(axis);
  if (pos == 0) return (u.at(node + stride, comp) - u.at(node, comp)) / h;
  if (pos + 1 == len) return (u.at(node, comp) - u.at(node - stride, comp)) / h;
  return (u.at(node + stride, comp) - u.at(node - stride, comp)) / (2.0 * h);
}

double rms(const Vector& v) { return v.size() ? v.norm() / std::sqrt(static_cast<double>(v.size())) : 0.0; }

// Knot lattice of the reconstruction: boundary, cell centers, boundary.
struct Knots {
  std::vector<double> x, y;
  std::vector<Vector> values;  ///< index kx + (nx + 2) * ky
};

Knots build_knots(const DiscreteField& u, BoundaryCondition bc) {
  const Grid& g = u.grid();
  const int nx = g.cells(0);
  const bool two_d = g.dimension() == 2;
  const int ny = two_d ? g.cells(1) : 1;
  Knots k;
  k.x.push_back(0.0);
  for (int i = 0; i < nx; ++i) k.x.push_back((i + 0.5) * g.h(0));
  k.x.push_back(g.domain().lengths[0]);
  if (two_d) {
    k.y.push_back(0.0);
    for (int i = 0; i < ny; ++i) k.y.push_back((i + 0.5) * g.h(1));
    k.y.push_back(g.domain().lengths[1]);
  } else {
    k.y.push_back(0.0);
  }
  const int kx = nx + 2;
  const int ky = static_cast<int>(k.y.size());
  const Vector zero = Vector::Zero(u.m());
  k.values.assign(static_cast<std::size_t>(kx * ky), zero);
  for (int j = 0; j < ky; ++j)
    for (int i = 0; i < kx; ++i) {
      const bool edge_x = i == 0 || i == kx - 1;
      const bool edge_y = two_d && (j == 0 || j == ky - 1);
      if (bc == BoundaryCondition::Dirichlet && (edge_x || edge_y)) continue;
      const int ix = std::clamp(i - 1, 0, nx - 1);
      const int iy = two_d ? std::clamp(j - 1, 0, ny - 1) : 0;
      k.values[static_cast<std::size_t>(i + kx * j)] = u.node_value(g.index(ix, iy));
    }
  return k;
}

}  // namespace

FieldNorms norms(const DiscreteField& field) {
  const Grid& g = field.grid();
  const int dim = g.dimension();
  const double vol = g.cell_volume();
  double l1 = 0.0, g2 = 0.0, gn = 0.0;
  for (int node = 0; node < g.nodes(); ++node) {
    l1 += field.node_value(node).norm() * vol;
    double sq = 0.0;
    for (int i = 0; i < field.m(); ++i)
      for (int axis = 0; axis < dim; ++axis) {
        const double d = partial(field, node, i, axis);
        sq += d * d;
      }
    g2 += sq * vol;
    gn += std::pow(std::sqrt(sq), dim) * vol;
  }
  return {l1, std::sqrt(g2), std::pow(gn, 1.0 / dim)};
}

std::vector<double> bmo_radii(const Grid& grid, double radius) {
  const double h = grid.dimension() == 2 ? std::max(grid.h(0), grid.h(1)) : grid.h(0);
  if (!(radius >= 2.0 * h * (1.0 - 1e-12))) throw ConfigError("unresolvable ball: radius below 2h");
  std::vector<double> radii;
  for (double r = 2.0 * h; r < radius * (1.0 - 1e-12); r *= 2.0) radii.push_back(r);
  radii.push_back(radius);
  return radii;
}

double bmo_seminorm(const DiscreteField& field, double radius) {
  return kernels::bmo_scan(field.grid(), field.m(), field.values(), bmo_radii(field.grid(), radius));
}

IdentityResiduals identity_residuals(const Model& model, const DiscreteField& field) {
  IdentityResiduals out;
  const int m = model.m();
  const Grid& g = field.grid();
  const bool two_d = g.dimension() == 2;
  const Knots k = build_knots(field, model.bc());
  const int kx = static_cast<int>(k.x.size());
  const int ky = static_cast<int>(k.y.size());

  // Three-point Gauss rule on [0,1].
  const double gp[3] = {0.5 - 0.5 * std::sqrt(0.6), 0.5, 0.5 + 0.5 * std::sqrt(0.6)};
  const double gw[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

  Vector mass = Vector::Zero(m);
  double dirichlet_form = 0.0;
  double reaction_form = 0.0;
  const int py = two_d ? ky - 1 : 1;
  const int qy = two_d ? 3 : 1;
  for (int j = 0; j < py; ++j)
    for (int i = 0; i + 1 < kx; ++i) {
      const double dx = k.x[static_cast<std::size_t>(i + 1)] - k.x[static_cast<std::size_t>(i)];
      const double dy = two_d ? k.y[static_cast<std::size_t>(j + 1)] - k.y[static_cast<std::size_t>(j)] : 1.0;
      const Vector& v00 = k.values[static_cast<std::size_t>(i + kx * j)];
      const Vector& v10 = k.values[static_cast<std::size_t>(i + 1 + kx * j)];
      const Vector& v01 = two_d ? k.values[static_cast<std::size_t>(i + kx * (j + 1))] : v00;
      const Vector& v11 = two_d ? k.values[static_cast<std::size_t>(i + 1 + kx * (j + 1))] : v10;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < qy; ++b) {
          const double xi = gp[a];
          const double eta = two_d ? gp[b] : 0.0;
          const double w = gw[a] * (two_d ? gw[b] : 1.0) * dx * dy;
          const Vector val = (1 - xi) * (1 - eta) * v00 + xi * (1 - eta) * v10 + (1 - xi) * eta * v01 + xi * eta * v11;
          const Vector fx = ((v10 - v00) * (1 - eta) + (v11 - v01) * eta) / dx;
          const Vector f = model.f(val);
          const Matrix A = model.A(val);
          double grad_term = fx.dot(A * fx);
          if (two_d) {
            const Vector fy = ((v01 - v00) * (1 - xi) + (v11 - v10) * xi) / dy;
            grad_term += fy.dot(A * fy);
          }
          mass += w * f;
          dirichlet_form += w * grad_term;
          reaction_form += w * f.dot(val);
        }
    }
  out.mass = mass.cwiseAbs().maxCoeff();
  out.energy = std::abs(dirichlet_form - reaction_form);
  if (model.bc() != BoundaryCondition::Neumann) out.flags.push_back("mass identity assumes Neumann conditions");

  const Vector R = kernels::residual(model, g, field.values(), ResidualParams{});
  Vector F(field.values().size());
  for (int node = 0; node < g.nodes(); ++node)
    F.segment(static_cast<Eigen::Index>(node) * m, m) = model.f(field.node_value(node));
  out.residual_rms = rms(R);
  out.is_solution = std::isfinite(out.residual_rms) && out.residual_rms <= 1e-6 * (1.0 + rms(F));
  if (!out.is_solution) out.flags.push_back("not a solution");
  return out;
}

NonexistenceThreshold nonexistence_threshold(const Model& model, const Vector& lo, const Vector& hi) {
  const int m = model.m();
  if (lo.size() != m || hi.size() != m) throw ConfigError("solution box has wrong dimension");
  for (int i = 0; i < m; ++i)
    if (!(lo(i) <= hi(i))) throw ConfigError("empty box");

  // Lattice with `per` points per axis; includes every vertex.
  int per = 2;
  while (std::pow(per + 1, m) <= 4096.0 && per < 33) ++per;
  long total = 1;
  for (int i = 0; i < m; ++i) total *= per;

  NonexistenceThreshold out;
  Vector u(m);
  for (long idx = 0; idx < total; ++idx) {
    long rest = idx;
    for (int i = 0; i < m; ++i) {
      const int t = static_cast<int>(rest % per);
      rest /= per;
      u(i) = lo(i) + (hi(i) - lo(i)) * t / (per - 1);
    }
    Eigen::JacobiSVD<Matrix> svd(model.J(u));
    out.F_star = std::max(out.F_star, svd.singularValues()(0));
  }
  out.samples = static_cast<int>(total);
  out.B_star = 0.0;
  out.diameter = model.domain().diameter();
  out.threshold = out.F_star * out.diameter * out.diameter + out.B_star * out.diameter;
  out.statement = "if the ellipticity floor lambda_0 exceeds the threshold, every solution with values in the box is constant";
  return out;
}

DiagnosticsReport diagnose(const Model& model, const DiscreteField& field, double bmo_radius, double lambda_sup) {
  DiagnosticsReport r;
  const FieldNorms n = norms(field);
  r.l1_norm = n.l1;
  r.grad_l2 = n.grad_l2;
  r.grad_ln = n.grad_ln;
  r.bmo_radius = bmo_radius;
  try {
    r.bmo_sup = bmo_seminorm(field, bmo_radius);
  } catch (const ConfigError& e) {
    r.warnings.emplace_back(e.what());
  }
  r.lambda_bmo_product = lambda_sup * lambda_sup * r.bmo_sup * r.bmo_sup;
  r.identities = identity_residuals(model, field);
  r.positivity_min = field.values().minCoeff();
  return r;
}

}  // namespace crossdiff
