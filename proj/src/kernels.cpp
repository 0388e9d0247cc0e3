#include "crossdiff/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace crossdiff::kernels {

namespace {

struct Neighbor {
  int node;  ///< -1 for a boundary face
  double inv_h2;
};

// Up to two neighbors per axis, left then right.
int neighbors(const Grid& grid, int node, Neighbor* out) {
  const int nx = grid.cells(0);
  const int ix = node % nx;
  const int iy = node / nx;
  int k = 0;
  const double sx = 1.0 / (grid.h(0) * grid.h(0));
  out[k++] = {ix > 0 ? node - 1 : -1, sx};
  out[k++] = {ix + 1 < nx ? node + 1 : -1, sx};
  if (grid.dimension() == 2) {
    const int ny = grid.cells(1);
    const double sy = 1.0 / (grid.h(1) * grid.h(1));
    out[k++] = {iy > 0 ? node - nx : -1, sy};
    out[k++] = {iy + 1 < ny ? node + nx : -1, sy};
  }
  return k;
}

Vector reaction_part(const Model& model, const Vector& ua, const ResidualParams& p, int node) {
  const int m = model.m();
  Vector r = -p.reaction_scale * model.f(ua) - p.shift * ua;
  if (p.source) r -= p.source->segment(static_cast<Eigen::Index>(node) * m, m);
  return r;
}

double ball_oscillation(const Grid& grid, int m, const Vector& u, int center, double r) {
  const auto c = grid.coordinates(center);
  const int nx = grid.cells(0);
  const int ny = grid.dimension() == 2 ? grid.cells(1) : 1;
  const double hx = grid.h(0);
  const double hy = grid.dimension() == 2 ? grid.h(1) : 1.0;
  const int cx = center % nx;
  const int cy = center / nx;
  const int rx = static_cast<int>(std::floor(r / hx));
  const int ry = grid.dimension() == 2 ? static_cast<int>(std::floor(r / hy)) : 0;
  const int x0 = std::max(0, cx - rx), x1 = std::min(nx - 1, cx + rx);
  const int y0 = std::max(0, cy - ry), y1 = std::min(ny - 1, cy + ry);

  auto inside = [&](int node) {
    const auto x = grid.coordinates(node);
    const double dx = x[0] - c[0];
    const double dy = x[1] - c[1];
    return dx * dx + dy * dy <= r * r * (1.0 + 1e-12);
  };

  Vector mean = Vector::Zero(m);
  int count = 0;
  for (int iy = y0; iy <= y1; ++iy)
    for (int ix = x0; ix <= x1; ++ix) {
      const int node = ix + nx * iy;
      if (!inside(node)) continue;
      mean += u.segment(static_cast<Eigen::Index>(node) * m, m);
      ++count;
    }
  mean /= count;
  Vector osc = Vector::Zero(m);
  for (int iy = y0; iy <= y1; ++iy)
    for (int ix = x0; ix <= x1; ++ix) {
      const int node = ix + nx * iy;
      if (!inside(node)) continue;
      osc += (u.segment(static_cast<Eigen::Index>(node) * m, m) - mean).cwiseAbs();
    }
  return (osc / count).norm();
}

}  // namespace

Vector residual(const Model& model, const Grid& grid, const Vector& u, const ResidualParams& p) {
  const int m = model.m();
  const int n = grid.nodes();
  const bool dirichlet = model.bc() == BoundaryCondition::Dirichlet;
  Vector P(u.size());
#pragma omp parallel for schedule(static)
  for (int a = 0; a < n; ++a) P.segment(static_cast<Eigen::Index>(a) * m, m) = model.P(u.segment(static_cast<Eigen::Index>(a) * m, m));

  Vector R(u.size());
#pragma omp parallel for schedule(static)
  for (int a = 0; a < n; ++a) {
    const auto off = static_cast<Eigen::Index>(a) * m;
    const Vector ua = u.segment(off, m);
    const Vector Pa = P.segment(off, m);
    Vector lap = Vector::Zero(m);
    Neighbor nb[4];
    const int k = neighbors(grid, a, nb);
    for (int s = 0; s < k; ++s) {
      if (nb[s].node >= 0)
        lap += nb[s].inv_h2 * (P.segment(static_cast<Eigen::Index>(nb[s].node) * m, m) - Pa);
      else if (dirichlet)
        lap += nb[s].inv_h2 * (model.P(-ua) - Pa);
    }
    R.segment(off, m) = -lap + reaction_part(model, ua, p, a);
  }
  return R;
}

std::vector<Triplet> jacobian_triplets(const Model& model, const Grid& grid, const Vector& u,
                                       const ResidualParams& p) {
  const int m = model.m();
  const int n = grid.nodes();
  const bool dirichlet = model.bc() == BoundaryCondition::Dirichlet;
  const int faces = 2 * grid.dimension();
  const std::size_t per_node = static_cast<std::size_t>(m * m * (1 + faces));
  std::vector<Triplet> out(per_node * static_cast<std::size_t>(n));

#pragma omp parallel for schedule(static)
  for (int a = 0; a < n; ++a) {
    const auto off = static_cast<Eigen::Index>(a) * m;
    const Vector ua = u.segment(off, m);
    const Matrix Aa = model.A(ua);
    Matrix diag = -p.reaction_scale * model.J(ua) - p.shift * Matrix::Identity(m, m);
    std::size_t slot = per_node * static_cast<std::size_t>(a);
    Neighbor nb[4];
    const int k = neighbors(grid, a, nb);
    for (int s = 0; s < k; ++s) {
      Matrix off_block = Matrix::Zero(m, m);
      int col_node = a;
      if (nb[s].node >= 0) {
        diag += nb[s].inv_h2 * Aa;
        off_block = -nb[s].inv_h2 * model.A(u.segment(static_cast<Eigen::Index>(nb[s].node) * m, m));
        col_node = nb[s].node;
      } else if (dirichlet) {
        diag += nb[s].inv_h2 * (Aa + model.A(-ua));
      }
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out[slot++] = Triplet(a * m + i, col_node * m + j, off_block(i, j));
    }
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) out[slot++] = Triplet(a * m + i, a * m + j, diag(i, j));
  }
  return out;
}

double bmo_scan(const Grid& grid, int m, const Vector& u, const std::vector<double>& radii) {
  const int n = grid.nodes();
  double best = 0.0;
#pragma omp parallel for schedule(dynamic, 16) reduction(max : best)
  for (int a = 0; a < n; ++a)
    for (double r : radii) best = std::max(best, ball_oscillation(grid, m, u, a, r));
  return best;
}

Vector residual_serial(const Model& model, const Grid& grid, const Vector& u, const ResidualParams& p) {
  const int m = model.m();
  const int n = grid.nodes();
  Vector R(u.size());
  for (int a = 0; a < n; ++a)
    R.segment(static_cast<Eigen::Index>(a) * m, m) =
        reaction_part(model, u.segment(static_cast<Eigen::Index>(a) * m, m), p, a);

  // Face loop: flux F = A(mid)(u_b - u_a) / h^2 leaves a and enters b.
  const int nx = grid.cells(0);
  const int ny = grid.dimension() == 2 ? grid.cells(1) : 1;
  const bool dirichlet = model.bc() == BoundaryCondition::Dirichlet;
  for (int axis = 0; axis < grid.dimension(); ++axis) {
    const double s = 1.0 / (grid.h(axis) * grid.h(axis));
    const int stride = axis == 0 ? 1 : nx;
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix) {
        const int a = ix + nx * iy;
        const int pos = axis == 0 ? ix : iy;
        const int len = axis == 0 ? nx : ny;
        const Vector ua = u.segment(static_cast<Eigen::Index>(a) * m, m);
        if (pos + 1 < len) {
          const int b = a + stride;
          const Vector ub = u.segment(static_cast<Eigen::Index>(b) * m, m);
          const Vector F = s * model.A(0.5 * (ua + ub)) * (ub - ua);
          R.segment(static_cast<Eigen::Index>(a) * m, m) -= F;
          R.segment(static_cast<Eigen::Index>(b) * m, m) += F;
        }
        if (dirichlet && (pos == 0 || pos + 1 == len))
          R.segment(static_cast<Eigen::Index>(a) * m, m) -= s * model.A(Vector::Zero(m)) * (-2.0 * ua);
      }
  }
  return R;
}

std::vector<Triplet> jacobian_triplets_serial(const Model& model, const Grid& grid, const Vector& u,
                                              const ResidualParams& p) {
  const int m = model.m();
  const int n = grid.nodes();
  std::vector<Triplet> out;
  auto push = [&](int row_node, int col_node, const Matrix& B) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) out.emplace_back(row_node * m + i, col_node * m + j, B(i, j));
  };
  for (int a = 0; a < n; ++a)
    push(a, a, -p.reaction_scale * model.J(u.segment(static_cast<Eigen::Index>(a) * m, m)) -
                   p.shift * Matrix::Identity(m, m));

  const int nx = grid.cells(0);
  const int ny = grid.dimension() == 2 ? grid.cells(1) : 1;
  const bool dirichlet = model.bc() == BoundaryCondition::Dirichlet;
  for (int axis = 0; axis < grid.dimension(); ++axis) {
    const double s = 1.0 / (grid.h(axis) * grid.h(axis));
    const int stride = axis == 0 ? 1 : nx;
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix) {
        const int a = ix + nx * iy;
        const int pos = axis == 0 ? ix : iy;
        const int len = axis == 0 ? nx : ny;
        const Matrix Aa = model.A(u.segment(static_cast<Eigen::Index>(a) * m, m));
        if (pos + 1 < len) {
          const int b = a + stride;
          const Matrix Ab = model.A(u.segment(static_cast<Eigen::Index>(b) * m, m));
          push(a, a, s * Aa);
          push(a, b, -s * Ab);
          push(b, a, -s * Aa);
          push(b, b, s * Ab);
        }
        if (dirichlet && (pos == 0 || pos + 1 == len)) push(a, a, 2.0 * s * model.A(Vector::Zero(m)));
      }
  }
  return out;
}

double bmo_scan_serial(const Grid& grid, int m, const Vector& u, const std::vector<double>& radii) {
  const int n = grid.nodes();
  double best = 0.0;
  for (int a = 0; a < n; ++a) {
    const auto c = grid.coordinates(a);
    for (double r : radii) {
      std::vector<int> ball;
      for (int b = 0; b < n; ++b) {
        const auto x = grid.coordinates(b);
        const double dist2 = (x[0] - c[0]) * (x[0] - c[0]) + (x[1] - c[1]) * (x[1] - c[1]);
        if (dist2 <= r * r * (1.0 + 1e-12)) ball.push_back(b);
      }
      Vector mean = Vector::Zero(m);
      for (int b : ball) mean += u.segment(static_cast<Eigen::Index>(b) * m, m);
      mean /= static_cast<double>(ball.size());
      Vector osc = Vector::Zero(m);
      for (int b : ball) osc += (u.segment(static_cast<Eigen::Index>(b) * m, m) - mean).cwiseAbs();
      best = std::max(best, (osc / static_cast<double>(ball.size())).norm());
    }
  }
  return best;
}

}  // namespace crossdiff::kernels
