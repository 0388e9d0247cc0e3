#include "crossdiff/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "crossdiff/error.hpp"

namespace crossdiff {

namespace {

constexpr double kPi = std::numbers::pi;

struct LatticeValue {
  double value;
  std::array<int, 2> mode;
};

// Every distinct eigenvalue <= limit, merged within tol::collide (relative).
std::vector<ModeEntry> entries_upto(const Domain& domain, double limit) {
  std::vector<LatticeValue> vals;
  const double w1 = kPi / domain.lengths[0];
  const int k1max = static_cast<int>(std::floor(std::sqrt(std::max(limit, 0.0)) / w1)) + 1;
  if (domain.kind == Domain::Kind::Interval) {
    for (int k = 0; k <= k1max; ++k) {
      const double v = (k * w1) * (k * w1);
      if (v <= limit) vals.push_back({v, {k, 0}});
    }
  } else {
    const double w2 = kPi / domain.lengths[1];
    const int k2max = static_cast<int>(std::floor(std::sqrt(std::max(limit, 0.0)) / w2)) + 1;
    for (int a = 0; a <= k1max; ++a)
      for (int b = 0; b <= k2max; ++b) {
        const double v = (a * w1) * (a * w1) + (b * w2) * (b * w2);
        if (v <= limit) vals.push_back({v, {a, b}});
      }
  }
  std::sort(vals.begin(), vals.end(), [](const LatticeValue& x, const LatticeValue& y) {
    if (x.value != y.value) return x.value < y.value;
    return x.mode < y.mode;
  });

  std::vector<ModeEntry> out;
  for (const LatticeValue& lv : vals) {
    if (!out.empty()) {
      ModeEntry& last = out.back();
      const double scale = std::max(std::abs(last.lambda_hat), std::abs(lv.value));
      if (std::abs(lv.value - last.lambda_hat) <= tol::collide * scale) {
        ++last.multiplicity;
        last.modes.push_back(lv.mode);
        continue;
      }
    }
    out.push_back(ModeEntry{lv.value, 1, {lv.mode}});
  }
  return out;
}

std::vector<ModeEntry> first_entries(const Domain& domain, std::size_t count) {
  double limit = 4.0 * (kPi / domain.lengths[0]) * (kPi / domain.lengths[0]);
  while (true) {
    auto e = entries_upto(domain, limit);
    // The (count+1)-th entry lies below `limit`, so the first `count` are complete.
    if (e.size() > count) {
      e.resize(count);
      return e;
    }
    limit *= 2.0;
  }
}

}  // namespace

double ModeSpectrum::min_relative_gap() const {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 2; i < entries.size(); ++i) {
    const double a = entries[i - 1].lambda_hat;
    const double b = entries[i].lambda_hat;
    gap = std::min(gap, (b - a) / b);
  }
  return gap;
}

ModeSpectrum neumann_eigenvalues(const Domain& domain, int count) {
  if (count < 1) throw IndexError("spectrum count must be at least 1");
  return ModeSpectrum{domain, first_entries(domain, static_cast<std::size_t>(count))};
}

ModeSpectrum neumann_eigenvalues_upto(const Domain& domain, double lambda_max, int extra) {
  const std::size_t base = entries_upto(domain, lambda_max).size();
  return ModeSpectrum{domain, first_entries(domain, base + static_cast<std::size_t>(std::max(extra, 0)))};
}

double neumann_eigenfunction(const Domain& domain, const std::array<int, 2>& mode, const double* x) {
  double v = std::cos(mode[0] * kPi * x[0] / domain.lengths[0]);
  if (domain.kind == Domain::Kind::Rectangle) v *= std::cos(mode[1] * kPi * x[1] / domain.lengths[1]);
  return v;
}

namespace {

Matrix laplacian_1d(double length, int n, BoundaryCondition bc) {
  const double h = length / n;
  const double s = 1.0 / (h * h);
  Matrix L = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    L(i, i) = 2.0 * s;
    if (i > 0) L(i, i - 1) = -s;
    if (i + 1 < n) L(i, i + 1) = -s;
  }
  // Ghost value u_ghost = +u (Neumann) or -u (Dirichlet).
  const double corr = bc == BoundaryCondition::Neumann ? -s : s;
  L(0, 0) += corr;
  L(n - 1, n - 1) += corr;
  return L;
}

}  // namespace

Matrix discrete_laplacian(const Domain& domain, int grid_n, BoundaryCondition bc) {
  if (grid_n < 3) throw IndexError("grid_n must be at least 3");
  const Matrix Lx = laplacian_1d(domain.lengths[0], grid_n, bc);
  if (domain.kind == Domain::Kind::Interval) return Lx;
  const Matrix Ly = laplacian_1d(domain.lengths[1], grid_n, bc);
  const int n = grid_n;
  // Node index ix + n * iy.
  Matrix L = Matrix::Zero(n * n, n * n);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const int row = ix + n * iy;
      for (int jx = 0; jx < n; ++jx) L(row, jx + n * iy) += Lx(ix, jx);
      for (int jy = 0; jy < n; ++jy) L(row, ix + n * jy) += Ly(iy, jy);
    }
  return L;
}

std::vector<double> discrete_laplacian_spectrum(const Domain& domain, int grid_n, BoundaryCondition bc) {
  if (grid_n < 3) throw IndexError("grid_n must be at least 3");
  Vector ev;
  if (domain.kind == Domain::Kind::Interval) {
    const Matrix L = laplacian_1d(domain.lengths[0], grid_n, bc);
    Vector diag = L.diagonal();
    Vector sub(grid_n - 1);
    for (int i = 0; i + 1 < grid_n; ++i) sub(i) = L(i + 1, i);
    Eigen::SelfAdjointEigenSolver<Matrix> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    ev = es.eigenvalues();
  } else {
    if (grid_n * grid_n > 4096) throw IndexError("2-D discrete spectrum limited to 64 cells per axis");
    Eigen::SelfAdjointEigenSolver<Matrix> es(discrete_laplacian(domain, grid_n, bc), Eigen::EigenvaluesOnly);
    ev = es.eigenvalues();
  }
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace crossdiff
