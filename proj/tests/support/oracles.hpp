#pragma once

// Independent reference computations for tests. Nothing here calls the
// library's discretization or index code.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// -d2/dx2 on n cells of (0, L), cell-centered, zero-flux boundary.
inline Mat neumann_laplacian(double L, int n) {
  const double h = L / n;
  Mat M = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    if (i > 0) {
      M(i, i - 1) = -1.0 / (h * h);
      diag += 1.0 / (h * h);
    }
    if (i + 1 < n) {
      M(i, i + 1) = -1.0 / (h * h);
      diag += 1.0 / (h * h);
    }
    M(i, i) = diag;
  }
  return M;
}

/// Block (i, j) = B(i, j) * C.
inline Mat kron(const Mat& B, const Mat& C) {
  Mat K(B.rows() * C.rows(), B.cols() * C.cols());
  for (Eigen::Index i = 0; i < B.rows(); ++i)
    for (Eigen::Index j = 0; j < B.cols(); ++j) K.block(i * C.rows(), j * C.cols(), C.rows(), C.cols()) = B(i, j) * C;
  return K;
}

/// Number of real eigenvalues > 1 (with multiplicity) of (A (x) L + k)^{-1} (J (x) I + k).
inline int leray_schauder_count(const Mat& A, const Mat& J, double length, int n, double k) {
  const Mat L = neumann_laplacian(length, n);
  const Eigen::Index N = A.rows() * n;
  const Mat I = Mat::Identity(N, N);
  const Mat lhs = kron(A, L) + k * I;
  const Mat rhs = kron(J, Mat::Identity(n, n)) + k * I;
  const Mat T = lhs.partialPivLu().solve(rhs);
  Eigen::EigenSolver<Mat> es(T, false);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  int count = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const auto z = es.eigenvalues()(i);
    if (std::abs(z.imag()) <= 1e-8 * scale && z.real() > 1.0) ++count;
  }
  return count;
}

/// All mu with lambda_h [A + (mu - 1) d_A] c = J c over the discrete Neumann
/// modes; the constant mode is pinned by adding the mean projector.
inline std::vector<std::complex<double>> discrete_mode_mu(const Mat& A, const Mat& J, double length, int n) {
  const Mat L = neumann_laplacian(length, n);
  const Mat dA = A.diagonal().asDiagonal();
  const Mat E = kron(Mat::Identity(A.rows(), A.rows()), Mat::Constant(n, n, 1.0 / n));
  const Mat lhs = kron(dA, L) + E;
  const Mat rhs = kron(dA - A, L) + kron(J, Mat::Identity(n, n));
  Eigen::EigenSolver<Mat> es(lhs.partialPivLu().solve(rhs), false);
  std::vector<std::complex<double>> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

/// SKT data written out directly from the defining formulas.
struct Skt {
  Vec d;
  Mat alpha;
  Vec r;
  Mat c;

  int m() const { return static_cast<int>(d.size()); }
  Vec P(const Vec& u) const { return u.cwiseProduct(d + alpha * u); }
  Vec f(const Vec& u) const { return u.cwiseProduct(r - c * u); }
  Mat A(const Vec& u) const {
    const int n = m();
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) {
          double s = d(i) + 2.0 * alpha(i, i) * u(i);
          for (int k = 0; k < n; ++k)
            if (k != i) s += alpha(i, k) * u(k);
          a(i, i) = s;
        } else {
          a(i, j) = alpha(i, j) * u(i);
        }
      }
    return a;
  }
  /// d^2 P_i / du_k du_l.
  double P2(int i, int k, int l) const {
    if (k == i && l == i) return 2.0 * alpha(i, i);
    if (k == i) return alpha(i, l);
    if (l == i) return alpha(i, k);
    return 0.0;
  }
};

/// s(x) such that u solves -(P(u))'' - f(u) = s, given u, u', u''.
inline Vec manufactured_source(const Skt& s, const Vec& u, const Vec& du, const Vec& d2u) {
  const int n = s.m();
  const Mat A = s.A(u);
  Vec p2 = A * d2u;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) p2(i) += s.P2(i, k, l) * du(k) * du(l);
  return -p2 - s.f(u);
}

/// 2x2 linear solve by Cramer's rule.
inline Eigen::Vector2d cramer(const Eigen::Matrix2d& M, const Eigen::Vector2d& b) {
  const double det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
  return {(b(0) * M(1, 1) - M(0, 1) * b(1)) / det, (M(0, 0) * b(1) - M(1, 0) * b(0)) / det};
}

/// Parity of sum over k >= 1 of #{real negative eigenvalues of d_A^{-1}(A - J / k^2)},
/// counting through det(k^2 A - J) sign changes in the diagonal case only.
inline int diagonal_case_gamma(const Vec& a, const Vec& j, double length, int kmax) {
  int gamma = 0;
  for (int k = 1; k <= kmax; ++k) {
    const double lam = (k * M_PI / length) * (k * M_PI / length);
    for (Eigen::Index i = 0; i < a.size(); ++i)
      if (a(i) - j(i) / lam < 0.0) ++gamma;
  }
  return gamma;
}

/// Deterministic generator for property tests.
class Gen {
 public:
  explicit Gen(unsigned long long seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  Vec vec(int n, double lo, double hi) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = uniform(lo, hi);
    return v;
  }
  Mat mat(int n, double lo, double hi) {
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = uniform(lo, hi);
    return a;
  }
  /// Strictly row-diagonally dominant with log-uniform positive diagonal in [0.05, 2.5].
  Mat dominant(int n) {
    Mat a(n, n);
    for (int i = 0; i < n; ++i) {
      a(i, i) = std::exp(uniform(std::log(0.05), std::log(2.5)));
      for (int j = 0; j < n; ++j)
        if (j != i) a(i, j) = uniform(-0.9, 0.9) * a(i, i) / (n - 1);
    }
    return a;
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle
