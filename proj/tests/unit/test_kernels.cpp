#include <doctest.h>

#include <Eigen/SparseCore>

#include "crossdiff/kernels.hpp"
#include "oracles.hpp"

using namespace crossdiff;

namespace {

Eigen::SparseMatrix<double> assemble(const std::vector<Triplet>& t, Eigen::Index n) {
  Eigen::SparseMatrix<double> M(n, n);
  M.setFromTriplets(t.begin(), t.end());
  return M;
}

Model random_model(oracle::Gen& gen, int m, const Domain& d, BoundaryCondition bc) {
  return Model(gen.vec(m, 0.1, 1.0), gen.mat(m, 0.0, 1.0), gen.vec(m, -1.0, 1.0), gen.mat(m, -1.0, 1.0), d, bc);
}

}  // namespace

TEST_CASE("property: parallel kernels agree with the serial references") {
  oracle::Gen gen(51);
  const std::pair<Domain, int> shapes[] = {{Domain::interval(2.0), 37}, {Domain::rectangle(1.0, 1.7), 13}};
  for (const auto& [domain, n] : shapes)
    for (BoundaryCondition bc : {BoundaryCondition::Neumann, BoundaryCondition::Dirichlet})
      for (int trial = 0; trial < 4; ++trial) {
        const int m = gen.integer(1, 3);
        const Model model = random_model(gen, m, domain, bc);
        const Grid grid(domain, n);
        const Vector u = random_field(grid, m, 100 + trial, 0.0, 2.0).values();
        const Vector src = gen.vec(static_cast<int>(u.size()), -1.0, 1.0);
        ResidualParams p;
        p.reaction_scale = gen.uniform(0.0, 1.0);
        p.shift = gen.uniform(-1.0, 0.0);
        p.source = &src;
        const Vector a = kernels::residual(model, grid, u, p), b = kernels::residual_serial(model, grid, u, p);
        CHECK((a - b).norm() <= 1e-11 * (1.0 + b.norm()));
        const auto Ja = assemble(kernels::jacobian_triplets(model, grid, u, p), u.size());
        const auto Jb = assemble(kernels::jacobian_triplets_serial(model, grid, u, p), u.size());
        CHECK((Ja - Jb).norm() <= 1e-11 * (1.0 + Jb.norm()));
        const std::vector<double> radii{2.0 * grid.h(0), 4.0 * grid.h(0), 0.5};
        CHECK(kernels::bmo_scan(grid, m, u, radii) == doctest::Approx(kernels::bmo_scan_serial(grid, m, u, radii)).epsilon(1e-12));
      }
}

TEST_CASE("property: Jacobian matches finite differences of the residual") {
  oracle::Gen gen(52);
  for (BoundaryCondition bc : {BoundaryCondition::Neumann, BoundaryCondition::Dirichlet})
    for (const Domain& domain : {Domain::interval(1.5), Domain::rectangle(1.0, 1.3)}) {
      const int m = 2;
      const Model model = random_model(gen, m, domain, bc);
      const Grid grid(domain, domain.dimension() == 1 ? 12 : 6);
      const Vector u = random_field(grid, m, 7, 0.2, 1.5).values();
      ResidualParams p;
      p.shift = -0.3;
      const auto J = Eigen::MatrixXd(assemble(kernels::jacobian_triplets(model, grid, u, p), u.size()));
      const double h = 1e-6;
      Eigen::MatrixXd fd(u.size(), u.size());
      for (Eigen::Index k = 0; k < u.size(); ++k) {
        Vector up = u, dn = u;
        up(k) += h;
        dn(k) -= h;
        fd.col(k) = (kernels::residual(model, grid, up, p) - kernels::residual(model, grid, dn, p)) / (2 * h);
      }
      CHECK((J - fd).norm() <= 1e-5 * (1.0 + fd.norm()));
    }
}
