#include <doctest.h>

#include <cmath>

#include "crossdiff/diagnostics.hpp"
#include "crossdiff/error.hpp"
#include "crossdiff/pde_solver.hpp"
#include "oracles.hpp"

using namespace crossdiff;

namespace {

const Domain kPi = Domain::interval(M_PI);

DiscreteField sampled(const Grid& grid, double (*fn)(double)) {
  DiscreteField f(grid, 1);
  for (int a = 0; a < grid.nodes(); ++a) f.at(a, 0) = fn(grid.coordinates(a)[0]);
  return f;
}

Model logistic(const Domain& d, double diff = 1.0) {
  return Model(Vector::Constant(1, diff), Matrix::Zero(1, 1), Vector::Ones(1), Matrix::Ones(1, 1), d,
               BoundaryCondition::Neumann);
}

}  // namespace

TEST_CASE("norms of a constant and of cos x") {
  const Grid grid(kPi, 256);
  const FieldNorms c = norms(DiscreteField::constant(grid, Vector::Constant(1, 3.0)));
  CHECK(c.grad_l2 == 0.0);
  CHECK(c.grad_ln == 0.0);
  CHECK(c.l1 == doctest::Approx(3.0 * M_PI));
  const FieldNorms n = norms(sampled(grid, [](double x) { return std::cos(x); }));
  CHECK(n.grad_l2 * n.grad_l2 == doctest::Approx(M_PI / 2).epsilon(1e-3));
  CHECK(n.l1 == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("gradient quadrature converges at second order") {
  std::vector<double> err;
  for (int n : {32, 64, 128}) {
    const FieldNorms f = norms(sampled(Grid(kPi, n), [](double x) { return std::cos(x); }));
    err.push_back(std::abs(f.grad_l2 * f.grad_l2 - M_PI / 2));
  }
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.25));
  CHECK(err[1] / err[2] == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("BMO of a unit step") {
  const Grid grid(kPi, 200);
  const DiscreteField step = sampled(grid, [](double x) { return x < M_PI / 2 ? 0.0 : 1.0; });
  CHECK(bmo_seminorm(step, 1.0) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(bmo_seminorm(DiscreteField::constant(grid, Vector::Constant(1, 2.0)), 1.0) == 0.0);
}

TEST_CASE("BMO radii and the unresolvable ball") {
  const Grid grid(Domain::interval(1.0), 100);
  const std::vector<double> r = bmo_radii(grid, 0.1);
  REQUIRE(r.size() == 4);
  CHECK(r[0] == doctest::Approx(0.02));
  CHECK(r[2] == doctest::Approx(0.08));
  CHECK(r[3] == doctest::Approx(0.1));
  const DiscreteField f = DiscreteField::constant(grid, Vector::Ones(1));
  try {
    bmo_seminorm(f, 0.015);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("unresolvable ball") != std::string::npos);
  }
}

TEST_CASE("logistic nonexistence threshold") {
  const NonexistenceThreshold t = nonexistence_threshold(logistic(kPi), Vector::Zero(1), Vector::Constant(1, 2.0));
  CHECK(t.F_star == doctest::Approx(3.0));
  CHECK(t.B_star == 0.0);
  CHECK(t.diameter == doctest::Approx(M_PI));
  CHECK(t.threshold == doctest::Approx(3 * M_PI * M_PI));
  CHECK_FALSE(t.statement.empty());

  const NonexistenceThreshold doubled =
      nonexistence_threshold(logistic(Domain::interval(2 * M_PI)), Vector::Zero(1), Vector::Constant(1, 2.0));
  CHECK(doubled.threshold == doctest::Approx(4 * t.threshold));

  const Model none(Vector::Ones(2), Matrix::Zero(2, 2), Vector::Zero(2), Matrix::Zero(2, 2), kPi,
                   BoundaryCondition::Neumann);
  CHECK(nonexistence_threshold(none, Vector::Zero(2), Vector::Ones(2)).threshold == 0.0);

  CHECK_THROWS_AS(nonexistence_threshold(logistic(kPi), Vector::Constant(1, 1.0), Vector::Zero(1)), ConfigError);
}

TEST_CASE("identity residuals") {
  const Grid grid(kPi, 32);
  const IdentityResiduals exact = identity_residuals(logistic(kPi), DiscreteField::constant(grid, Vector::Ones(1)));
  CHECK(exact.mass < 1e-14);
  CHECK(exact.energy < 1e-14);
  CHECK(exact.is_solution);
  CHECK(exact.flags.empty());

  const IdentityResiduals bad = identity_residuals(logistic(kPi), sampled(grid, [](double x) { return 1 + std::cos(x); }));
  CHECK_FALSE(bad.is_solution);
  REQUIRE_FALSE(bad.flags.empty());
  CHECK(bad.flags[0] == "not a solution");
}

TEST_CASE("diagnose a converged constant") {
  const Grid grid(kPi, 32);
  const DiagnosticsReport d = diagnose(logistic(kPi), DiscreteField::constant(grid, Vector::Ones(1)), 0.5, 2.0);
  CHECK(d.grad_l2 == 0.0);
  CHECK(d.bmo_sup == 0.0);
  CHECK(d.lambda_bmo_product == 0.0);
  CHECK(d.positivity_min == 1.0);
  CHECK(d.l1_norm == doctest::Approx(M_PI));
}

TEST_CASE("property: BMO shift invariance, homogeneity and oscillation bound") {
  oracle::Gen gen(71);
  for (int t = 0; t < 20; ++t) {
    const bool two_d = gen.integer(0, 1) == 1;
    const Grid grid(two_d ? Domain::rectangle(1.0, 1.5) : Domain::interval(2.0), two_d ? 12 : 60);
    const int m = gen.integer(1, 3);
    const DiscreteField f = random_field(grid, m, 300 + t, -1.0, 1.0);
    const double R = gen.uniform(2.0, 5.0) * std::max(grid.h(0), grid.h(1));
    const double base = bmo_seminorm(f, R);
    DiscreteField shifted = f;
    const Vector c = gen.vec(m, -5.0, 5.0);
    for (int a = 0; a < grid.nodes(); ++a)
      for (int i = 0; i < m; ++i) shifted.at(a, i) += c(i);
    CHECK(bmo_seminorm(shifted, R) == doctest::Approx(base).epsilon(1e-10));
    const double s = gen.uniform(0.1, 10.0);
    const DiscreteField scaled(grid, m, s * f.values());
    CHECK(bmo_seminorm(scaled, R) == doctest::Approx(s * base).epsilon(1e-10));
    CHECK(base <= 2.0 * std::sqrt(double(m)) * f.values().cwiseAbs().maxCoeff() + 1e-12);
  }
}

TEST_CASE("property: norms are invariant under reflecting the grid") {
  oracle::Gen gen(72);
  for (int t = 0; t < 10; ++t) {
    const Grid grid(Domain::rectangle(1.0, 2.0), 10);
    const DiscreteField f = random_field(grid, 2, 400 + t, 0.0, 1.0);
    DiscreteField g(grid, 2);
    for (int iy = 0; iy < 10; ++iy)
      for (int ix = 0; ix < 10; ++ix)
        for (int i = 0; i < 2; ++i) g.at(grid.index(9 - ix, iy), i) = f.at(grid.index(ix, iy), i);
    const FieldNorms a = norms(f), b = norms(g);
    CHECK(a.l1 == doctest::Approx(b.l1));
    CHECK(a.grad_l2 == doctest::Approx(b.grad_l2));
    CHECK(a.grad_ln == doctest::Approx(b.grad_ln));
    CHECK(bmo_seminorm(f, 0.5) == doctest::Approx(bmo_seminorm(g, 0.5)));
  }
}
