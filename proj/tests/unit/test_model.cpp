#include <doctest.h>

#include "crossdiff/error.hpp"
#include "crossdiff/model.hpp"
#include "oracles.hpp"

using namespace crossdiff;

namespace {

nlohmann::json base_config() {
  return nlohmann::json::parse(R"({
    "m": 2, "d": [0.05, 1.0], "alpha": [[0, 0], [0, 0]], "r": [1, 1],
    "c": [[1, 0.5], [0.3, 1]], "domain": {"kind": "interval", "lengths": [3.141592653589793]},
    "bc": "neumann"})");
}

Model skt(const Vector& d, const Matrix& alpha, const Vector& r, const Matrix& c) {
  return Model(d, alpha, r, c, Domain::interval(M_PI), BoundaryCondition::Neumann);
}

oracle::Skt as_oracle(const Model& m) { return {m.d(), m.alpha(), m.r(), m.c()}; }

}  // namespace

TEST_CASE("diagonal model has constant A") {
  const Model m = build_model(base_config());
  for (const Vector& u : {Vector(Vector::Zero(2)), Vector(Vector::Constant(2, 3.0)), Vector((Vector(2) << 0.2, 7.0).finished())}) {
    const Matrix A = m.A(u);
    CHECK(A(0, 0) == 0.05);
    CHECK(A(1, 1) == 1.0);
    CHECK(A(0, 1) == 0.0);
    CHECK(A(1, 0) == 0.0);
  }
}

TEST_CASE("cross term derivative by hand") {
  Matrix alpha = Matrix::Zero(2, 2);
  alpha(0, 1) = 3.0;
  const Model m = skt(Vector::Ones(2), alpha, Vector::Ones(2), Matrix::Identity(2, 2));
  const Vector u = (Vector(2) << 0.7, 1.9).finished();
  const Matrix A = m.A(u);
  CHECK(A(0, 1) == doctest::Approx(3.0 * 0.7));
  CHECK(A(0, 0) == doctest::Approx(1.0 + 3.0 * 1.9));
}

TEST_CASE("a_11 with self and cross diffusion") {
  const Matrix alpha = (Matrix(2, 2) << 1, 2, 0, 1).finished();
  const Model m = skt(Vector::Ones(2), alpha, Vector::Ones(2), Matrix::Identity(2, 2));
  const Vector u = (Vector(2) << 1, 2).finished();
  CHECK(m.A(u)(0, 0) == doctest::Approx(7.0));
  CHECK(as_oracle(m).A(u)(0, 0) == doctest::Approx(7.0));
}

TEST_CASE("evaluate at trivial and semitrivial states") {
  const Model m = build_model(base_config());
  const Evaluation e0 = m.evaluate(Vector::Zero(2));
  CHECK(e0.f.isZero(0.0));
  CHECK(e0.J.isApprox(Matrix::Identity(2, 2)));
  const Evaluation e1 = m.evaluate((Vector(2) << 1, 0).finished());
  CHECK(e1.f(0) == 0.0);
  CHECK(e1.f(1) == 0.0);
}

TEST_CASE("config errors") {
  auto expect_error = [](nlohmann::json cfg, const std::string& needle) {
    try {
      build_model(cfg);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
    }
  };
  auto cfg = base_config();
  cfg["d"] = {0.0, 1.0};
  expect_error(cfg, "d_i must be positive");
  cfg = base_config();
  cfg["alpha"] = {{0, -1}, {0, 0}};
  expect_error(cfg, "nonnegative");
  cfg = base_config();
  cfg["r"] = {1, 1, 1};
  expect_error(cfg, "shape mismatch");
  cfg = base_config();
  cfg["extra"] = 1;
  expect_error(cfg, "unknown key");
  cfg = base_config();
  cfg["domain"]["kind"] = "disk";
  expect_error(cfg, "domain.kind");
  cfg = base_config();
  cfg["bc"] = "robin";
  expect_error(cfg, "bc");
  cfg = base_config();
  cfg.erase("c");
  expect_error(cfg, "missing key");
}

TEST_CASE("model round-trips through its JSON echo") {
  const Model m = build_model(base_config());
  const Model back = build_model(nlohmann::json::parse(model_to_json(m).dump()));
  CHECK(back.d() == m.d());
  CHECK(back.c() == m.c());
  CHECK(back.domain().lengths == m.domain().lengths);
}

TEST_CASE("structure report on the diagonal model") {
  const Model m = build_model(base_config());
  const StructureReport s = validate_structure(m, Vector::Zero(2), Vector::Constant(2, 2.0), 64);
  CHECK(s.lambda_floor == doctest::Approx(0.05));
  CHECK(s.sg_check == CheckStatus::Vacuous);
  CHECK(s.ellipticity == CheckStatus::Pass);
  CHECK(s.failed_samples == 0);
}

TEST_CASE("growth exponent of an affine ellipticity floor") {
  // Scalar P = u (1 + u): lambda(u) = 1 + 2u grows like (1 + u)^1.
  const Model m(Vector::Ones(1), Matrix::Constant(1, 1, 1.0), Vector::Ones(1), Matrix::Ones(1, 1),
                Domain::interval(M_PI), BoundaryCondition::Neumann);
  const StructureReport s = validate_structure(m, Vector::Zero(1), Vector::Constant(1, 50.0), 256);
  CHECK(s.growth_exponent == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("cross diffusion can make sym(A) indefinite on the orthant") {
  // a_12 = 40 u_1 with u_2 = 0: sym(A) has off-diagonal 20 u_1 and diagonal (1, 1).
  Matrix alpha = Matrix::Zero(2, 2);
  alpha(0, 1) = 40.0;
  const Model m = skt(Vector::Ones(2), alpha, Vector::Ones(2), Matrix::Identity(2, 2));
  const Vector u = (Vector(2) << 1.0, 0.0).finished();
  CHECK(ellipticity(m, u) < m.d().minCoeff());
  const StructureReport s = validate_structure(m, Vector::Zero(2), Vector::Constant(2, 1.0), 64);
  CHECK(s.ellipticity == CheckStatus::Fail);
  CHECK(s.failed_samples > 0);
}

TEST_CASE("property: A and J match finite differences of P and f") {
  oracle::Gen gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = gen.integer(1, 4);
    const Model m = skt(gen.vec(n, 0.1, 2.0), gen.mat(n, 0.0, 1.5), gen.vec(n, -1.0, 1.0), gen.mat(n, -1.0, 1.0));
    const Vector u = gen.vec(n, -1.0, 3.0);
    const double h = 1e-6;
    Matrix Afd(n, n), Jfd(n, n);
    for (int k = 0; k < n; ++k) {
      Vector up = u, dn = u;
      up(k) += h;
      dn(k) -= h;
      Afd.col(k) = (m.P(up) - m.P(dn)) / (2 * h);
      Jfd.col(k) = (m.f(up) - m.f(dn)) / (2 * h);
    }
    CHECK((m.A(u) - Afd).norm() < 1e-6);
    CHECK((m.J(u) - Jfd).norm() < 1e-6);
    CHECK((m.A(u) - as_oracle(m).A(u)).norm() < 1e-13);
  }
}

TEST_CASE("property: sym(A) floor for self-diffusion models on the orthant") {
  oracle::Gen gen(12);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = gen.integer(1, 4);
    const Matrix alpha = gen.vec(n, 0.0, 2.0).asDiagonal();
    const Model m = skt(gen.vec(n, 0.1, 2.0), alpha, gen.vec(n, 0.0, 1.0), Matrix::Identity(n, n));
    const Vector u = gen.vec(n, 0.0, 5.0);
    CHECK(ellipticity(m, u) >= m.d().minCoeff() - 1e-12);
  }
}

TEST_CASE("property: cross-diffusion form and reaction identities") {
  oracle::Gen gen(13);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = gen.integer(2, 4);
    const Model m = skt(gen.vec(n, 0.1, 2.0), gen.mat(n, 0.0, 1.5), gen.vec(n, -1.0, 1.0), gen.mat(n, -1.0, 1.0));
    Vector u = gen.vec(n, 0.1, 3.0);
    const int i = gen.integer(0, n - 1);
    int j = gen.integer(0, n - 2);
    if (j >= i) ++j;
    const double ratio = m.A(u)(i, j) / u(i);
    u(i) *= 2.7;
    CHECK(m.A(u)(i, j) / u(i) == doctest::Approx(ratio));
    CHECK(m.f(Vector::Zero(n)).isZero(0.0));
    CHECK(m.J(Vector::Zero(n)) == Matrix(m.r().asDiagonal()));
    const Evaluation a = m.evaluate(u), b = m.evaluate(u);
    CHECK(a.A == b.A);
    CHECK(a.J == b.J);
  }
}
