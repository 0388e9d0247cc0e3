#include <doctest.h>

#include "crossdiff/error.hpp"
#include "crossdiff/steady_states.hpp"
#include "oracles.hpp"

using namespace crossdiff;

namespace {

Model lv(const Vector& r, const Matrix& c, int m = 2) {
  return Model(Vector::Ones(m), Matrix::Zero(m, m), r, c, Domain::interval(M_PI), BoundaryCondition::Neumann);
}

Model weak() { return lv(Vector::Ones(2), (Matrix(2, 2) << 1, 0.5, 0.3, 1).finished()); }

}  // namespace

TEST_CASE("weak competition states") {
  const SteadyStateSet s = find_constant_states(weak());
  REQUIRE(s.states.size() == 4);
  CHECK(s.degenerate.empty());
  CHECK(s.states[0].u_star.isZero(0.0));
  CHECK(s.states[0].classification == StateClass::Trivial);
  CHECK(s.states[1].u_star.isApprox((Vector(2) << 1, 0).finished()));
  CHECK(s.states[1].u_star(1) == 0.0);
  CHECK(s.states[2].u_star.isApprox((Vector(2) << 0, 1).finished()));
  CHECK(s.states[1].classification == StateClass::Semitrivial);
  const Eigen::Vector2d exact = oracle::cramer((Eigen::Matrix2d() << 1, 0.5, 0.3, 1).finished(), {1, 1});
  CHECK(exact(0) == doctest::Approx(10.0 / 17.0));
  CHECK(exact(1) == doctest::Approx(14.0 / 17.0));
  CHECK(std::abs(s.states[3].u_star(0) - 10.0 / 17.0) < 1e-14);
  CHECK(std::abs(s.states[3].u_star(1) - 14.0 / 17.0) < 1e-14);
  CHECK(s.states[3].classification == StateClass::Nontrivial);
  CHECK(s.states[3].support == 3u);
}

TEST_CASE("decoupled logistic pair") {
  const SteadyStateSet s = find_constant_states(lv(Vector::Ones(2), Matrix::Identity(2, 2)));
  REQUIRE(s.states.size() == 4);
  CHECK(s.states[3].u_star.isApprox(Vector::Ones(2)));
}

TEST_CASE("singular interaction flags the coexistence subset") {
  const SteadyStateSet s = find_constant_states(lv(Vector::Ones(2), Matrix::Ones(2, 2)));
  REQUIRE(s.degenerate.size() == 1);
  CHECK(s.degenerate[0].support == 3u);
  CHECK(s.states.size() == 3);
}

TEST_CASE("negative growth leaves only the trivial state") {
  const SteadyStateSet s = find_constant_states(lv(-Vector::Ones(2), (Matrix(2, 2) << 1, 0.5, 0.3, 1).finished()));
  REQUIRE(s.states.size() == 1);
  CHECK(s.states[0].classification == StateClass::Trivial);
}

TEST_CASE("refine_root") {
  const ConstantState s = refine_root(weak(), 3u, (Vector(2) << 0.6, 0.8).finished());
  CHECK(std::abs(s.u_star(0) - 10.0 / 17.0) < 1e-12);
  CHECK(std::abs(s.u_star(1) - 14.0 / 17.0) < 1e-12);
  CHECK(s.residual <= 1e-12);

  const Vector e1 = (Vector(2) << 1, 0).finished();
  const ConstantState t = refine_root(weak(), 1u, e1);
  CHECK(t.u_star == e1);

  CHECK_THROWS_AS(refine_root(lv(Vector::Ones(2), Matrix::Ones(2, 2)), 3u, (Vector(2) << 0.3, 0.3).finished()),
                  SolverError);
  CHECK_THROWS_AS(refine_root(weak(), 1u, (Vector(2) << 1, 0.3).finished()), SolverError);
}

TEST_CASE("property: enumeration matches brute-force subset solves") {
  oracle::Gen gen(21);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = gen.integer(1, 4);
    const Model model = lv(gen.vec(m, -0.5, 1.5), gen.mat(m, -0.5, 1.5), m);
    const SteadyStateSet s = find_constant_states(model);
    CHECK(s.states.size() <= (1u << m));
    std::vector<Vector> expected;
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      std::vector<int> idx;
      for (int i = 0; i < m; ++i)
        if ((mask >> i) & 1u) idx.push_back(i);
      const int k = static_cast<int>(idx.size());
      Vector u = Vector::Zero(m);
      if (k > 0) {
        Matrix cs(k, k);
        Vector rs(k);
        for (int a = 0; a < k; ++a) {
          rs(a) = model.r()(idx[a]);
          for (int b = 0; b < k; ++b) cs(a, b) = model.c()(idx[a], idx[b]);
        }
        Eigen::FullPivLU<Matrix> lu(cs);
        if (lu.rank() < k) continue;
        const Vector us = lu.solve(rs);
        if ((us.array() <= 1e-10).any()) continue;
        for (int a = 0; a < k; ++a) u(idx[a]) = us(a);
      }
      expected.push_back(u);
    }
    bool any_degenerate = !s.degenerate.empty();
    if (!any_degenerate) REQUIRE(s.states.size() == expected.size());
    for (const ConstantState& st : s.states) {
      CHECK(model.f(st.u_star).lpNorm<Eigen::Infinity>() <= 1e-12);
      for (int i = 0; i < m; ++i)
        if (!((st.support >> i) & 1u)) CHECK(st.u_star(i) == 0.0);
      bool found = false;
      for (const Vector& e : expected) found = found || (e - st.u_star).norm() < 1e-9;
      CHECK(found);
    }
    CHECK(s.states.front().u_star.isZero(0.0));
    for (std::size_t i = 1; i < s.states.size(); ++i) CHECK(s.states[i - 1].support < s.states[i].support);
  }
}
