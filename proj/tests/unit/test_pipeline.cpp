#include <doctest.h>

#include "crossdiff/error.hpp"
#include "crossdiff/pipeline.hpp"

using namespace crossdiff;

namespace {

Model lv(const Vector& r, const Matrix& c) {
  return Model(Vector::Ones(2), Matrix::Zero(2, 2), r, c, Domain::interval(M_PI), BoundaryCondition::Neumann);
}

Model weak() { return lv(Vector::Ones(2), (Matrix(2, 2) << 1, 0.5, 0.3, 1).finished()); }

RunOptions quick() {
  RunOptions o;
  o.grid = 16;
  o.structure_samples = 32;
  return o;
}

}  // namespace

TEST_CASE("with_parameter paths are 1-based") {
  const Model m = weak();
  CHECK(with_parameter(m, "d.2", 3.0).d()(1) == 3.0);
  CHECK(with_parameter(m, "alpha.1.2", 4.0).alpha()(0, 1) == 4.0);
  CHECK(with_parameter(m, "r.1", -1.0).r()(0) == -1.0);
  CHECK(with_parameter(m, "c.2.1", 0.7).c()(1, 0) == 0.7);
  CHECK(with_parameter(m, "domain.length.1", 2.0).domain().lengths[0] == 2.0);
  CHECK_THROWS_AS(with_parameter(m, "d.3", 1.0), ConfigError);
  CHECK_THROWS_AS(with_parameter(m, "d.0", 1.0), ConfigError);
  CHECK_THROWS_AS(with_parameter(m, "beta.1", 1.0), ConfigError);
  CHECK_THROWS_AS(with_parameter(m, "d.1", -1.0), ConfigError);
}

TEST_CASE("analyze exit codes and verdict text") {
  const RunOutput ok = run_analyze(weak(), quick());
  CHECK(ok.exit_code == kExitOk);
  CHECK(ok.report["schema_version"] == kSchemaVersion);
  CHECK(ok.report["verdict"]["statement"].get<std::string>().rfind("nontrivial positive solution exists (case a)", 0) == 0);
  CHECK(ok.summary.find("case a") != std::string::npos);
  CHECK_FALSE(ok.report.contains("timings"));

  const RunOutput sing = run_analyze(lv(Vector::Ones(2), Matrix::Ones(2, 2)), quick());
  CHECK(sing.exit_code == kExitInconclusive);
  CHECK(sing.report["degenerate_subsets"].size() == 1);
}

TEST_CASE("non-Neumann analysis degrades with a notice") {
  const RunOutput r = run_analyze(weak().with_bc(BoundaryCondition::Dirichlet), quick());
  CHECK(r.exit_code == kExitOk);
  CHECK_FALSE(r.report["notices"].empty());
}

TEST_CASE("solve from a constant seed") {
  RunOptions o = quick();
  o.seed_constant = (Vector(2) << 1, 1).finished();
  const RunOutput r = run_solve(lv(Vector::Ones(2), Matrix::Identity(2, 2)), o);
  CHECK(r.exit_code == kExitOk);
  CHECK(r.report["solve"]["classification"] == "nontrivial-constant");
  CHECK(r.csv.rfind("x,u_1,u_2", 0) == 0);
}

TEST_CASE("solve rejects coarse grids and bad seeds") {
  RunOptions o = quick();
  o.grid = 4;
  CHECK_THROWS_AS(run_solve(weak(), o), ConfigError);
  o = quick();
  o.seed_constant = Vector::Ones(3);
  CHECK_THROWS_AS(run_solve(weak(), o), ConfigError);
}

TEST_CASE("reports are byte-stable") {
  RunOptions o = quick();
  o.seed_random = 4;
  const RunOutput a = run_solve(weak(), o), b = run_solve(weak(), o);
  CHECK(a.report.dump() == b.report.dump());
  CHECK(a.csv == b.csv);
}

TEST_CASE("sweep rows follow the input order") {
  SweepSpec spec;
  spec.param = "c.2.1";
  spec.values = {0.9, 0.1, 1.5, 0.3, 2.0, 0.0};
  const RunOutput r = run_sweep(weak(), spec, quick());
  REQUIRE(r.report["rows"].size() == spec.values.size());
  for (std::size_t i = 0; i < spec.values.size(); ++i) CHECK(r.report["rows"][i]["value"].get<double>() == spec.values[i]);
  CHECK(r.csv.rfind("parameter,value,case,predicts_nonconstant,inconclusive,classification,grad_l2,residual\n", 0) == 0);
  CHECK(std::count(r.csv.begin(), r.csv.end(), '\n') == static_cast<long>(spec.values.size() + 1));
  const RunOutput again = run_sweep(weak(), spec, quick());
  CHECK(again.csv == r.csv);
}

TEST_CASE("sweep with solves") {
  SweepSpec spec;
  spec.param = "d.1";
  spec.values = {0.5, 2.0};
  spec.solve = true;
  const RunOutput r = run_sweep(weak(), spec, quick());
  for (const auto& row : r.report["rows"]) CHECK(row.contains("solve"));
}
