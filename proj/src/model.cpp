#include "crossdiff/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "crossdiff/error.hpp"

namespace crossdiff {

using nlohmann::json;

Domain Domain::interval(double length) { return Domain{Kind::Interval, {length}}; }

Domain Domain::rectangle(double l1, double l2) { return Domain{Kind::Rectangle, {l1, l2}}; }

double Domain::diameter() const {
  double s = 0.0;
  for (double l : lengths) s += l * l;
  return std::sqrt(s);
}

double Domain::measure() const {
  double v = 1.0;
  for (double l : lengths) v *= l;
  return v;
}

Domain Domain::scaled(double s) const {
  Domain out = *this;
  for (double& l : out.lengths) l *= s;
  return out;
}

std::string to_string(Domain::Kind kind) {
  return kind == Domain::Kind::Interval ? "interval" : "rectangle";
}

std::string to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::Neumann ? "neumann" : "dirichlet";
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Vacuous: return "vacuous";
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
  }
  return "unknown";
}

Model::Model(Vector d, Matrix alpha, Vector r, Matrix c, Domain domain, BoundaryCondition bc)
    : d_(std::move(d)),
      alpha_(std::move(alpha)),
      r_(std::move(r)),
      c_(std::move(c)),
      domain_(std::move(domain)),
      bc_(bc) {
  const Eigen::Index m = d_.size();
  if (m < 1) throw ConfigError("m must be at least 1");
  if (alpha_.rows() != m || alpha_.cols() != m) throw ConfigError("alpha must be m x m");
  if (r_.size() != m) throw ConfigError("r must have m entries");
  if (c_.rows() != m || c_.cols() != m) throw ConfigError("c must be m x m");
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!(d_(i) > 0.0)) throw ConfigError("d_i must be positive");
  }
  if (!alpha_.allFinite() || !r_.allFinite() || !c_.allFinite() || !d_.allFinite())
    throw ConfigError("coefficients must be finite");
  if ((alpha_.array() < 0.0).any()) throw ConfigError("alpha_ij must be nonnegative");

  const bool interval = domain_.kind == Domain::Kind::Interval;
  if (domain_.lengths.size() != (interval ? 1u : 2u))
    throw ConfigError("domain lengths do not match domain kind");
  for (double l : domain_.lengths)
    if (!(l > 0.0) || !std::isfinite(l)) throw ConfigError("domain lengths must be positive");

  // dA_ij/du_k: a_ii = d_i + 2 alpha_ii u_i + sum_{j!=i} alpha_ij u_j, a_ij = alpha_ij u_i.
  dA_.assign(static_cast<std::size_t>(m), Matrix::Zero(m, m));
  for (Eigen::Index k = 0; k < m; ++k) {
    Matrix& D = dA_[static_cast<std::size_t>(k)];
    for (Eigen::Index i = 0; i < m; ++i) {
      D(i, i) = (i == k) ? 2.0 * alpha_(i, i) : alpha_(i, k);
      if (i == k) {
        for (Eigen::Index j = 0; j < m; ++j)
          if (j != i) D(i, j) = alpha_(i, j);
      }
    }
  }
}

Vector Model::P(const Vector& u) const {
  return u.cwiseProduct(d_ + alpha_ * u);
}

Matrix Model::A(const Vector& u) const {
  const Eigen::Index m = d_.size();
  Matrix a(m, m);
  const Vector au = alpha_ * u;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) a(i, j) = u(i) * alpha_(i, j);
    a(i, i) = d_(i) + au(i) + alpha_(i, i) * u(i);
  }
  return a;
}

Vector Model::g(const Vector& u) const { return r_ - c_ * u; }

Vector Model::f(const Vector& u) const { return u.cwiseProduct(g(u)); }

Matrix Model::J(const Vector& u) const {
  Matrix j = -(u.asDiagonal() * c_);
  j.diagonal() += g(u);
  return j;
}

Evaluation Model::evaluate(const Vector& u) const { return Evaluation{A(u), f(u), J(u)}; }

Model Model::with_domain(Domain domain) const {
  return Model(d_, alpha_, r_, c_, std::move(domain), bc_);
}

Model Model::with_bc(BoundaryCondition bc) const { return Model(d_, alpha_, r_, c_, domain_, bc); }

Model Model::scaled(double a, double b) const {
  return Model(a * d_, a * alpha_, b * r_, b * c_, domain_, bc_);
}

Model Model::restricted(const std::vector<int>& support) const {
  const auto k = static_cast<Eigen::Index>(support.size());
  Vector d(k), r(k);
  Matrix al(k, k), c(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    d(a) = d_(support[a]);
    r(a) = r_(support[a]);
    for (Eigen::Index b = 0; b < k; ++b) {
      al(a, b) = alpha_(support[a], support[b]);
      c(a, b) = c_(support[a], support[b]);
    }
  }
  return Model(d, al, r, c, domain_, bc_);
}

Evaluation evaluate(const Model& model, const Vector& u) { return model.evaluate(u); }

namespace {

Vector read_vector(const json& j, const char* key, Eigen::Index m) {
  if (!j.is_array()) throw ConfigError(std::string(key) + " must be an array");
  if (static_cast<Eigen::Index>(j.size()) != m)
    throw ConfigError(std::string("shape mismatch: ") + key + " must have m entries");
  Vector v(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const json& e = j[static_cast<std::size_t>(i)];
    if (!e.is_number()) throw ConfigError(std::string(key) + " entries must be numbers");
    v(i) = e.get<double>();
  }
  return v;
}

// Row-major m x m, either nested [[..],[..]] or flat [.., ..].
Matrix read_matrix(const json& j, const char* key, Eigen::Index m) {
  if (!j.is_array()) throw ConfigError(std::string(key) + " must be an array");
  Matrix a(m, m);
  if (!j.empty() && j[0].is_array()) {
    if (static_cast<Eigen::Index>(j.size()) != m)
      throw ConfigError(std::string("shape mismatch: ") + key + " must have m rows");
    for (Eigen::Index i = 0; i < m; ++i) a.row(i) = read_vector(j[static_cast<std::size_t>(i)], key, m);
    return a;
  }
  if (static_cast<Eigen::Index>(j.size()) != m * m)
    throw ConfigError(std::string("shape mismatch: ") + key + " must have m*m entries");
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index k = 0; k < m; ++k) {
      const json& e = j[static_cast<std::size_t>(i * m + k)];
      if (!e.is_number()) throw ConfigError(std::string(key) + " entries must be numbers");
      a(i, k) = e.get<double>();
    }
  return a;
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

}  // namespace

Model build_model(const json& config) {
  if (!config.is_object()) throw ConfigError("config must be an object");
  reject_unknown(config, {"m", "d", "alpha", "r", "c", "domain", "bc"}, "config");
  for (const char* key : {"m", "d", "alpha", "r", "c", "domain", "bc"})
    if (!config.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");

  if (!config["m"].is_number_integer()) throw ConfigError("m must be an integer");
  const auto m = config["m"].get<long long>();
  if (m < 1) throw ConfigError("m must be at least 1");
  const auto mi = static_cast<Eigen::Index>(m);

  const json& dom = config["domain"];
  if (!dom.is_object()) throw ConfigError("domain must be an object");
  reject_unknown(dom, {"kind", "lengths"}, "domain");
  if (!dom.contains("kind") || !dom["kind"].is_string()) throw ConfigError("domain.kind must be a string");
  if (!dom.contains("lengths") || !dom["lengths"].is_array())
    throw ConfigError("domain.lengths must be an array");
  Domain domain;
  const auto kind = dom["kind"].get<std::string>();
  if (kind == "interval") {
    domain.kind = Domain::Kind::Interval;
  } else if (kind == "rectangle") {
    domain.kind = Domain::Kind::Rectangle;
  } else {
    throw ConfigError("domain.kind must be 'interval' or 'rectangle'");
  }
  domain.lengths.clear();
  for (const json& l : dom["lengths"]) {
    if (!l.is_number()) throw ConfigError("domain.lengths entries must be numbers");
    domain.lengths.push_back(l.get<double>());
  }

  if (!config["bc"].is_string()) throw ConfigError("bc must be a string");
  const auto bcs = config["bc"].get<std::string>();
  BoundaryCondition bc;
  if (bcs == "neumann") {
    bc = BoundaryCondition::Neumann;
  } else if (bcs == "dirichlet") {
    bc = BoundaryCondition::Dirichlet;
  } else {
    throw ConfigError("bc must be 'neumann' or 'dirichlet'");
  }

  return Model(read_vector(config["d"], "d", mi), read_matrix(config["alpha"], "alpha", mi),
               read_vector(config["r"], "r", mi), read_matrix(config["c"], "c", mi), domain, bc);
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return build_model(j);
}

nlohmann::ordered_json model_to_json(const Model& model) {
  nlohmann::ordered_json j;
  const int m = model.m();
  auto vec = [](const Vector& v) {
    std::vector<double> out(v.data(), v.data() + v.size());
    return out;
  };
  auto mat = [m](const Matrix& a) {
    std::vector<std::vector<double>> out(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < m; ++k) out[static_cast<std::size_t>(i)].push_back(a(i, k));
    return out;
  };
  j["m"] = m;
  j["d"] = vec(model.d());
  j["alpha"] = mat(model.alpha());
  j["r"] = vec(model.r());
  j["c"] = mat(model.c());
  j["domain"] = {{"kind", to_string(model.domain().kind)}, {"lengths", model.domain().lengths}};
  j["bc"] = to_string(model.bc());
  return j;
}

double ellipticity(const Model& model, const Vector& u) {
  const Matrix a = model.A(u);
  const Matrix s = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

StructureReport validate_structure(const Model& model, const Vector& box_lo, const Vector& box_hi,
                                   int samples, unsigned seed) {
  const int m = model.m();
  if (box_lo.size() != m || box_hi.size() != m) throw ConfigError("sampling box must have m bounds");
  if ((box_hi.array() < box_lo.array()).any()) throw ConfigError("sampling box is empty");
  if (samples < 1) throw ConfigError("samples must be at least 1");

  // Corners first (extremes of affine quantities), then uniform samples.
  std::vector<Vector> points;
  if (m <= 12) {
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      Vector u(m);
      for (int i = 0; i < m; ++i) u(i) = (mask >> i) & 1u ? box_hi(i) : box_lo(i);
      points.push_back(u);
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    Vector u(m);
    for (int i = 0; i < m; ++i) u(i) = box_lo(i) + unit(rng) * (box_hi(i) - box_lo(i));
    points.push_back(u);
  }

  StructureReport rep;
  rep.box_lo = box_lo;
  rep.box_hi = box_hi;
  rep.samples = static_cast<int>(points.size());
  rep.lambda_floor = std::numeric_limits<double>::infinity();

  std::vector<Matrix> dsym;
  for (int k = 0; k < m; ++k) dsym.push_back(0.5 * (model.dA(k) + model.dA(k).transpose()));

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int nfit = 0;
  for (const Vector& u : points) {
    const Matrix a = model.A(u);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.transpose()));
    const double lam = es.eigenvalues()(0);
    rep.lambda_floor = std::min(rep.lambda_floor, lam);
    if (!(lam > 0.0)) {
      ++rep.failed_samples;
      continue;
    }
    const double anorm = Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
    rep.c_star = std::max(rep.c_star, anorm / lam);

    const Vector v = es.eigenvectors().col(0);
    Vector grad(m);
    for (int k = 0; k < m; ++k) grad(k) = v.dot(dsym[static_cast<std::size_t>(k)] * v);
    rep.lambda_sup = std::max(rep.lambda_sup, grad.norm() / lam);

    const double x = std::log1p(u.norm());
    const double y = std::log(lam);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++nfit;
  }
  rep.ellipticity = rep.failed_samples == 0 ? CheckStatus::Pass : CheckStatus::Fail;

  const double denom = nfit * sxx - sx * sx;
  rep.growth_exponent = (nfit >= 2 && std::abs(denom) > 1e-300) ? (nfit * sxy - sx * sy) / denom : 0.0;

  const int n = model.domain().dimension();
  if (n <= 4) {
    rep.sg_check = CheckStatus::Vacuous;
  } else {
    const double limit = (n - 2.0) / (n - 4.0);
    rep.sg_check = rep.c_star < limit ? CheckStatus::Pass : CheckStatus::Fail;
  }
  return rep;
}

}  // namespace crossdiff
