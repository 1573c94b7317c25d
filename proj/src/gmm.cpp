#include "nakm/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Cholesky>

#include "nakm/seeding.hpp"

namespace nakm {

void GmmConfig::validate() const {
  if (k == 0 || d == 0) throw ConfigError("gmm: k and d must be positive");
  if (sizes.empty()) {
    if (alphas.size() != k) throw ConfigError("gmm: alphas must have k entries");
    double s = 0.0;
    for (double a : alphas) {
      if (!(a >= 0.0)) throw ConfigError("gmm: negative mixing weight");
      s += a;
    }
    if (std::abs(s - 1.0) > 1e-9) throw ConfigError("gmm: alphas must sum to one");
  } else if (sizes.size() != k) {
    throw ConfigError("gmm: sizes must have k entries");
  }
  if (means.size() != k || covariances.size() != k)
    throw ConfigError("gmm: need k means and k covariances");
  for (std::size_t j = 0; j < k; ++j) {
    if (means[j].size() != d) throw ConfigError("gmm: mean has wrong dimension");
    const Matrix& s = covariances[j];
    if (s.rows() != static_cast<Eigen::Index>(d) || s.cols() != static_cast<Eigen::Index>(d))
      throw ConfigError("gmm: covariance has wrong shape");
    if (!s.isApprox(s.transpose(), 1e-12)) throw ConfigError("gmm: covariance not symmetric");
  }
}

GmmConfig random_gmm_config(std::size_t k, std::size_t d, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> gamma(1.0, 1.0);
  std::uniform_real_distribution<double> unif(-10.0, 10.0);
  std::normal_distribution<double> normal;

  GmmConfig cfg;
  cfg.k = k;
  cfg.d = d;
  cfg.n = n;
  cfg.seed = derive_seed(seed, "gmm/sample");
  double total = 0.0;
  for (std::size_t j = 0; j < k; ++j) total += cfg.alphas.emplace_back(gamma(rng));
  for (double& a : cfg.alphas) a /= total;
  for (std::size_t j = 0; j < k; ++j) {
    Point mu(d);
    for (double& v : mu) v = unif(rng);
    cfg.means.push_back(std::move(mu));
  }
  for (std::size_t j = 0; j < k; ++j) {
    Matrix g(d, d);
    for (Eigen::Index r = 0; r < g.rows(); ++r)
      for (Eigen::Index c = 0; c < g.cols(); ++c) g(r, c) = normal(rng);
    Matrix s = g * g.transpose();
    s = 0.5 * (s + s.transpose()).eval();
    cfg.covariances.push_back(std::move(s));
  }
  return cfg;
}

GmmSample sample_gmm(const GmmConfig& cfg) {
  cfg.validate();
  std::vector<Matrix> chol;
  for (const auto& s : cfg.covariances) {
    Eigen::LLT<Eigen::MatrixXd> llt(s);
    if (llt.info() != Eigen::Success) throw ConfigError("gmm: covariance is not positive definite");
    chol.emplace_back(llt.matrixL());
  }

  std::mt19937_64 rng(cfg.seed);
  GmmSample out;
  if (cfg.sizes.empty()) {
    std::discrete_distribution<std::size_t> pick(cfg.alphas.begin(), cfg.alphas.end());
    for (std::size_t i = 0; i < cfg.n; ++i) out.labels.push_back(pick(rng));
  } else {
    for (std::size_t j = 0; j < cfg.k; ++j) out.labels.insert(out.labels.end(), cfg.sizes[j], j);
  }
  const auto n = static_cast<Eigen::Index>(out.labels.size());
  const auto d = static_cast<Eigen::Index>(cfg.d);
  std::normal_distribution<double> normal;
  out.points.resize(n, d);
  Eigen::VectorXd z(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::size_t j = out.labels[static_cast<std::size_t>(i)];
    for (Eigen::Index c = 0; c < d; ++c) z(c) = normal(rng);
    const Eigen::VectorXd x = chol[j] * z;
    for (Eigen::Index c = 0; c < d; ++c) out.points(i, c) = cfg.means[j][static_cast<std::size_t>(c)] + x(c);
  }
  return out;
}

std::vector<double> sample_importance(std::size_t n, double mu, double sigma, std::uint64_t seed) {
  if (n == 0) return {};
  if (!(sigma >= 0.0)) throw ConfigError("importance: sigma must be non-negative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  // Normalized on the log scale; exp(mu + sigma z) itself may overflow.
  std::vector<double> logs(n);
  for (double& l : logs) l = mu + sigma * normal(rng);
  const double top = *std::max_element(logs.begin(), logs.end());
  std::vector<double> w(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += (w[i] = std::exp(logs[i] - top));
  for (double& v : w) v /= total;
  return w;
}

void standardize(Matrix& points) {
  const Eigen::Index n = points.rows();
  if (n == 0) return;
  for (Eigen::Index c = 0; c < points.cols(); ++c) {
    const double mean = points.col(c).mean();
    points.col(c).array() -= mean;
    const double sd = std::sqrt(points.col(c).squaredNorm() / static_cast<double>(n));
    if (sd > 0.0) points.col(c) /= sd;
  }
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InvalidInput("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

}  // namespace nakm
