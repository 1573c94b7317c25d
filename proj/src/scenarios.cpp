#include "nakm/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "nakm/seeding.hpp"

namespace nakm {

std::vector<ObservedMeasure> toy_measures() {
  auto planar = [](std::vector<Point> pts) {
    return ObservedMeasure(DiscreteMeasure::uniform(std::move(pts)), CoordMask::full(2));
  };
  std::vector<ObservedMeasure> out;
  out.push_back(planar({{0.0, 0.0}, {1.0, 0.5}, {0.2, 1.5}}));
  out.push_back(planar({{0.4, -0.2}, {1.3, 0.8}, {-0.1, 1.2}}));
  out.push_back(planar({{10.0, 0.0}, {11.0, -0.5}, {10.5, 1.0}}));
  out.push_back(planar({{9.7, 0.3}, {11.2, -0.1}, {10.2, 1.4}}));
  out.push_back(planar({{20.0, 10.0}, {21.0, 11.0}, {22.0, 9.5}}));
  out.emplace_back(DiscreteMeasure::uniform({{20.6}, {21.3}, {22.5}}), CoordMask({0}, 2));
  return out;
}

std::vector<std::size_t> toy_labels() { return {0, 0, 1, 1, 2, 2}; }

namespace {

// Integer counts proportional to `weights` summing to `total` (largest remainder).
std::vector<std::size_t> apportion(const std::vector<std::size_t>& weights, std::size_t total) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::size_t> out(weights.size(), 0);
  if (sum <= 0.0) throw ConfigError("institutions: attribute histogram is empty");
  std::vector<std::pair<double, std::size_t>> rem;
  std::size_t used = 0;
  for (std::size_t c = 0; c < weights.size(); ++c) {
    const double exact = static_cast<double>(weights[c]) * static_cast<double>(total) / sum;
    out[c] = static_cast<std::size_t>(std::floor(exact));
    used += out[c];
    rem.emplace_back(-(exact - std::floor(exact)), c);
  }
  std::sort(rem.begin(), rem.end());
  for (std::size_t r = 0; used < total; ++r, ++used) ++out[rem[r % rem.size()].second];
  return out;
}

}  // namespace

WassersteinScenario make_institutions(const InstitutionsConfig& cfg) {
  if (cfg.institutions == 0 || cfg.loans == 0 || cfg.dim == 0 || cfg.clusters == 0)
    throw ConfigError("institutions: sizes must be positive");
  if (cfg.reported.size() != cfg.dim)
    throw ConfigError("institutions: histogram needs one entry per attribute count 1..d");
  const std::size_t n = cfg.institutions, d = cfg.dim;
  const auto counts = apportion(cfg.reported, n);

  std::mt19937_64 rng(derive_seed(cfg.seed, "institutions/centers"));
  std::uniform_real_distribution<double> unif(-cfg.center_spread, cfg.center_spread);
  std::vector<Point> centers(cfg.clusters, Point(d));
  for (auto& c : centers)
    for (double& v : c) v = unif(rng);

  // Attribute counts laid out then shuffled over institutions.
  std::vector<std::size_t> attrs;
  for (std::size_t c = 0; c < d; ++c) attrs.insert(attrs.end(), counts[c], c + 1);
  std::mt19937_64 mrng(derive_seed(cfg.seed, "institutions/masks"));
  std::shuffle(attrs.begin(), attrs.end(), mrng);

  std::mt19937_64 drng(derive_seed(cfg.seed, "institutions/loans"));
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<std::size_t> pick(0, cfg.clusters - 1);
  WassersteinScenario out;
  std::vector<std::size_t> coords(d);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t label = pick(drng);
    Point offset(d);
    for (std::size_t c = 0; c < d; ++c) offset[c] = centers[label][c] + cfg.institution_sd * normal(drng);
    std::vector<double> flat(cfg.loans * d);
    for (std::size_t a = 0; a < cfg.loans; ++a)
      for (std::size_t c = 0; c < d; ++c) flat[a * d + c] = offset[c] + cfg.loan_sd * normal(drng);
    DiscreteMeasure full(d, std::move(flat), std::vector<double>(cfg.loans, 1.0 / static_cast<double>(cfg.loans)));

    std::iota(coords.begin(), coords.end(), 0);
    std::shuffle(coords.begin(), coords.end(), mrng);
    std::vector<std::size_t> obs(coords.begin(), coords.begin() + static_cast<std::ptrdiff_t>(attrs[i]));
    CoordMask mask(std::move(obs), d);
    out.measures.emplace_back(push_forward(full, mask), mask);
    out.labels.push_back(label);
    out.full.push_back(std::move(full));
  }
  return out;
}

GmmConfig mnar_toy_config(std::uint64_t seed) {
  GmmConfig cfg;
  cfg.k = 3;
  cfg.d = 2;
  cfg.sizes = {200, 100, 200};
  cfg.n = 500;
  cfg.alphas = {0.4, 0.2, 0.4};
  cfg.means = {{3.0, 3.0}, {0.0, -1.5}, {-3.0, 3.0}};
  Matrix eye = Matrix::Identity(2, 2);
  Matrix tilt(2, 2);
  tilt << 1.0, 0.6, 0.6, 1.0;
  cfg.covariances = {eye, tilt, eye};
  cfg.seed = derive_seed(seed, "mnar-toy/sample");
  return cfg;
}

Matrix mnar_mask(const Matrix& points) {
  if (points.cols() != 2) throw InvalidInput("mnar_mask: expects planar points");
  Matrix out = points;
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    if (!(out(i, 1) > 0.0)) out(i, 1) = std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace nakm
