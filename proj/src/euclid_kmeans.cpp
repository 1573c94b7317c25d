#include "nakm/euclid_kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "nakm/parallel.hpp"
#include "nakm/rho.hpp"

namespace nakm {

namespace {

constexpr double kTieTol = 1e-12;

double observed_sq_distance(std::span<const double> x, const CoordMask& mask,
                            const Matrix& centroids, std::size_t j) {
  double s = 0.0;
  for (auto c : mask.observed()) {
    const double t = x[c] - centroids(j, c);
    s += t * t;
  }
  return s;
}

}  // namespace

NADataset::NADataset(Matrix values, std::vector<double> importance)
    : values_(std::move(values)), importance_(std::move(importance)) {
  if (values_.rows() == 0 || values_.cols() == 0) throw InvalidInput("NADataset: empty data");
  masks_.reserve(rows());
  for (std::size_t i = 0; i < rows(); ++i) {
    std::vector<std::size_t> obs;
    for (std::size_t c = 0; c < dim(); ++c) {
      const double v = values_(i, c);
      if (std::isnan(v)) continue;
      if (!std::isfinite(v)) throw InvalidInput("NADataset: non-finite value");
      obs.push_back(c);
    }
    if (obs.empty())
      throw InvalidInput("NADataset: row " + std::to_string(i) + " has no observed coordinate");
    masks_.emplace_back(std::move(obs), dim());
  }
  if (!importance_.empty()) {
    if (importance_.size() != rows()) throw InvalidInput("NADataset: importance length differs");
    double s = 0.0;
    for (double w : importance_) {
      if (!(w >= 0.0)) throw InvalidInput("NADataset: negative importance");
      s += w;
    }
    if (!(s > 0.0)) throw InvalidInput("NADataset: importance sums to zero");
    for (double& w : importance_) w /= s;
  }
}

std::size_t NADataset::missing_count() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < rows(); ++i) n += dim() - masks_[i].observed_count();
  return n;
}

std::vector<double> NADataset::column_means() const {
  std::vector<double> mean(dim(), 0.0);
  std::vector<std::size_t> count(dim(), 0);
  for (std::size_t i = 0; i < rows(); ++i)
    for (auto c : masks_[i].observed()) {
      mean[c] += values_(i, c);
      ++count[c];
    }
  for (std::size_t c = 0; c < dim(); ++c) mean[c] = count[c] ? mean[c] / count[c] : 0.0;
  return mean;
}

Point na_centroid(const NADataset& data, std::span<const std::size_t> rows,
                  std::span<const double> fallback) {
  const std::size_t d = data.dim();
  if (fallback.size() != d) throw InvalidInput("na_centroid: fallback has wrong dimension");
  std::vector<double> sum(d, 0.0);
  std::vector<std::size_t> count(d, 0);
  for (auto i : rows)
    for (auto c : data.mask(i).observed()) {
      sum[c] += data.values()(i, c);
      ++count[c];
    }
  Point out(d);
  for (std::size_t c = 0; c < d; ++c)
    out[c] = count[c] ? sum[c] / static_cast<double>(count[c]) : fallback[c];
  return out;
}

std::size_t na_assign(std::span<const double> point, const CoordMask& mask,
                      const Matrix& centroids, std::optional<std::size_t> current) {
  const auto k = static_cast<std::size_t>(centroids.rows());
  if (k == 0) throw InvalidInput("na_assign: no centroids");
  if (point.size() != mask.dim() || static_cast<std::size_t>(centroids.cols()) != mask.dim())
    throw InvalidInput("na_assign: dimension mismatch");
  std::vector<double> dist(k);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < k; ++j) {
    dist[j] = observed_sq_distance(point, mask, centroids, j);
    best = std::min(best, dist[j]);
  }
  if (current && *current < k && dist[*current] <= best + kTieTol) return *current;
  for (std::size_t j = 0; j < k; ++j)
    if (dist[j] <= best + kTieTol) return j;
  return 0;
}

double na_loss(const NADataset& data, const Matrix& centroids,
               std::span<const std::size_t> assignments) {
  double s = 0.0;
  for (std::size_t i = 0; i < data.rows(); ++i)
    s += observed_sq_distance(data.row(i), data.mask(i), centroids, assignments[i]);
  return s;
}

Matrix initial_centroids(const NADataset& data, std::size_t k, std::uint64_t seed) {
  const std::size_t n = data.rows(), d = data.dim();
  if (k == 0) throw ConfigError("k must be >= 1");
  if (k > n) throw ConfigError("k exceeds the number of rows");
  // Partial distance on shared coordinates, rescaled to the full dimension.
  auto overlap_dist = [&](std::size_t a, std::size_t b) {
    double s = 0.0;
    std::size_t shared = 0;
    for (std::size_t c = 0; c < d; ++c) {
      if (!data.observed(a, c) || !data.observed(b, c)) continue;
      const double t = data.values()(a, c) - data.values()(b, c);
      s += t * t;
      ++shared;
    }
    return shared ? std::sqrt(s * static_cast<double>(d) / static_cast<double>(shared)) : 0.0;
  };
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> chosen{std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)};
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::vector<char> taken(n, 0);
  taken[chosen[0]] = 1;
  while (chosen.size() < k) {
    const std::size_t last = chosen.back();
    std::size_t pick = n;
    double far = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      nearest[i] = std::min(nearest[i], overlap_dist(i, last));
      if (nearest[i] > far) {
        far = nearest[i];
        pick = i;
      }
    }
    taken[pick] = 1;
    chosen.push_back(pick);
  }
  const auto means = data.column_means();
  Matrix c(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t col = 0; col < d; ++col)
      c(j, col) = data.observed(chosen[j], col) ? data.values()(chosen[j], col) : means[col];
  return c;
}

Clustering na_kmeans(const NADataset& data, const Matrix& init, int max_iters) {
  const std::size_t n = data.rows(), d = data.dim();
  const auto k = static_cast<std::size_t>(init.rows());
  if (k == 0) throw ConfigError("k must be >= 1");
  if (k > n) throw ConfigError("k exceeds the number of rows");
  if (static_cast<std::size_t>(init.cols()) != d)
    throw InvalidInput("na_kmeans: initial centroids have wrong dimension");
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");

  Clustering out;
  out.centroids = init;
  const auto means = data.column_means();
  std::vector<std::size_t> a(n, k);  // k marks "unassigned"
  for (int t = 0; t < max_iters; ++t) {
    std::vector<std::size_t> next(n);
    parallel_for(n, [&](std::size_t i) {
      next[i] = na_assign(data.row(i), data.mask(i), out.centroids,
                          a[i] < k ? std::optional<std::size_t>(a[i]) : std::nullopt);
    });
    out.iterations = t + 1;
    if (next == a) {
      out.loss_trace.push_back(out.loss_trace.back());
      break;
    }
    a = std::move(next);

    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < n; ++i) members[a[i]].push_back(i);
    Matrix updated = out.centroids;
    for (std::size_t j = 0; j < k; ++j) {
      if (members[j].empty()) continue;
      const Point fallback(out.centroids.row(j).data(), out.centroids.row(j).data() + d);
      const Point c = na_centroid(data, members[j], fallback);
      for (std::size_t col = 0; col < d; ++col) updated(j, col) = c[col];
    }
    // Empty clusters restart at the worst-fitted points.
    std::vector<char> used(n, 0);
    for (std::size_t j = 0; j < k; ++j) {
      if (!members[j].empty()) continue;
      std::size_t worst = n;
      double worst_loss = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (used[i]) continue;
        const double l = observed_sq_distance(data.row(i), data.mask(i), updated, a[i]);
        if (l > worst_loss) {
          worst_loss = l;
          worst = i;
        }
      }
      used[worst] = 1;
      for (std::size_t col = 0; col < d; ++col)
        updated(j, col) = data.observed(worst, col) ? data.values()(worst, col) : means[col];
      ++out.reseeded;
    }
    out.centroids = std::move(updated);
    out.history.push_back(a);
    out.loss_trace.push_back(na_loss(data, out.centroids, a));
  }
  out.assignments = std::move(a);
  return out;
}

Clustering na_kmeans(const NADataset& data, std::size_t k, int max_iters, std::uint64_t seed) {
  return na_kmeans(data, initial_centroids(data, k, seed), max_iters);
}

Clustering lloyd_kmeans(const Matrix& points, const Matrix& init, int max_iters) {
  if (!points.allFinite()) throw InvalidInput("lloyd_kmeans: points must be complete");
  return na_kmeans(NADataset(points), init, max_iters);
}

double log_gaussian_decay(double distance) { return -distance * distance; }

std::vector<RandomMeasure> impute_soft_euclid(const NADataset& data, const Clustering& clustering,
                                              const LogWeightFn& log_f) {
  const std::size_t n = data.rows(), d = data.dim();
  if (clustering.assignments.size() != n)
    throw InvalidInput("impute_soft_euclid: clustering does not match data");
  const auto k = static_cast<std::size_t>(clustering.centroids.rows());
  std::vector<std::vector<std::size_t>> donors(k);
  for (std::size_t i = 0; i < n; ++i)
    if (data.complete(i)) donors[clustering.assignments[i]].push_back(i);

  std::vector<RandomMeasure> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto x = data.row(i);
    if (data.complete(i)) {
      out.push_back(RandomMeasure::single(DiscreteMeasure::dirac(Point(x.begin(), x.end()))));
      continue;
    }
    const auto& obs = data.mask(i).observed();
    const auto& pool = donors[clustering.assignments[i]];
    if (pool.empty()) {
      Point y(d);
      for (std::size_t c = 0; c < d; ++c)
        y[c] = data.observed(i, c) ? x[c] : clustering.centroids(clustering.assignments[i], c);
      out.push_back(RandomMeasure::single(DiscreteMeasure::dirac(std::move(y))));
      continue;
    }
    std::vector<DiscreteMeasure> atoms;
    std::vector<double> logw;
    for (auto l : pool) {
      auto z = data.row(l);
      Point y(z.begin(), z.end());
      double s = 0.0;
      for (auto c : obs) {
        const double t = x[c] - z[c];
        s += t * t;
        y[c] = x[c];
      }
      atoms.push_back(DiscreteMeasure::dirac(std::move(y)));
      logw.push_back(log_f(std::sqrt(s)));
    }
    const double top = *std::max_element(logw.begin(), logw.end());
    std::vector<double> w(logw.size());
    double total = 0.0;
    for (std::size_t t = 0; t < w.size(); ++t) total += (w[t] = std::exp(logw[t] - top));
    for (double& v : w) v /= total;
    out.emplace_back(std::move(atoms), std::move(w));
  }
  return out;
}

Point impute_mean_point(const RandomMeasure& theta) {
  if (!theta.is_dirac_mixture()) throw InvalidInput("impute_mean_point: expected a Dirac mixture");
  Point out(theta.dim(), 0.0);
  for (std::size_t l = 0; l < theta.size(); ++l) {
    auto p = theta.components()[l].point(0);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += theta.mix_weights()[l] * p[c];
  }
  return out;
}

Matrix pairwise_rho(std::span<const RandomMeasure> thetas) {
  const auto n = static_cast<Eigen::Index>(thetas.size());
  Matrix out = Matrix::Zero(n, n);
  parallel_for(thetas.size(), [&](std::size_t i) {
    for (std::size_t j = i + 1; j < thetas.size(); ++j) out(i, j) = rho_points(thetas[i], thetas[j]);
  });
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) out(j, i) = out(i, j);
  return out;
}

Matrix euclidean_distances(const Matrix& points) {
  const auto n = points.rows();
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) out(i, j) = out(j, i) = (points.row(i) - points.row(j)).norm();
  return out;
}

}  // namespace nakm
