#include "nakm/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/QR>

namespace nakm {

namespace {

struct ColumnStats {
  std::vector<double> value;
  std::vector<std::size_t> empty;
};

ColumnStats column_stat(const NADataset& data, bool median) {
  ColumnStats s;
  for (std::size_t c = 0; c < data.dim(); ++c) {
    std::vector<double> obs;
    for (std::size_t i = 0; i < data.rows(); ++i)
      if (data.observed(i, c)) obs.push_back(data.values()(i, c));
    if (obs.empty()) {
      s.value.push_back(0.0);
      s.empty.push_back(c);
      continue;
    }
    if (median) {
      std::sort(obs.begin(), obs.end());
      const std::size_t h = obs.size() / 2;
      s.value.push_back(obs.size() % 2 ? obs[h] : 0.5 * (obs[h - 1] + obs[h]));
    } else {
      s.value.push_back(std::accumulate(obs.begin(), obs.end(), 0.0) / static_cast<double>(obs.size()));
    }
  }
  return s;
}

Matrix fill_with(const NADataset& data, const std::vector<double>& per_column) {
  Matrix x = data.values();
  for (std::size_t i = 0; i < data.rows(); ++i)
    for (std::size_t c = 0; c < data.dim(); ++c)
      if (!data.observed(i, c)) x(i, c) = per_column[c];
  return x;
}

double shared_distance(const NADataset& data, std::size_t i, std::size_t l) {
  double s = 0.0;
  std::size_t shared = 0;
  for (std::size_t c = 0; c < data.dim(); ++c) {
    if (!data.observed(i, c) || !data.observed(l, c)) continue;
    const double diff = data.values()(i, c) - data.values()(l, c);
    s += diff * diff;
    ++shared;
  }
  if (shared == 0) return std::numeric_limits<double>::infinity();
  return std::sqrt(s * static_cast<double>(data.dim()) / static_cast<double>(shared));
}

Matrix knn_impute(const NADataset& data, const std::vector<double>& means, std::size_t kk) {
  Matrix x = data.values();
  const std::size_t n = data.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (data.complete(i)) continue;
    std::vector<double> dist(n);
    for (std::size_t l = 0; l < n; ++l) dist[l] = l == i ? std::numeric_limits<double>::infinity()
                                                         : shared_distance(data, i, l);
    for (std::size_t c = 0; c < data.dim(); ++c) {
      if (data.observed(i, c)) continue;
      std::vector<std::size_t> cand;
      for (std::size_t l = 0; l < n; ++l)
        if (l != i && data.observed(l, c) && std::isfinite(dist[l])) cand.push_back(l);
      if (cand.empty()) {
        x(i, c) = means[c];
        continue;
      }
      const std::size_t take = std::min(kk, cand.size());
      std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(take), cand.end(),
                        [&](auto u, auto v) { return dist[u] < dist[v] || (dist[u] == dist[v] && u < v); });
      cand.resize(take);
      std::vector<double> w;
      const bool zero = std::any_of(cand.begin(), cand.end(), [&](auto l) { return dist[l] == 0.0; });
      for (auto l : cand) w.push_back(zero ? (dist[l] == 0.0 ? 1.0 : 0.0) : 1.0 / dist[l]);
      double num = 0.0, den = 0.0;
      for (std::size_t s = 0; s < cand.size(); ++s) {
        num += w[s] * data.values()(cand[s], c);
        den += w[s];
      }
      x(i, c) = num / den;
    }
  }
  return x;
}

Matrix lr_impute(const NADataset& data, const std::vector<double>& means) {
  const std::size_t n = data.rows(), d = data.dim();
  Matrix x = fill_with(data, means);
  std::vector<std::size_t> complete;
  for (std::size_t i = 0; i < n; ++i)
    if (data.complete(i)) complete.push_back(i);
  const Matrix filled = x;  // predictors: mean-filled
  for (std::size_t c = 0; c < d; ++c) {
    bool any_missing = false;
    for (std::size_t i = 0; i < n && !any_missing; ++i) any_missing = !data.observed(i, c);
    if (!any_missing || complete.size() < d + 1) continue;  // stays mean-filled
    const auto m = static_cast<Eigen::Index>(complete.size());
    Eigen::MatrixXd design(m, static_cast<Eigen::Index>(d));
    Eigen::VectorXd target(m);
    for (Eigen::Index r = 0; r < m; ++r) {
      const std::size_t i = complete[static_cast<std::size_t>(r)];
      design(r, 0) = 1.0;
      Eigen::Index q = 1;
      for (std::size_t p = 0; p < d; ++p)
        if (p != c) design(r, q++) = data.values()(i, p);
      target(r) = data.values()(i, c);
    }
    const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(target);
    for (std::size_t i = 0; i < n; ++i) {
      if (data.observed(i, c)) continue;
      double v = beta(0);
      Eigen::Index q = 1;
      for (std::size_t p = 0; p < d; ++p)
        if (p != c) v += beta(q++) * filled(i, p);
      x(i, c) = v;
    }
  }
  return x;
}

Matrix fill_from_centroids(const NADataset& data, const Matrix& centroids,
                           const std::vector<std::size_t>& a) {
  Matrix x = data.values();
  for (std::size_t i = 0; i < data.rows(); ++i)
    for (std::size_t c = 0; c < data.dim(); ++c)
      if (!data.observed(i, c)) x(i, c) = centroids(a[i], c);
  return x;
}

}  // namespace

Imputer parse_imputer(const std::string& name) {
  if (name == "mean") return Imputer::Mean;
  if (name == "median") return Imputer::Median;
  if (name == "knn") return Imputer::Knn;
  if (name == "lr") return Imputer::Lr;
  throw ConfigError("unknown imputation method '" + name + "'");
}

std::string imputer_name(Imputer m) {
  switch (m) {
    case Imputer::Mean: return "mean";
    case Imputer::Median: return "median";
    case Imputer::Knn: return "knn";
    case Imputer::Lr: return "lr";
  }
  return "?";
}

ImputeResult baseline_impute(Imputer method, const NADataset& data, std::size_t knn_k) {
  if (knn_k == 0) throw ConfigError("knn: K must be >= 1");
  const ColumnStats means = column_stat(data, false);
  ImputeResult out;
  out.empty_columns = means.empty;
  switch (method) {
    case Imputer::Mean: out.points = fill_with(data, means.value); break;
    case Imputer::Median: out.points = fill_with(data, column_stat(data, true).value); break;
    case Imputer::Knn: out.points = knn_impute(data, means.value, knn_k); break;
    case Imputer::Lr: out.points = lr_impute(data, means.value); break;
  }
  for (auto c : out.empty_columns)
    for (std::size_t i = 0; i < data.rows(); ++i) out.points(i, c) = 0.0;
  return out;
}

Clustering kpod(const NADataset& data, const Matrix& init, int max_iters) {
  const std::size_t n = data.rows();
  const auto k = static_cast<std::size_t>(init.rows());
  if (k == 0) throw ConfigError("k must be >= 1");
  if (k > n) throw ConfigError("k exceeds the number of rows");
  if (static_cast<std::size_t>(init.cols()) != data.dim())
    throw InvalidInput("kpod: initial centroids have wrong dimension");
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");

  Clustering out;
  out.centroids = init;
  std::vector<std::size_t> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = na_assign(data.row(i), data.mask(i), init);

  for (int t = 0; t < max_iters; ++t) {
    const Matrix filled = fill_from_centroids(data, out.centroids, a);
    Clustering inner = lloyd_kmeans(filled, out.centroids, max_iters);
    for (auto& h : inner.history)
      if (out.history.empty() || out.history.back() != h) out.history.push_back(h);
    out.reseeded += inner.reseeded;
    out.iterations = t + 1;
    const bool stable = t > 0 && inner.assignments == a;
    a = std::move(inner.assignments);
    out.centroids = std::move(inner.centroids);
    out.loss_trace.push_back(na_loss(data, out.centroids, a));
    if (stable) break;
  }
  out.assignments = std::move(a);
  return out;
}

Clustering kpod(const NADataset& data, std::size_t k, int max_iters, std::uint64_t seed) {
  return kpod(data, initial_centroids(data, k, seed), max_iters);
}

}  // namespace nakm
