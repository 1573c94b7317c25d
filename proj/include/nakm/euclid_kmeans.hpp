#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nakm/measure.hpp"

namespace nakm {

/// N x d points with missing entries. A missing entry is stored as NaN.
class NADataset {
 public:
  explicit NADataset(Matrix values, std::vector<double> importance = {});

  std::size_t rows() const { return static_cast<std::size_t>(values_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(values_.cols()); }

  const Matrix& values() const { return values_; }
  bool observed(std::size_t i, std::size_t c) const { return !std::isnan(values_(i, c)); }
  bool complete(std::size_t i) const { return masks_[i].is_full(); }
  const CoordMask& mask(std::size_t i) const { return masks_[i]; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * dim(), dim()};
  }
  std::size_t missing_count() const;

  /// Importance weights p_i (empty when not supplied).
  const std::vector<double>& importance() const { return importance_; }

  /// Mean of each column over its observed entries (0 for an empty column).
  std::vector<double> column_means() const;

 private:
  Matrix values_;
  std::vector<CoordMask> masks_;
  std::vector<double> importance_;
};

struct Clustering {
  std::vector<std::size_t> assignments;
  Matrix centroids;
  std::vector<double> loss_trace;
  std::vector<std::vector<std::size_t>> history;  ///< assignment vector after each step
  int iterations = 0;
  std::size_t reseeded = 0;                       ///< empty-cluster repairs
};

/// Per-coordinate mean of the listed rows over their observed entries;
/// coordinates nobody observes take fallback[c].
Point na_centroid(const NADataset& data, std::span<const std::size_t> rows,
                  std::span<const double> fallback);

/// Index of the centroid nearest to `point` on the observed coordinates.
/// The current assignment is kept when it is a minimizer (within 1e-12),
/// otherwise the lowest minimizing index wins.
std::size_t na_assign(std::span<const double> point, const CoordMask& mask,
                      const Matrix& centroids, std::optional<std::size_t> current = std::nullopt);

/// sum_i |P_i(x_i) - P_i(c_{a_i})|^2
double na_loss(const NADataset& data, const Matrix& centroids,
               std::span<const std::size_t> assignments);

/// k distinct rows picked by seeded greedy farthest-point selection on the
/// overlap distance, missing coordinates filled with global column means.
Matrix initial_centroids(const NADataset& data, std::size_t k, std::uint64_t seed);

/// Lloyd iteration of na_assign / na_centroid from explicit centroids.
/// Stops when the assignment repeats or after max_iters assignment steps.
Clustering na_kmeans(const NADataset& data, const Matrix& init, int max_iters);
Clustering na_kmeans(const NADataset& data, std::size_t k, int max_iters, std::uint64_t seed);

/// Classical k-means on complete points (same tie and empty-cluster rules).
Clustering lloyd_kmeans(const Matrix& points, const Matrix& init, int max_iters);

/// log f for the soft-imputation weights p_l ~ f(D_l); default f(x) = exp(-x^2).
using LogWeightFn = std::function<double(double)>;
double log_gaussian_decay(double distance);

/// Soft imputation into Dirac mixtures using the complete members of each
/// cluster as donors, or the cluster centroid when there are none.
std::vector<RandomMeasure> impute_soft_euclid(const NADataset& data, const Clustering& clustering,
                                              const LogWeightFn& log_f = log_gaussian_decay);

/// Expectation of a Dirac mixture.
Point impute_mean_point(const RandomMeasure& theta);

/// N x N matrix of rho_points.
Matrix pairwise_rho(std::span<const RandomMeasure> thetas);

/// N x N Euclidean distance matrix of complete points (rows).
Matrix euclidean_distances(const Matrix& points);

}  // namespace nakm
