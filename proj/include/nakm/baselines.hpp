#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nakm/euclid_kmeans.hpp"

namespace nakm {

enum class Imputer { Mean, Median, Knn, Lr };

Imputer parse_imputer(const std::string& name);
std::string imputer_name(Imputer m);

struct ImputeResult {
  Matrix points;                           ///< completed data
  std::vector<std::size_t> empty_columns;  ///< fully missing columns, filled with 0
};

/// Single imputation baselines.
///  mean / median: per-column statistic of the observed entries.
///  knn: the `knn_k` nearest rows (distance on shared observed coordinates,
///       rescaled by sqrt(d / shared)) that observe the missing coordinate,
///       inverse-distance weighted; zero-distance donors share uniform weight.
///  lr:  least squares of the column on all others over complete rows, with
///       mean-filled predictors; column mean when complete rows < d + 1.
ImputeResult baseline_impute(Imputer method, const NADataset& data, std::size_t knn_k = 4);

/// k-pod: fill missing cells from the assigned centroids, run k-means to
/// convergence on the filled data, refill, until the assignment is stable.
/// History is the concatenation of the inner k-means histories (consecutive
/// repeats dropped); loss_trace holds the NA loss after each outer round.
Clustering kpod(const NADataset& data, const Matrix& init, int max_iters);
Clustering kpod(const NADataset& data, std::size_t k, int max_iters, std::uint64_t seed);

}  // namespace nakm
