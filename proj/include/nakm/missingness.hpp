#pragma once

#include <cstdint>
#include <vector>

#include "nakm/euclid_kmeans.hpp"

namespace nakm {

struct MissingnessConfig {
  double beta = 0.5;
  double quantile = 0.25;     ///< rule (a) per-dimension quantile; 0 disables it
  std::vector<double> h;      ///< per-cluster h_j in (0, 2/k); drawn from the seed when empty
  double cap = 0.95;
  std::uint64_t seed = 0;

  void validate(std::size_t k) const;
};

struct MissingnessResult {
  Matrix values;                          ///< NaN marks a deleted cell
  std::vector<double> h;                  ///< h_j actually used
  std::vector<double> target_fraction;    ///< min(beta h_j + (1 - beta) alpha_j, cap)
  std::vector<double> realized_fraction;  ///< rule (b) deletions / surviving cells, per cluster
  std::size_t rule_a_cells = 0;
  std::size_t repaired_rows = 0;

  NADataset dataset(std::vector<double> importance = {}) const { return NADataset(values, std::move(importance)); }
};

/// Structured missingness on standardized points:
///  (a) per dimension, entries below that dimension's `quantile` quantile go missing;
///  (b) per cluster j, round(f_j * surviving cells) further cells of the cluster,
///      chosen uniformly among the cells rule (a) left, go missing.
/// Rows left with nothing observed get one uniformly chosen cell back.
/// `alphas` are the mixing weights (one per cluster).
MissingnessResult apply_missingness(const Matrix& points, const std::vector<std::size_t>& labels,
                                    const std::vector<double>& alphas, const MissingnessConfig& cfg);

}  // namespace nakm
