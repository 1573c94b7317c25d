#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nakm/measure.hpp"

namespace nakm {

/// Damping weights lambda^(t) in [0, 1); the last value repeats past the end.
class LambdaSchedule {
 public:
  explicit LambdaSchedule(std::vector<double> values);

  /// lambda^(t) = 1 / sqrt(t + 2) for t = 0..T.
  static LambdaSchedule shifted_sqrt(int max_iters);
  static LambdaSchedule constant(double value, int max_iters);
  /// "sqrt" (default), "zero", "const:<v>", or a comma separated list.
  static LambdaSchedule parse(const std::string& spec, int max_iters);

  double at(std::size_t t) const;
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

struct WKMeansOptions {
  std::size_t k = 2;
  int max_iters = 50;                       ///< T
  std::optional<LambdaSchedule> schedule;   ///< defaults to shifted_sqrt(T)
  std::size_t support_size = 0;             ///< 0: largest input support
  int barycenter_max_iters = 200;
  double barycenter_tol = 1e-7;
  std::uint64_t seed = 0;
};

struct WClustering {
  std::vector<std::size_t> assignments;
  std::vector<DiscreteMeasure> barycenters;
  /// L after each update; on convergence the last value is repeated.
  std::vector<double> loss_trace;
  std::vector<std::vector<std::size_t>> history;         ///< assignment vector of each update
  std::vector<double> damping_schedule_used;             ///< lambda^(t) of each update
  std::vector<std::vector<std::size_t>> empty_clusters;  ///< clusters kept as-is, per update
  int iterations = 0;
  bool converged = false;
};

/// argmin_j W2^2(obs, P#nu_j); the current index is kept on ties within
/// 1e-12, otherwise the lowest minimizing index.
std::size_t na_w_assign(const ObservedMeasure& obs, std::span<const DiscreteMeasure> barycenters,
                        std::optional<std::size_t> current = std::nullopt);

/// sum_i W2^2(obs_i, P_i#nu_{a_i}).
double loss_L(std::span<const ObservedMeasure> dataset, std::span<const DiscreteMeasure> barycenters,
              std::span<const std::size_t> assignments);

/// Seeded farthest-point choice among full-mask measures (topped up with
/// mean-completed masked ones), resampled to `support_size` uniform atoms.
std::vector<DiscreteMeasure> initial_barycenters(std::span<const ObservedMeasure> dataset,
                                                 std::size_t k, std::size_t support_size,
                                                 std::uint64_t seed);

/// Largest support size in the dataset.
std::size_t default_support_size(std::span<const ObservedMeasure> dataset);

/// NA Wasserstein k-means: assignment by projected W2^2, then a damped
/// generalized barycenter per cluster warm-started at the previous one.
/// Stops when the assignment vector repeats (the barycenters returned are
/// the ones that assignment was computed against) or after max_iters
/// iterations.
WClustering na_w_kmeans(std::span<const ObservedMeasure> dataset, const WKMeansOptions& opts);
WClustering na_w_kmeans(std::span<const ObservedMeasure> dataset,
                        std::vector<DiscreteMeasure> init, const WKMeansOptions& opts);

struct WImputeOptions {
  double temperature = 1.0;        ///< lambda > 0 in the donor weights
  std::size_t atom_cap = 10000;    ///< max atoms per completion before thinning
};

struct WImputation {
  std::vector<RandomMeasure> measures;
  std::size_t thinned = 0;  ///< completions whose donor part was thinned
};

/// Donor weights p_l ~ exp(-temperature / (2 sigma^2) * d_l) with
/// sigma^2 = sum_l d_l / (n - 1); a single donor gets weight one.
std::vector<double> donor_weights(std::span<const double> sq_distances, double temperature);

/// Product of the observed measure with the donor's complement marginal,
/// recombined into full dimension. When the product exceeds atom_cap the
/// donor part is thinned by systematic sampling, which keeps P#completion
/// equal to the observed measure.
DiscreteMeasure complete_measure(const ObservedMeasure& obs, const DiscreteMeasure& donor,
                                 std::size_t atom_cap, bool* thinned = nullptr);

WImputation impute_soft_wasserstein(std::span<const ObservedMeasure> dataset,
                                    const WClustering& clustering, const WImputeOptions& opts = {});

/// N x N matrix of rho_measures.
Matrix pairwise_rho_w(std::span<const RandomMeasure> randoms);

/// N x N matrix of W2 between full measures.
Matrix pairwise_w2(std::span<const DiscreteMeasure> measures);

}  // namespace nakm
