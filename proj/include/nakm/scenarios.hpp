#pragma once

#include <cstdint>
#include <vector>

#include "nakm/gmm.hpp"
#include "nakm/measure.hpp"

namespace nakm {

/// Six three-atom planar measures in three well separated groups: two near
/// the origin, two near x = 10, and near (21, 10) one full measure plus one
/// whose vertical coordinate is unobserved (index 5).
std::vector<ObservedMeasure> toy_measures();
/// Expected grouping of toy_measures(): {0,1}, {2,3}, {4,5}.
std::vector<std::size_t> toy_labels();

struct InstitutionsConfig {
  std::size_t institutions = 500;  ///< N
  std::size_t loans = 100;         ///< atoms per measure
  std::size_t dim = 7;
  std::size_t clusters = 3;
  /// reported[c] = number of institutions reporting c + 1 attributes.
  std::vector<std::size_t> reported{0, 3, 9, 56, 110, 134, 188};
  double center_spread = 5.0;      ///< cluster centers ~ U[-spread, spread]^d
  double institution_sd = 0.5;     ///< per-institution offset around its cluster center
  double loan_sd = 1.0;            ///< per-loan noise
  std::uint64_t seed = 0;
};

struct WassersteinScenario {
  std::vector<ObservedMeasure> measures;
  std::vector<std::size_t> labels;   ///< generating cluster
  std::vector<DiscreteMeasure> full; ///< measures before masking
};

/// Synthetic institutions: each an empirical measure of `loans` atoms drawn
/// around a cluster-specific center, observed on a random subset of
/// attributes whose sizes follow `reported` (rescaled when it does not sum
/// to `institutions`).
WassersteinScenario make_institutions(const InstitutionsConfig& cfg);

/// Three planar Gaussians with means (3,3), (0,-1.5), (-3,3), covariances
/// I, [[1,.6],[.6,1]], I and 200/100/200 points.
GmmConfig mnar_toy_config(std::uint64_t seed);
/// Hides the second coordinate wherever it is not positive.
Matrix mnar_mask(const Matrix& points);

}  // namespace nakm
