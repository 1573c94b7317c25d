#pragma once

#include <cstdint>
#include <vector>

#include "nakm/measure.hpp"

namespace nakm {

/// Finite metric space with a probability measure on its points.
struct MetricMeasureSpace {
  Matrix dist;               ///< symmetric, non-negative, zero diagonal
  std::vector<double> mass;  ///< sums to one

  MetricMeasureSpace(Matrix d, std::vector<double> m);
  static MetricMeasureSpace uniform(Matrix d);
  std::size_t size() const { return mass.size(); }
};

struct GwOptions {
  int restarts = 10;
  std::uint64_t seed = 0;
  int max_iters = 200;       ///< conditional-gradient steps per restart
  double tol = 1e-12;        ///< relative stopping gap
  int exhaustive_limit = 720;  ///< add every permutation start when n == m, uniform, n! <= this
};

struct GwResult {
  double value = 0.0;      ///< sqrt of objective: an upper bound on GW_2, not a certified optimum
  double objective = 0.0;  ///< sum |dA - dB|^2 dpi dpi at the returned coupling
  Matrix coupling;
  int starts = 0;          ///< number of CG runs
  int best_start = 0;
};

/// sum_{ijkl} (A_ik - B_jl)^2 pi_ij pi_kl, clamped at zero.
double gw_objective(const MetricMeasureSpace& a, const MetricMeasureSpace& b, const Matrix& pi);

/// Best value over several conditional-gradient runs (product coupling,
/// eccentricity-sorted north-west corner, seeded random north-west corners,
/// and for small uniform square problems every permutation). Each linear
/// subproblem is solved exactly. Symmetric in its arguments.
GwResult gromov_wasserstein(const MetricMeasureSpace& a, const MetricMeasureSpace& b,
                            const GwOptions& opts = {});

}  // namespace nakm
