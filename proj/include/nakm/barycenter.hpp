#pragma once

#include <span>
#include <vector>

#include "nakm/measure.hpp"

namespace nakm {

struct BarycenterConfig {
  std::size_t support_size = 1;  ///< m, number of uniform atoms
  int max_iters = 200;
  double tol = 1e-7;             ///< stop once no atom moves farther than this
  std::vector<double> weights;   ///< lambda_i; empty means all ones

  void validate(std::size_t inputs) const;
  double weight(std::size_t i) const { return weights.empty() ? 1.0 : weights[i]; }
};

struct BarycenterResult {
  DiscreteMeasure barycenter;
  std::vector<double> objective_trace;  ///< objective at the start and after each accepted update
  int iterations = 0;
  bool converged = false;
};

/// What to do with a coordinate nobody observes when the damping is zero.
enum class UnobservedPolicy { Error, KeepPrevious };

/// sum_i lambda_i W2^2(mu_i, nu).
double barycenter_objective(std::span<const DiscreteMeasure> measures,
                            const BarycenterConfig& cfg, const DiscreteMeasure& nu);

/// (1 - damping) sum_i lambda_i W2^2(P_i#mu_i, P_i#nu) + damping W2^2(prev, nu).
double generalized_objective(std::span<const ObservedMeasure> observed, const BarycenterConfig& cfg,
                             const DiscreteMeasure& nu, const DiscreteMeasure& prev,
                             double damping);

/// Free-support barycenter with m uniform atoms by the fixed-point map
/// X <- sum_i (lambda_i / sum lambda) T_i(X), T_i the barycentric projection
/// of the optimal plan from X to mu_i. The objective never increases.
BarycenterResult free_support_barycenter(std::span<const DiscreteMeasure> measures,
                                         const BarycenterConfig& cfg,
                                         const DiscreteMeasure& init);

/// Damped generalized barycenter of projected measures, warm-started at
/// `prev`. Each sweep solves the transport from P_i#X to every observed
/// measure (and from X to prev when damping > 0), then sets every coordinate
/// of every atom to the weighted mean of the targets that observe it.
BarycenterResult generalized_barycenter(std::span<const ObservedMeasure> observed,
                                        const BarycenterConfig& cfg, const DiscreteMeasure& prev,
                                        double damping,
                                        UnobservedPolicy policy = UnobservedPolicy::Error);

/// m atoms picked from the largest-support input by systematic sampling on
/// its weights, unobserved coordinates filled with the mean over the inputs
/// that observe them (0 if none). Uniform weights.
DiscreteMeasure default_barycenter_init(std::span<const ObservedMeasure> observed,
                                        std::size_t support_size);

/// m atoms of `m` chosen by systematic sampling on its weights, uniform weights.
DiscreteMeasure resample_uniform(const DiscreteMeasure& m, std::size_t support_size);

/// Classical reformulation of the generalized problem. With weights
/// normalized to sum one, A = sum_i lambda_i P_i^T P_i (diagonal for
/// coordinate masks) and the inputs become (A^{-1/2} P_i^T)#mu_i.
struct ClassicalReduction {
  std::vector<DiscreteMeasure> transformed;
  Matrix a;
  std::vector<double> weights;  ///< normalized lambda
};

ClassicalReduction reduce_to_classical(std::span<const ObservedMeasure> observed,
                                       std::span<const double> weights);

/// A^{1/2}#nu.
DiscreteMeasure to_classical(const ClassicalReduction& r, const DiscreteMeasure& nu);
/// A^{-1/2}#nu_tilde.
DiscreteMeasure from_classical(const ClassicalReduction& r, const DiscreteMeasure& nu_tilde);

}  // namespace nakm
