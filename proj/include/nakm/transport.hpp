#pragma once

#include <span>
#include <vector>

#include "nakm/measure.hpp"

namespace nakm {

struct TransportResult {
  Coupling coupling;
  double cost = 0.0;
  int pivots = 0;
};

/// Exact solution of the transportation LP
///   min <C, P>  s.t.  P 1 = supply, P^T 1 = demand, P >= 0
/// by the network simplex method on the complete bipartite graph.
///
/// Degeneracy is removed with Orden's perturbation (supply_i + eps, last
/// demand + n*eps) carried symbolically, so every pivot is lexicographically
/// non-degenerate and the method cannot cycle. Supplies and demands must be
/// non-negative with equal totals (within 1e-9).
TransportResult solve_transport(std::span<const double> supply, std::span<const double> demand,
                                const Matrix& cost);

/// Optimal coupling of mu and nu for the squared Euclidean ground cost.
TransportResult solve_exact_ot(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

Matrix squared_euclidean_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

double w2_squared(const DiscreteMeasure& mu, const DiscreteMeasure& nu);
double w2(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Row i of the result is sum_j plan(i,j) * target_j / row_marginal[i].
std::vector<Point> barycentric_map(const Coupling& coupling, const DiscreteMeasure& target);

}  // namespace nakm
