#pragma once

#include <span>

#include "nakm/measure.hpp"

namespace nakm {

/// Equality of discrete measures as measures: atoms are sorted
/// lexicographically, coincident atoms merged, and the canonical forms
/// compared within `tol`.
bool same_measure(const DiscreteMeasure& a, const DiscreteMeasure& b, double tol = 1e-12);

/// Equality of random measures, insensitive to component order.
bool same_random_measure(const RandomMeasure& a, const RandomMeasure& b, double tol = 1e-12);

/// Product-coupling distance between two mixtures of Diracs:
/// 0 when they are equal, otherwise sum_l sum_m p_l q_m |x_l - y_m|.
double rho_points(const RandomMeasure& alpha, const RandomMeasure& beta);

/// Product-coupling distance between two random measures with W2 as ground
/// metric: 0 when equal, otherwise sum_l sum_m p_l q_m W2(A_l, B_m).
double rho_measures(const RandomMeasure& a, const RandomMeasure& b);

}  // namespace nakm
