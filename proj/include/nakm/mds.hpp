#pragma once

#include <cstddef>

#include "nakm/measure.hpp"

namespace nakm {

struct MdsResult {
  Matrix coords;                     ///< N x dim
  Eigen::VectorXd eigenvalues;       ///< top dim, descending, before clamping
  std::size_t clamped_negative = 0;  ///< kept eigenvalues below zero, set to zero
};

/// Classical (Torgerson) scaling: eigen-decompose -1/2 J (D o D) J and scale
/// the top eigenvectors by sqrt(max(eigenvalue, 0)). Signs are fixed so the
/// first non-zero loading of every axis is positive.
MdsResult classical_mds(const Matrix& dist, std::size_t dim);

}  // namespace nakm
