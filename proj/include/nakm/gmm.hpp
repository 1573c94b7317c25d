#pragma once

#include <cstdint>
#include <vector>

#include "nakm/measure.hpp"

namespace nakm {

struct GmmConfig {
  std::size_t k = 3;
  std::size_t d = 2;
  std::size_t n = 100;
  std::vector<double> alphas;      ///< mixing weights on the simplex
  std::vector<Point> means;
  std::vector<Matrix> covariances; ///< symmetric positive definite
  std::vector<std::size_t> sizes;  ///< optional exact per-component counts (overrides alphas and n)
  std::uint64_t seed = 0;

  void validate() const;
};

/// Random parameters: alphas ~ Dirichlet(1,...,1), means ~ U[-10,10]^d,
/// Sigma_j = G G^T with G a d x d standard normal matrix.
GmmConfig random_gmm_config(std::size_t k, std::size_t d, std::size_t n, std::uint64_t seed);

struct GmmSample {
  Matrix points;                    ///< n x d
  std::vector<std::size_t> labels;  ///< component of each row
};

/// Labels drawn from alphas (or laid out block-wise from `sizes`), each row
/// from its component's Gaussian.
GmmSample sample_gmm(const GmmConfig& cfg);

/// n lognormal(mu, sigma) draws normalized to sum one.
std::vector<double> sample_importance(std::size_t n, double mu, double sigma, std::uint64_t seed);

/// Centers every column and scales it to unit population standard
/// deviation; constant columns are only centered.
void standardize(Matrix& points);

/// Quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);

}  // namespace nakm
