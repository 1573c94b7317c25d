#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nakm/errors.hpp"

namespace nakm {

using Point = std::vector<double>;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Finitely supported probability measure on R^d.
///
/// Atoms are stored contiguously (row-major, one row per atom). Weights are
/// non-negative and sum to one; inputs whose weights drift from one by at
/// most 1e-9 are rescaled, anything further off is rejected.
class DiscreteMeasure {
 public:
  DiscreteMeasure(std::vector<Point> points, std::vector<double> weights);
  DiscreteMeasure(std::size_t dim, std::vector<double> coords, std::vector<double> weights);

  static DiscreteMeasure uniform(std::vector<Point> points);
  static DiscreteMeasure dirac(Point p);

  std::size_t size() const { return weights_.size(); }
  std::size_t dim() const { return dim_; }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  double weight(std::size_t i) const { return weights_[i]; }

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& coords() const { return coords_; }
  std::vector<Point> points() const;

  /// True when every weight equals 1/n within 1e-12.
  bool is_uniform() const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
  std::vector<double> weights_;
};

/// Coordinate projection P onto a sorted subset of {0..d-1}.
class CoordMask {
 public:
  CoordMask(std::vector<std::size_t> observed, std::size_t dim);
  static CoordMask full(std::size_t dim);

  const std::vector<std::size_t>& observed() const { return observed_; }
  std::size_t dim() const { return dim_; }
  std::size_t observed_count() const { return observed_.size(); }
  bool is_full() const { return observed_.size() == dim_; }
  bool observes(std::size_t coord) const;

  /// Coordinates not in observed(), ascending.
  std::vector<std::size_t> complement() const;

  /// Restriction of a full-dimensional vector to the observed coordinates.
  Point restrict(std::span<const double> x) const;

  /// Inverse of (P, P^C): interleaves an observed part and a complement part
  /// back into a d-vector.
  Point recombine(std::span<const double> observed_part,
                  std::span<const double> complement_part) const;

  bool operator==(const CoordMask&) const = default;

 private:
  std::vector<std::size_t> observed_;
  std::size_t dim_;
};

/// Transport plan between two discrete measures.
struct Coupling {
  Matrix plan;
  std::vector<double> row_marginal;
  std::vector<double> col_marginal;
};

/// Finite mixture of discrete measures (a measure on measures).
class RandomMeasure {
 public:
  RandomMeasure(std::vector<DiscreteMeasure> components, std::vector<double> mix_weights);
  static RandomMeasure single(DiscreteMeasure m);

  const std::vector<DiscreteMeasure>& components() const { return components_; }
  const std::vector<double>& mix_weights() const { return mix_weights_; }
  std::size_t size() const { return components_.size(); }
  std::size_t dim() const { return components_.front().dim(); }

  /// True when every component is a single atom.
  bool is_dirac_mixture() const;

 private:
  std::vector<DiscreteMeasure> components_;
  std::vector<double> mix_weights_;
};

/// A measure seen only through a coordinate projection: `measure` lives in
/// R^{|mask.observed|}, `mask.dim()` is the full dimension.
struct ObservedMeasure {
  DiscreteMeasure measure;
  CoordMask mask;

  ObservedMeasure(DiscreteMeasure m, CoordMask k);
  std::size_t full_dim() const { return mask.dim(); }
};

/// P#m: atoms restricted to the observed coordinates, weights kept per atom.
DiscreteMeasure push_forward(const DiscreteMeasure& m, const CoordMask& mask);

double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace nakm
