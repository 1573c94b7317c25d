#include "nakm/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace nakm {

namespace {

constexpr double kWeightSumTol = 1e-9;

void check_and_normalize(std::vector<double>& w, const char* what) {
  if (w.empty()) throw InvalidInput(std::string(what) + ": no atoms");
  double sum = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x))
      throw InvalidInput(std::string(what) + ": weights must be finite and non-negative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kWeightSumTol) {
    std::ostringstream os;
    os << what << ": weights sum to " << sum << ", expected 1";
    throw InvalidInput(os.str());
  }
  if (sum != 1.0)
    for (double& x : w) x /= sum;
}

}  // namespace

UnconstrainedCoordinate::UnconstrainedCoordinate(std::vector<std::size_t> coords)
    : NumericalError([&] {
        std::ostringstream os;
        os << "unconstrained coordinate(s): no input observes";
        for (auto c : coords) os << ' ' << c;
        os << " and damping is zero";
        return os.str();
      }()),
      coords_(std::move(coords)) {}

DiscreteMeasure::DiscreteMeasure(std::vector<Point> points, std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (points.empty()) throw InvalidInput("DiscreteMeasure: no atoms");
  if (points.size() != weights_.size())
    throw InvalidInput("DiscreteMeasure: points and weights differ in length");
  dim_ = points.front().size();
  if (dim_ == 0) throw InvalidInput("DiscreteMeasure: zero dimension");
  coords_.reserve(points.size() * dim_);
  for (const auto& p : points) {
    if (p.size() != dim_) throw InvalidInput("DiscreteMeasure: ragged support points");
    coords_.insert(coords_.end(), p.begin(), p.end());
  }
  check_and_normalize(weights_, "DiscreteMeasure");
}

DiscreteMeasure::DiscreteMeasure(std::size_t dim, std::vector<double> coords,
                                 std::vector<double> weights)
    : dim_(dim), coords_(std::move(coords)), weights_(std::move(weights)) {
  if (dim_ == 0) throw InvalidInput("DiscreteMeasure: zero dimension");
  if (coords_.size() != weights_.size() * dim_)
    throw InvalidInput("DiscreteMeasure: coordinate buffer does not match weights");
  check_and_normalize(weights_, "DiscreteMeasure");
}

DiscreteMeasure DiscreteMeasure::uniform(std::vector<Point> points) {
  const auto n = points.size();
  return {std::move(points), std::vector<double>(n, n ? 1.0 / static_cast<double>(n) : 0.0)};
}

DiscreteMeasure DiscreteMeasure::dirac(Point p) {
  return {std::vector<Point>{std::move(p)}, std::vector<double>{1.0}};
}

std::vector<Point> DiscreteMeasure::points() const {
  std::vector<Point> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    auto p = point(i);
    out.emplace_back(p.begin(), p.end());
  }
  return out;
}

bool DiscreteMeasure::is_uniform() const {
  const double u = 1.0 / static_cast<double>(size());
  return std::all_of(weights_.begin(), weights_.end(),
                     [u](double w) { return std::abs(w - u) <= 1e-12; });
}

CoordMask::CoordMask(std::vector<std::size_t> observed, std::size_t dim)
    : observed_(std::move(observed)), dim_(dim) {
  std::sort(observed_.begin(), observed_.end());
  if (std::adjacent_find(observed_.begin(), observed_.end()) != observed_.end())
    throw InvalidInput("CoordMask: duplicate coordinate");
  if (observed_.empty()) throw InvalidInput("CoordMask: no observed coordinate");
  if (observed_.back() >= dim_) throw InvalidInput("CoordMask: coordinate out of range");
}

CoordMask CoordMask::full(std::size_t dim) {
  std::vector<std::size_t> all(dim);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return {std::move(all), dim};
}

bool CoordMask::observes(std::size_t coord) const {
  return std::binary_search(observed_.begin(), observed_.end(), coord);
}

std::vector<std::size_t> CoordMask::complement() const {
  std::vector<std::size_t> out;
  out.reserve(dim_ - observed_.size());
  std::size_t k = 0;
  for (std::size_t c = 0; c < dim_; ++c) {
    if (k < observed_.size() && observed_[k] == c)
      ++k;
    else
      out.push_back(c);
  }
  return out;
}

Point CoordMask::restrict(std::span<const double> x) const {
  if (x.size() != dim_) throw InvalidInput("CoordMask::restrict: dimension mismatch");
  Point out(observed_.size());
  for (std::size_t k = 0; k < observed_.size(); ++k) out[k] = x[observed_[k]];
  return out;
}

Point CoordMask::recombine(std::span<const double> observed_part,
                           std::span<const double> complement_part) const {
  if (observed_part.size() != observed_.size() ||
      complement_part.size() != dim_ - observed_.size())
    throw InvalidInput("CoordMask::recombine: part sizes do not match the mask");
  Point out(dim_);
  std::size_t k = 0, m = 0;
  for (std::size_t c = 0; c < dim_; ++c) {
    if (k < observed_.size() && observed_[k] == c)
      out[c] = observed_part[k++];
    else
      out[c] = complement_part[m++];
  }
  return out;
}

RandomMeasure::RandomMeasure(std::vector<DiscreteMeasure> components,
                             std::vector<double> mix_weights)
    : components_(std::move(components)), mix_weights_(std::move(mix_weights)) {
  if (components_.empty()) throw InvalidInput("RandomMeasure: no components");
  if (components_.size() != mix_weights_.size())
    throw InvalidInput("RandomMeasure: components and weights differ in length");
  const auto d = components_.front().dim();
  for (const auto& c : components_)
    if (c.dim() != d) throw InvalidInput("RandomMeasure: component dimensions differ");
  check_and_normalize(mix_weights_, "RandomMeasure");
}

RandomMeasure RandomMeasure::single(DiscreteMeasure m) {
  return {std::vector<DiscreteMeasure>{std::move(m)}, std::vector<double>{1.0}};
}

bool RandomMeasure::is_dirac_mixture() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](const DiscreteMeasure& m) { return m.size() == 1; });
}

ObservedMeasure::ObservedMeasure(DiscreteMeasure m, CoordMask k)
    : measure(std::move(m)), mask(std::move(k)) {
  if (measure.dim() != mask.observed_count())
    throw InvalidInput("ObservedMeasure: measure dimension differs from observed coordinate count");
}

DiscreteMeasure push_forward(const DiscreteMeasure& m, const CoordMask& mask) {
  if (m.dim() != mask.dim()) throw InvalidInput("push_forward: dimension mismatch");
  const auto& obs = mask.observed();
  std::vector<double> coords;
  coords.reserve(m.size() * obs.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    auto p = m.point(i);
    for (auto c : obs) coords.push_back(p[c]);
  }
  return {obs.size(), std::move(coords), m.weights()};
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

}  // namespace nakm
