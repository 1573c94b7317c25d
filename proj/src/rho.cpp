#include "nakm/rho.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nakm/transport.hpp"

namespace nakm {

namespace {

struct Canonical {
  std::size_t dim;
  std::vector<double> coords;  // sorted atoms, merged
  std::vector<double> weights;
};

bool lex_less(std::span<const double> a, std::span<const double> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool close(std::span<const double> a, std::span<const double> b, double tol) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k] - b[k]) > tol) return false;
  return true;
}

Canonical canonical(const DiscreteMeasure& m, double tol) {
  std::vector<std::size_t> order(m.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lex_less(m.point(a), m.point(b));
  });
  Canonical c{m.dim(), {}, {}};
  for (std::size_t idx : order) {
    auto p = m.point(idx);
    const std::size_t n = c.weights.size();
    if (n > 0 && close(std::span<const double>(c.coords.data() + (n - 1) * c.dim, c.dim), p, tol)) {
      c.weights.back() += m.weight(idx);
      continue;
    }
    c.coords.insert(c.coords.end(), p.begin(), p.end());
    c.weights.push_back(m.weight(idx));
  }
  return c;
}

bool same_canonical(const Canonical& a, const Canonical& b, double tol) {
  if (a.dim != b.dim || a.weights.size() != b.weights.size()) return false;
  for (std::size_t i = 0; i < a.coords.size(); ++i)
    if (std::abs(a.coords[i] - b.coords[i]) > tol) return false;
  for (std::size_t i = 0; i < a.weights.size(); ++i)
    if (std::abs(a.weights[i] - b.weights[i]) > tol) return false;
  return true;
}

bool canonical_less(const Canonical& a, const Canonical& b) {
  if (a.weights.size() != b.weights.size()) return a.weights.size() < b.weights.size();
  if (a.coords != b.coords)
    return std::lexicographical_compare(a.coords.begin(), a.coords.end(), b.coords.begin(),
                                        b.coords.end());
  return std::lexicographical_compare(a.weights.begin(), a.weights.end(), b.weights.begin(),
                                      b.weights.end());
}

// Components in canonical form, sorted, with equal components merged.
std::vector<std::pair<Canonical, double>> canonical(const RandomMeasure& r, double tol) {
  std::vector<std::pair<Canonical, double>> items;
  for (std::size_t l = 0; l < r.size(); ++l)
    items.emplace_back(canonical(r.components()[l], tol), r.mix_weights()[l]);
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return canonical_less(a.first, b.first); });
  std::vector<std::pair<Canonical, double>> merged;
  for (auto& it : items) {
    if (!merged.empty() && same_canonical(merged.back().first, it.first, tol)) {
      merged.back().second += it.second;
      continue;
    }
    merged.push_back(std::move(it));
  }
  return merged;
}

}  // namespace

bool same_measure(const DiscreteMeasure& a, const DiscreteMeasure& b, double tol) {
  if (a.dim() != b.dim()) return false;
  return same_canonical(canonical(a, tol), canonical(b, tol), tol);
}

bool same_random_measure(const RandomMeasure& a, const RandomMeasure& b, double tol) {
  if (a.dim() != b.dim()) return false;
  const auto ca = canonical(a, tol);
  const auto cb = canonical(b, tol);
  if (ca.size() != cb.size()) return false;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (!same_canonical(ca[i].first, cb[i].first, tol)) return false;
    if (std::abs(ca[i].second - cb[i].second) > tol) return false;
  }
  return true;
}

double rho_points(const RandomMeasure& alpha, const RandomMeasure& beta) {
  if (alpha.dim() != beta.dim()) throw InvalidInput("rho_points: dimension mismatch");
  if (!alpha.is_dirac_mixture() || !beta.is_dirac_mixture())
    throw InvalidInput("rho_points: arguments must be mixtures of Diracs");
  if (same_random_measure(alpha, beta)) return 0.0;
  double s = 0.0;
  for (std::size_t l = 0; l < alpha.size(); ++l) {
    const double p = alpha.mix_weights()[l];
    if (p == 0.0) continue;
    auto x = alpha.components()[l].point(0);
    for (std::size_t m = 0; m < beta.size(); ++m) {
      const double q = beta.mix_weights()[m];
      if (q == 0.0) continue;
      s += p * q * std::sqrt(squared_distance(x, beta.components()[m].point(0)));
    }
  }
  return s;
}

double rho_measures(const RandomMeasure& a, const RandomMeasure& b) {
  if (a.dim() != b.dim()) throw InvalidInput("rho_measures: dimension mismatch");
  if (same_random_measure(a, b)) return 0.0;
  double s = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    const double p = a.mix_weights()[l];
    if (p == 0.0) continue;
    for (std::size_t m = 0; m < b.size(); ++m) {
      const double q = b.mix_weights()[m];
      if (q == 0.0) continue;
      s += p * q * w2(a.components()[l], b.components()[m]);
    }
  }
  return s;
}

}  // namespace nakm
