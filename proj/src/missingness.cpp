#include "nakm/missingness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "nakm/gmm.hpp"
#include "nakm/seeding.hpp"

namespace nakm {

void MissingnessConfig::validate(std::size_t k) const {
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("missingness: beta must lie in [0, 1]");
  if (!(quantile >= 0.0 && quantile < 1.0)) throw ConfigError("missingness: quantile must lie in [0, 1)");
  if (!(cap >= 0.0 && cap <= 1.0)) throw ConfigError("missingness: cap must lie in [0, 1]");
  if (!h.empty() && h.size() != k) throw ConfigError("missingness: need one h per cluster");
  for (double v : h)
    if (!(v >= 0.0)) throw ConfigError("missingness: h must be non-negative");
}

MissingnessResult apply_missingness(const Matrix& points, const std::vector<std::size_t>& labels,
                                    const std::vector<double>& alphas, const MissingnessConfig& cfg) {
  const std::size_t k = alphas.size();
  cfg.validate(k);
  const auto n = static_cast<std::size_t>(points.rows());
  const auto d = static_cast<std::size_t>(points.cols());
  if (labels.size() != n) throw InvalidInput("missingness: one label per row required");
  for (auto l : labels)
    if (l >= k) throw InvalidInput("missingness: label out of range");

  MissingnessResult out;
  out.values = points;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  out.h = cfg.h;
  if (out.h.empty()) {
    std::mt19937_64 hr(derive_seed(cfg.seed, "missingness/h"));
    std::uniform_real_distribution<double> u(0.0, 2.0 / static_cast<double>(k));
    for (std::size_t j = 0; j < k; ++j) out.h.push_back(u(hr));
  }

  // (a) below-quantile entries
  if (cfg.quantile > 0.0 && n > 0) {
    for (std::size_t c = 0; c < d; ++c) {
      std::vector<double> col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = points(i, c);
      const double q = quantile(col, cfg.quantile);
      for (std::size_t i = 0; i < n; ++i)
        if (points(i, c) < q) {
          out.values(i, c) = nan;
          ++out.rule_a_cells;
        }
    }
  }

  // (b) per-cluster share of the surviving cells
  std::mt19937_64 rng(derive_seed(cfg.seed, "missingness/cells"));
  for (std::size_t j = 0; j < k; ++j) {
    const double f = std::min(cfg.beta * out.h[j] + (1.0 - cfg.beta) * alphas[j], cfg.cap);
    out.target_fraction.push_back(f);
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t i = 0; i < n; ++i)
      if (labels[i] == j)
        for (std::size_t c = 0; c < d; ++c)
          if (!std::isnan(out.values(i, c))) cells.emplace_back(i, c);
    const auto count = static_cast<std::size_t>(std::llround(f * static_cast<double>(cells.size())));
    for (std::size_t s = 0; s < count; ++s) {
      std::uniform_int_distribution<std::size_t> pick(s, cells.size() - 1);
      std::swap(cells[s], cells[pick(rng)]);
      out.values(cells[s].first, cells[s].second) = nan;
    }
    out.realized_fraction.push_back(cells.empty() ? 0.0
                                                  : static_cast<double>(count) / static_cast<double>(cells.size()));
  }

  // repair rows with nothing observed
  for (std::size_t i = 0; i < n; ++i) {
    bool any = false;
    for (std::size_t c = 0; c < d && !any; ++c) any = !std::isnan(out.values(i, c));
    if (any || d == 0) continue;
    std::uniform_int_distribution<std::size_t> pick(0, d - 1);
    const std::size_t c = pick(rng);
    out.values(i, c) = points(i, c);
    ++out.repaired_rows;
  }
  return out;
}

}  // namespace nakm
