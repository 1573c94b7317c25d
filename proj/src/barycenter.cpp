#include "nakm/barycenter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "nakm/transport.hpp"

namespace nakm {

namespace {

double max_displacement(const std::vector<double>& a, const std::vector<double>& b,
                        std::size_t dim) {
  double worst = 0.0;
  for (std::size_t k = 0; k * dim < a.size(); ++k) {
    double s = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
      const double t = a[k * dim + c] - b[k * dim + c];
      s += t * t;
    }
    worst = std::max(worst, std::sqrt(s));
  }
  return worst;
}

DiscreteMeasure uniform_from_coords(std::size_t dim, std::vector<double> coords) {
  const std::size_t m = coords.size() / dim;
  return {dim, std::move(coords), std::vector<double>(m, 1.0 / static_cast<double>(m))};
}

void check_init(const DiscreteMeasure& init, std::size_t support, std::size_t dim,
                const char* who) {
  if (init.dim() != dim) throw InvalidInput(std::string(who) + ": initial measure has wrong dimension");
  if (init.size() != support)
    throw InvalidInput(std::string(who) + ": initial measure must have support_size atoms");
  if (!init.is_uniform())
    throw InvalidInput(std::string(who) + ": initial measure must have uniform weights");
}

// Optimal plans and costs from the current iterate to every input.
struct Sweep {
  std::vector<TransportResult> to_inputs;
  TransportResult to_prev;
  double objective = 0.0;
};

Sweep sweep_generalized(std::span<const ObservedMeasure> observed, const BarycenterConfig& cfg,
                        const DiscreteMeasure& x, const DiscreteMeasure& prev, double damping) {
  Sweep s;
  s.to_inputs.resize(observed.size());
  double data = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (cfg.weight(i) == 0.0) continue;
    s.to_inputs[i] = solve_exact_ot(push_forward(x, observed[i].mask), observed[i].measure);
    data += cfg.weight(i) * s.to_inputs[i].cost;
  }
  s.objective = (1.0 - damping) * data;
  if (damping > 0.0) {
    s.to_prev = solve_exact_ot(x, prev);
    s.objective += damping * s.to_prev.cost;
  }
  return s;
}

}  // namespace

void BarycenterConfig::validate(std::size_t inputs) const {
  if (support_size < 1) throw ConfigError("barycenter: support_size must be >= 1");
  if (max_iters < 1) throw ConfigError("barycenter: max_iters must be >= 1");
  if (!(tol > 0.0)) throw ConfigError("barycenter: tol must be positive");
  if (!weights.empty()) {
    if (weights.size() != inputs) throw ConfigError("barycenter: one weight per input required");
    double s = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("barycenter: weights must be >= 0");
      s += w;
    }
    if (!(s > 0.0)) throw ConfigError("barycenter: weights must not all be zero");
  }
}

double barycenter_objective(std::span<const DiscreteMeasure> measures,
                            const BarycenterConfig& cfg, const DiscreteMeasure& nu) {
  double s = 0.0;
  for (std::size_t i = 0; i < measures.size(); ++i)
    if (cfg.weight(i) != 0.0) s += cfg.weight(i) * w2_squared(measures[i], nu);
  return s;
}

double generalized_objective(std::span<const ObservedMeasure> observed, const BarycenterConfig& cfg,
                             const DiscreteMeasure& nu, const DiscreteMeasure& prev,
                             double damping) {
  return sweep_generalized(observed, cfg, nu, prev, damping).objective;
}

BarycenterResult free_support_barycenter(std::span<const DiscreteMeasure> measures,
                                         const BarycenterConfig& cfg,
                                         const DiscreteMeasure& init) {
  if (measures.empty()) throw InvalidInput("free_support_barycenter: no input measures");
  cfg.validate(measures.size());
  const std::size_t d = measures.front().dim();
  for (const auto& m : measures)
    if (m.dim() != d) throw InvalidInput("free_support_barycenter: input dimensions differ");
  check_init(init, cfg.support_size, d, "free_support_barycenter");

  double total = 0.0;
  for (std::size_t i = 0; i < measures.size(); ++i) total += cfg.weight(i);

  auto solve_all = [&](const DiscreteMeasure& x, std::vector<TransportResult>& plans) {
    plans.assign(measures.size(), {});
    double obj = 0.0;
    for (std::size_t i = 0; i < measures.size(); ++i) {
      if (cfg.weight(i) == 0.0) continue;
      plans[i] = solve_exact_ot(x, measures[i]);
      obj += cfg.weight(i) * plans[i].cost;
    }
    return obj;
  };

  DiscreteMeasure x = init;
  std::vector<TransportResult> plans;
  double obj = solve_all(x, plans);
  BarycenterResult res{x, {obj}, 0, false};
  const std::size_t m = cfg.support_size;

  for (int it = 0; it < cfg.max_iters; ++it) {
    std::vector<double> coords(m * d, 0.0);
    for (std::size_t i = 0; i < measures.size(); ++i) {
      if (cfg.weight(i) == 0.0) continue;
      const double share = cfg.weight(i) / total;
      const auto t = barycentric_map(plans[i].coupling, measures[i]);
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t c = 0; c < d; ++c) coords[k * d + c] += share * t[k][c];
    }
    const double moved = max_displacement(coords, x.coords(), d);
    DiscreteMeasure next = uniform_from_coords(d, std::move(coords));
    std::vector<TransportResult> next_plans;
    const double next_obj = solve_all(next, next_plans);
    if (next_obj > obj) {
      // Round-off only; the exact map cannot increase the objective.
      res.converged = true;
      break;
    }
    x = std::move(next);
    plans = std::move(next_plans);
    obj = next_obj;
    res.objective_trace.push_back(obj);
    res.iterations = it + 1;
    if (moved < cfg.tol) {
      res.converged = true;
      break;
    }
  }
  res.barycenter = std::move(x);
  return res;
}

BarycenterResult generalized_barycenter(std::span<const ObservedMeasure> observed,
                                        const BarycenterConfig& cfg, const DiscreteMeasure& prev,
                                        double damping, UnobservedPolicy policy) {
  if (observed.empty()) throw InvalidInput("generalized_barycenter: no input measures");
  if (!(damping >= 0.0 && damping < 1.0))
    throw ConfigError("generalized_barycenter: damping must lie in [0, 1)");
  cfg.validate(observed.size());
  const std::size_t d = observed.front().full_dim();
  for (const auto& o : observed)
    if (o.full_dim() != d) throw InvalidInput("generalized_barycenter: masks differ in full dimension");
  check_init(prev, cfg.support_size, d, "generalized_barycenter");
  const std::size_t m = cfg.support_size;

  // Per-coordinate normalizer: weights of the terms that see coordinate c.
  std::vector<double> denom(d, damping);
  for (std::size_t i = 0; i < observed.size(); ++i)
    for (auto c : observed[i].mask.observed()) denom[c] += (1.0 - damping) * cfg.weight(i);
  std::vector<std::size_t> free_coords;
  for (std::size_t c = 0; c < d; ++c)
    if (denom[c] == 0.0) free_coords.push_back(c);
  if (!free_coords.empty() && policy == UnobservedPolicy::Error)
    throw UnconstrainedCoordinate(free_coords);

  DiscreteMeasure x = prev;
  Sweep sweep = sweep_generalized(observed, cfg, x, prev, damping);
  BarycenterResult res{x, {sweep.objective}, 0, false};

  for (int it = 0; it < cfg.max_iters; ++it) {
    std::vector<double> num(m * d, 0.0);
    for (std::size_t i = 0; i < observed.size(); ++i) {
      const double w = (1.0 - damping) * cfg.weight(i);
      if (w == 0.0) continue;
      const auto t = barycentric_map(sweep.to_inputs[i].coupling, observed[i].measure);
      const auto& obs = observed[i].mask.observed();
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t q = 0; q < obs.size(); ++q) num[k * d + obs[q]] += w * t[k][q];
    }
    if (damping > 0.0) {
      const auto t = barycentric_map(sweep.to_prev.coupling, prev);
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t c = 0; c < d; ++c) num[k * d + c] += damping * t[k][c];
    }
    std::vector<double> coords(m * d);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t c = 0; c < d; ++c)
        coords[k * d + c] = denom[c] > 0.0 ? num[k * d + c] / denom[c] : x.coords()[k * d + c];

    const double moved = max_displacement(coords, x.coords(), d);
    DiscreteMeasure next = uniform_from_coords(d, std::move(coords));
    Sweep next_sweep = sweep_generalized(observed, cfg, next, prev, damping);
    if (next_sweep.objective > sweep.objective) {
      res.converged = true;
      break;
    }
    x = std::move(next);
    sweep = std::move(next_sweep);
    res.objective_trace.push_back(sweep.objective);
    res.iterations = it + 1;
    if (moved < cfg.tol) {
      res.converged = true;
      break;
    }
  }
  res.barycenter = std::move(x);
  return res;
}

DiscreteMeasure resample_uniform(const DiscreteMeasure& src, std::size_t support_size) {
  if (support_size < 1) throw ConfigError("resample_uniform: support_size must be >= 1");
  if (src.size() == support_size && src.is_uniform()) {
    return uniform_from_coords(src.dim(), src.coords());
  }
  std::vector<double> coords;
  coords.reserve(support_size * src.dim());
  double cum = src.weight(0);
  std::size_t j = 0;
  for (std::size_t s = 0; s < support_size; ++s) {
    const double u = (static_cast<double>(s) + 0.5) / static_cast<double>(support_size);
    while (u > cum && j + 1 < src.size()) cum += src.weight(++j);
    auto p = src.point(j);
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return uniform_from_coords(src.dim(), std::move(coords));
}

DiscreteMeasure default_barycenter_init(std::span<const ObservedMeasure> observed,
                                        std::size_t support_size) {
  if (observed.empty()) throw InvalidInput("default_barycenter_init: no input measures");
  const std::size_t d = observed.front().full_dim();
  std::vector<double> sum(d, 0.0);
  std::vector<std::size_t> count(d, 0);
  std::size_t largest = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const auto& o = observed[i];
    if (o.measure.size() > observed[largest].measure.size()) largest = i;
    const auto& obs = o.mask.observed();
    for (std::size_t q = 0; q < obs.size(); ++q) {
      double mean = 0.0;
      for (std::size_t a = 0; a < o.measure.size(); ++a)
        mean += o.measure.weight(a) * o.measure.point(a)[q];
      sum[obs[q]] += mean;
      ++count[obs[q]];
    }
  }
  const auto& src = observed[largest];
  const auto comp = src.mask.complement();
  std::vector<double> fill(comp.size());
  for (std::size_t r = 0; r < comp.size(); ++r)
    fill[r] = count[comp[r]] ? sum[comp[r]] / static_cast<double>(count[comp[r]]) : 0.0;
  std::vector<double> coords;
  coords.reserve(src.measure.size() * d);
  for (std::size_t a = 0; a < src.measure.size(); ++a) {
    const auto full = src.mask.recombine(src.measure.point(a), fill);
    coords.insert(coords.end(), full.begin(), full.end());
  }
  DiscreteMeasure lifted(d, std::move(coords), src.measure.weights());
  return resample_uniform(lifted, support_size);
}

ClassicalReduction reduce_to_classical(std::span<const ObservedMeasure> observed,
                                       std::span<const double> weights) {
  if (observed.empty()) throw InvalidInput("reduce_to_classical: no input measures");
  if (weights.size() != observed.size())
    throw ConfigError("reduce_to_classical: one weight per input required");
  const std::size_t d = observed.front().full_dim();
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw ConfigError("reduce_to_classical: weights must not all be zero");

  ClassicalReduction r;
  r.weights.reserve(weights.size());
  for (double w : weights) {
    if (!(w >= 0.0)) throw ConfigError("reduce_to_classical: weights must be >= 0");
    r.weights.push_back(w / total);
  }
  r.a = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (observed[i].full_dim() != d)
      throw InvalidInput("reduce_to_classical: masks differ in full dimension");
    for (auto c : observed[i].mask.observed()) r.a(c, c) += r.weights[i];
  }
  std::vector<std::size_t> singular;
  for (std::size_t c = 0; c < d; ++c)
    if (!(r.a(c, c) > 0.0)) singular.push_back(c);
  if (!singular.empty()) {
    std::ostringstream os;
    os << "reduce_to_classical: A is singular, unobserved coordinate(s):";
    for (auto c : singular) os << ' ' << c;
    throw NumericalError(os.str());
  }

  for (const auto& o : observed) {
    const auto& obs = o.mask.observed();
    std::vector<double> coords(o.measure.size() * d, 0.0);
    for (std::size_t a = 0; a < o.measure.size(); ++a) {
      auto p = o.measure.point(a);
      for (std::size_t q = 0; q < obs.size(); ++q)
        coords[a * d + obs[q]] = p[q] / std::sqrt(r.a(obs[q], obs[q]));
    }
    r.transformed.emplace_back(d, std::move(coords), o.measure.weights());
  }
  return r;
}

namespace {

DiscreteMeasure scale_coords(const ClassicalReduction& r, const DiscreteMeasure& nu,
                             double exponent) {
  const std::size_t d = static_cast<std::size_t>(r.a.rows());
  if (nu.dim() != d) throw InvalidInput("classical map: dimension mismatch");
  std::vector<double> coords = nu.coords();
  for (std::size_t a = 0; a < nu.size(); ++a)
    for (std::size_t c = 0; c < d; ++c) coords[a * d + c] *= std::pow(r.a(c, c), exponent);
  return {d, std::move(coords), nu.weights()};
}

}  // namespace

DiscreteMeasure to_classical(const ClassicalReduction& r, const DiscreteMeasure& nu) {
  return scale_coords(r, nu, 0.5);
}

DiscreteMeasure from_classical(const ClassicalReduction& r, const DiscreteMeasure& nu_tilde) {
  return scale_coords(r, nu_tilde, -0.5);
}

}  // namespace nakm
