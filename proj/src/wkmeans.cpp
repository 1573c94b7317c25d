#include "nakm/wkmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "nakm/barycenter.hpp"
#include "nakm/parallel.hpp"
#include "nakm/rho.hpp"
#include "nakm/transport.hpp"

namespace nakm {

namespace {

constexpr double kTieTol = 1e-12;

}  // namespace

LambdaSchedule::LambdaSchedule(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ConfigError("lambda schedule: no values");
  for (double v : values_)
    if (!(v >= 0.0 && v < 1.0)) throw ConfigError("lambda schedule: values must lie in [0, 1)");
}

LambdaSchedule LambdaSchedule::shifted_sqrt(int max_iters) {
  std::vector<double> v(static_cast<std::size_t>(std::max(max_iters, 0)) + 1);
  for (std::size_t t = 0; t < v.size(); ++t) v[t] = 1.0 / std::sqrt(static_cast<double>(t) + 2.0);
  return LambdaSchedule(std::move(v));
}

LambdaSchedule LambdaSchedule::constant(double value, int max_iters) {
  return LambdaSchedule(std::vector<double>(static_cast<std::size_t>(std::max(max_iters, 0)) + 1, value));
}

LambdaSchedule LambdaSchedule::parse(const std::string& spec, int max_iters) {
  if (spec.empty() || spec == "sqrt") return shifted_sqrt(max_iters);
  if (spec == "zero") return constant(0.0, max_iters);
  try {
    if (spec.rfind("const:", 0) == 0) return constant(std::stod(spec.substr(6)), max_iters);
    std::vector<double> v;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
    return LambdaSchedule(std::move(v));
  } catch (const std::invalid_argument&) {
    throw ConfigError("lambda schedule: cannot parse '" + spec + "'");
  } catch (const std::out_of_range&) {
    throw ConfigError("lambda schedule: cannot parse '" + spec + "'");
  }
}

double LambdaSchedule::at(std::size_t t) const {
  return values_[std::min(t, values_.size() - 1)];
}

std::size_t na_w_assign(const ObservedMeasure& obs, std::span<const DiscreteMeasure> barycenters,
                        std::optional<std::size_t> current) {
  if (barycenters.empty()) throw InvalidInput("na_w_assign: no barycenters");
  std::vector<double> cost(barycenters.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < barycenters.size(); ++j) {
    cost[j] = w2_squared(obs.measure, push_forward(barycenters[j], obs.mask));
    best = std::min(best, cost[j]);
  }
  if (current && *current < cost.size() && cost[*current] <= best + kTieTol) return *current;
  for (std::size_t j = 0; j < cost.size(); ++j)
    if (cost[j] <= best + kTieTol) return j;
  return 0;
}

double loss_L(std::span<const ObservedMeasure> dataset, std::span<const DiscreteMeasure> barycenters,
              std::span<const std::size_t> assignments) {
  if (assignments.size() != dataset.size()) throw InvalidInput("loss_L: assignment length differs");
  std::vector<double> terms(dataset.size());
  parallel_for(dataset.size(), [&](std::size_t i) {
    terms[i] = w2_squared(dataset[i].measure,
                          push_forward(barycenters[assignments[i]], dataset[i].mask));
  });
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

std::size_t default_support_size(std::span<const ObservedMeasure> dataset) {
  std::size_t m = 1;
  for (const auto& o : dataset) m = std::max(m, o.measure.size());
  return m;
}

std::vector<DiscreteMeasure> initial_barycenters(std::span<const ObservedMeasure> dataset,
                                                 std::size_t k, std::size_t support_size,
                                                 std::uint64_t seed) {
  if (k == 0) throw ConfigError("k must be >= 1");
  if (k > dataset.size()) throw ConfigError("k exceeds the number of measures");
  const std::size_t d = dataset.front().full_dim();

  std::vector<DiscreteMeasure> candidates;
  for (const auto& o : dataset)
    if (o.mask.is_full()) candidates.push_back(o.measure);
  if (candidates.size() < k) {
    std::vector<double> sum(d, 0.0);
    std::vector<std::size_t> count(d, 0);
    for (const auto& o : dataset) {
      const auto& obs = o.mask.observed();
      for (std::size_t q = 0; q < obs.size(); ++q) {
        double mean = 0.0;
        for (std::size_t a = 0; a < o.measure.size(); ++a)
          mean += o.measure.weight(a) * o.measure.point(a)[q];
        sum[obs[q]] += mean;
        ++count[obs[q]];
      }
    }
    for (const auto& o : dataset) {
      if (o.mask.is_full()) continue;
      const auto comp = o.mask.complement();
      std::vector<double> fill(comp.size());
      for (std::size_t r = 0; r < comp.size(); ++r)
        fill[r] = count[comp[r]] ? sum[comp[r]] / static_cast<double>(count[comp[r]]) : 0.0;
      std::vector<double> coords;
      for (std::size_t a = 0; a < o.measure.size(); ++a) {
        const auto full = o.mask.recombine(o.measure.point(a), fill);
        coords.insert(coords.end(), full.begin(), full.end());
      }
      candidates.emplace_back(d, std::move(coords), o.measure.weights());
    }
  }

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> chosen{
      std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)};
  std::vector<double> nearest(candidates.size(), std::numeric_limits<double>::infinity());
  std::vector<char> taken(candidates.size(), 0);
  taken[chosen[0]] = 1;
  while (chosen.size() < k) {
    const auto& last = candidates[chosen.back()];
    std::vector<double> dist(candidates.size(), 0.0);
    parallel_for(candidates.size(), [&](std::size_t c) {
      if (!taken[c]) dist[c] = w2_squared(candidates[c], last);
    });
    std::size_t pick = candidates.size();
    double far = -1.0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (taken[c]) continue;
      nearest[c] = std::min(nearest[c], dist[c]);
      if (nearest[c] > far) {
        far = nearest[c];
        pick = c;
      }
    }
    taken[pick] = 1;
    chosen.push_back(pick);
  }
  std::vector<DiscreteMeasure> out;
  for (auto c : chosen) out.push_back(resample_uniform(candidates[c], support_size));
  return out;
}

WClustering na_w_kmeans(std::span<const ObservedMeasure> dataset, const WKMeansOptions& opts) {
  if (dataset.empty()) throw InvalidInput("na_w_kmeans: empty dataset");
  if (opts.k > dataset.size()) throw ConfigError("k exceeds the number of measures");
  const std::size_t m = opts.support_size ? opts.support_size : default_support_size(dataset);
  return na_w_kmeans(dataset, initial_barycenters(dataset, opts.k, m, opts.seed), opts);
}

WClustering na_w_kmeans(std::span<const ObservedMeasure> dataset,
                        std::vector<DiscreteMeasure> init, const WKMeansOptions& opts) {
  const std::size_t n = dataset.size();
  const std::size_t k = init.size();
  if (n == 0) throw InvalidInput("na_w_kmeans: empty dataset");
  if (k == 0) throw ConfigError("k must be >= 1");
  if (k > n) throw ConfigError("k exceeds the number of measures");
  if (opts.max_iters < 1) throw ConfigError("max_iters (T) must be >= 1");
  const std::size_t d = dataset.front().full_dim();
  for (const auto& o : dataset)
    if (o.full_dim() != d) throw InvalidInput("na_w_kmeans: measures differ in full dimension");
  const std::size_t m = init.front().size();
  for (const auto& b : init)
    if (b.dim() != d || b.size() != m || !b.is_uniform())
      throw InvalidInput("na_w_kmeans: initial barycenters must be uniform with a common support size");
  const LambdaSchedule schedule =
      opts.schedule ? *opts.schedule : LambdaSchedule::shifted_sqrt(opts.max_iters);

  BarycenterConfig cfg;
  cfg.support_size = m;
  cfg.max_iters = opts.barycenter_max_iters;
  cfg.tol = opts.barycenter_tol;

  WClustering out;
  out.barycenters = std::move(init);
  std::vector<std::size_t> a(n, k);  // k marks "unassigned"
  for (int t = 0; t < opts.max_iters; ++t) {
    const double lambda = schedule.at(static_cast<std::size_t>(t));
    std::vector<std::size_t> next(n);
    parallel_for(n, [&](std::size_t i) {
      next[i] = na_w_assign(dataset[i], out.barycenters,
                            a[i] < k ? std::optional<std::size_t>(a[i]) : std::nullopt);
    });
    out.iterations = t + 1;
    if (next == a) {
      // Barycenters stay those the assignment was optimal for.
      out.converged = true;
      out.loss_trace.push_back(out.loss_trace.back());
      break;
    }
    a = std::move(next);

    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < n; ++i) members[a[i]].push_back(i);
    std::vector<DiscreteMeasure> updated = out.barycenters;
    parallel_for(k, [&](std::size_t j) {
      if (members[j].empty()) return;
      std::vector<ObservedMeasure> group;
      group.reserve(members[j].size());
      for (auto i : members[j]) group.push_back(dataset[i]);
      updated[j] = generalized_barycenter(group, cfg, out.barycenters[j], lambda,
                                          UnobservedPolicy::KeepPrevious)
                       .barycenter;
    });
    std::vector<std::size_t> empty;
    for (std::size_t j = 0; j < k; ++j)
      if (members[j].empty()) empty.push_back(j);
    out.barycenters = std::move(updated);
    out.empty_clusters.push_back(std::move(empty));
    out.damping_schedule_used.push_back(lambda);
    out.history.push_back(a);
    out.loss_trace.push_back(loss_L(dataset, out.barycenters, a));
  }
  out.assignments = std::move(a);
  return out;
}

std::vector<double> donor_weights(std::span<const double> sq_distances, double temperature) {
  if (!(temperature > 0.0)) throw ConfigError("imputation temperature must be positive");
  const std::size_t n = sq_distances.size();
  if (n == 0) throw InvalidInput("donor_weights: no donors");
  if (n == 1) return {1.0};
  double sigma2 = 0.0;
  for (double v : sq_distances) sigma2 += v;
  sigma2 /= static_cast<double>(n - 1);
  if (!(sigma2 > 0.0)) return std::vector<double>(n, 1.0 / static_cast<double>(n));
  std::vector<double> logw(n);
  for (std::size_t l = 0; l < n; ++l) logw[l] = -temperature / (2.0 * sigma2) * sq_distances[l];
  const double top = *std::max_element(logw.begin(), logw.end());
  std::vector<double> w(n);
  double total = 0.0;
  for (std::size_t l = 0; l < n; ++l) total += (w[l] = std::exp(logw[l] - top));
  for (double& v : w) v /= total;
  return w;
}

DiscreteMeasure complete_measure(const ObservedMeasure& obs, const DiscreteMeasure& donor,
                                 std::size_t atom_cap, bool* thinned) {
  const std::size_t d = obs.full_dim();
  if (donor.dim() != d) throw InvalidInput("complete_measure: donor must be full-dimensional");
  const auto comp = obs.mask.complement();
  const std::size_t na = obs.measure.size();

  // Donor complement atoms with their weights, possibly thinned.
  std::vector<std::size_t> picks;
  std::vector<double> pick_w;
  const std::size_t keep = std::max<std::size_t>(1, atom_cap / std::max<std::size_t>(na, 1));
  if (thinned) *thinned = false;
  if (atom_cap > 0 && na * donor.size() > atom_cap && keep < donor.size()) {
    if (thinned) *thinned = true;
    double cum = donor.weight(0);
    std::size_t j = 0;
    for (std::size_t s = 0; s < keep; ++s) {
      const double u = (static_cast<double>(s) + 0.5) / static_cast<double>(keep);
      while (u > cum && j + 1 < donor.size()) cum += donor.weight(++j);
      picks.push_back(j);
      pick_w.push_back(1.0 / static_cast<double>(keep));
    }
  } else {
    for (std::size_t j = 0; j < donor.size(); ++j) {
      picks.push_back(j);
      pick_w.push_back(donor.weight(j));
    }
  }

  std::vector<double> coords;
  std::vector<double> weights;
  coords.reserve(na * picks.size() * d);
  weights.reserve(na * picks.size());
  Point missing(comp.size());
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t s = 0; s < picks.size(); ++s) {
      auto y = donor.point(picks[s]);
      for (std::size_t r = 0; r < comp.size(); ++r) missing[r] = y[comp[r]];
      const auto full = obs.mask.recombine(obs.measure.point(a), missing);
      coords.insert(coords.end(), full.begin(), full.end());
      weights.push_back(obs.measure.weight(a) * pick_w[s]);
    }
  }
  return {d, std::move(coords), std::move(weights)};
}

WImputation impute_soft_wasserstein(std::span<const ObservedMeasure> dataset,
                                    const WClustering& clustering, const WImputeOptions& opts) {
  if (!(opts.temperature > 0.0)) throw ConfigError("imputation temperature must be positive");
  const std::size_t n = dataset.size();
  if (clustering.assignments.size() != n)
    throw InvalidInput("impute_soft_wasserstein: clustering does not match dataset");
  const std::size_t k = clustering.barycenters.size();
  std::vector<std::vector<std::size_t>> donors(k);
  for (std::size_t i = 0; i < n; ++i)
    if (dataset[i].mask.is_full()) donors[clustering.assignments[i]].push_back(i);

  std::vector<std::optional<RandomMeasure>> slots(n);
  std::vector<std::size_t> thinned(n, 0);
  parallel_for(n, [&](std::size_t i) {
    const auto& o = dataset[i];
    if (o.mask.is_full()) {
      slots[i] = RandomMeasure::single(o.measure);
      return;
    }
    const auto& pool = donors[clustering.assignments[i]];
    bool t = false;
    if (pool.empty()) {
      slots[i] = RandomMeasure::single(
          complete_measure(o, clustering.barycenters[clustering.assignments[i]], opts.atom_cap, &t));
      thinned[i] = t;
      return;
    }
    std::vector<double> sq(pool.size());
    for (std::size_t l = 0; l < pool.size(); ++l)
      sq[l] = w2_squared(o.measure, push_forward(dataset[pool[l]].measure, o.mask));
    auto w = donor_weights(sq, opts.temperature);
    std::vector<DiscreteMeasure> comps;
    for (auto l : pool) {
      comps.push_back(complete_measure(o, dataset[l].measure, opts.atom_cap, &t));
      thinned[i] += t;
    }
    slots[i] = RandomMeasure(std::move(comps), std::move(w));
  });
  WImputation out;
  out.measures.reserve(n);
  for (auto& s : slots) out.measures.push_back(std::move(*s));
  for (auto t : thinned) out.thinned += t;
  return out;
}

Matrix pairwise_rho_w(std::span<const RandomMeasure> randoms) {
  const auto n = static_cast<Eigen::Index>(randoms.size());
  Matrix out = Matrix::Zero(n, n);
  parallel_for(randoms.size(), [&](std::size_t i) {
    for (std::size_t j = i + 1; j < randoms.size(); ++j)
      out(i, j) = rho_measures(randoms[i], randoms[j]);
  });
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) out(j, i) = out(i, j);
  return out;
}

Matrix pairwise_w2(std::span<const DiscreteMeasure> measures) {
  const auto n = static_cast<Eigen::Index>(measures.size());
  Matrix out = Matrix::Zero(n, n);
  parallel_for(measures.size(), [&](std::size_t i) {
    for (std::size_t j = i + 1; j < measures.size(); ++j) out(i, j) = w2(measures[i], measures[j]);
  });
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) out(j, i) = out(i, j);
  return out;
}

}  // namespace nakm
