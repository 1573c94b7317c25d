#include "nakm/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "nakm/baselines.hpp"
#include "nakm/euclid_kmeans.hpp"
#include "nakm/gmm.hpp"
#include "nakm/gromov.hpp"
#include "nakm/missingness.hpp"
#include "nakm/parallel.hpp"
#include "nakm/rand_index.hpp"
#include "nakm/scenarios.hpp"
#include "nakm/seeding.hpp"

namespace nakm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string>& gw_columns() {
  static const std::vector<std::string> cols{"na-kmeans", "na-kmeans-m", "mean", "median",
                                             "multiple", "knn", "lr"};
  return cols;
}

const std::vector<std::string>& rand_columns() {
  static const std::vector<std::string> cols{"na-kmeans", "mean", "median", "multiple",
                                             "knn", "lr", "kpod"};
  return cols;
}

bool applies(const std::string& method, const std::string& metric) {
  const auto& cols = metric == "gw" ? gw_columns() : rand_columns();
  return std::find(cols.begin(), cols.end(), method) != cols.end();
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string num(double v) { return std::isfinite(v) ? fmt("%.10g", v) : ""; }

struct Setting {
  std::string label;
  double beta;
};

// One replication's scores: method -> metric -> value.
using Scores = std::map<std::string, std::map<std::string, double>>;

struct Replicate {
  Matrix points;
  std::vector<std::size_t> labels;
  std::vector<double> alphas;
  std::vector<double> importance;
  Matrix truth;
};

Replicate generate(const ExperimentConfig& cfg, std::uint64_t rep_seed) {
  Replicate r;
  GmmSample s;
  if (cfg.scenario == Scenario::MnarToy) {
    const GmmConfig g = mnar_toy_config(rep_seed);
    s = sample_gmm(g);
    r.alphas = g.alphas;
  } else {
    const GmmConfig g = random_gmm_config(cfg.k, cfg.d, cfg.n, derive_seed(rep_seed, "gmm"));
    s = sample_gmm(g);
    standardize(s.points);
    r.alphas = g.alphas;
  }
  r.points = std::move(s.points);
  r.labels = std::move(s.labels);
  r.importance = sample_importance(r.labels.size(), cfg.importance_mu, cfg.importance_sigma,
                                   derive_seed(rep_seed, "importance"));
  r.truth = euclidean_distances(r.points);
  return r;
}

Scores score(const ExperimentConfig& cfg, const Replicate& rep, const Setting& setting,
             std::uint64_t rep_seed) {
  Matrix values;
  if (cfg.scenario == Scenario::MnarToy) {
    values = mnar_mask(rep.points);
  } else {
    MissingnessConfig m;
    m.beta = setting.beta;
    m.quantile = cfg.quantile;
    m.cap = cfg.cap;
    m.h = cfg.h;
    m.seed = derive_seed(rep_seed, "missingness");
    values = apply_missingness(rep.points, rep.labels, rep.alphas, m).values;
  }
  const NADataset data(values, rep.importance);
  const bool want_gw = std::count(cfg.metrics.begin(), cfg.metrics.end(), "gw") > 0;
  const bool want_rand = std::count(cfg.metrics.begin(), cfg.metrics.end(), "rand") > 0;
  const std::size_t k = cfg.scenario == Scenario::MnarToy ? 3 : cfg.k;

  const Matrix init = initial_centroids(data, k, derive_seed(rep_seed, "init"));
  const MetricMeasureSpace truth(rep.truth, rep.importance);
  auto gw = [&](const Matrix& dist, const std::string& method) {
    GwOptions o;
    o.restarts = cfg.gw_restarts;
    o.seed = derive_seed(rep_seed, "gw/" + method);
    return gromov_wasserstein(truth, MetricMeasureSpace(dist, rep.importance), o).value;
  };
  auto rand = [&](const std::vector<std::size_t>& a) { return rand_index(rep.labels, a); };

  Scores out;
  std::optional<Clustering> na;
  for (const auto& method : cfg.methods) {
    if (method == "multiple") continue;
    auto& cell = out[method];
    try {
      if (method == "na-kmeans" || method == "na-kmeans-m") {
        if (!na) na = na_kmeans(data, init, cfg.max_iters);
        if (want_rand && applies(method, "rand")) cell["rand"] = rand(na->assignments);
        if (want_gw) {
          const auto thetas = impute_soft_euclid(data, *na);
          if (method == "na-kmeans") {
            cell["gw"] = gw(pairwise_rho(thetas), method);
          } else {
            Matrix pts(static_cast<Eigen::Index>(data.rows()), static_cast<Eigen::Index>(data.dim()));
            for (std::size_t i = 0; i < data.rows(); ++i) {
              const Point p = impute_mean_point(thetas[i]);
              for (std::size_t c = 0; c < data.dim(); ++c) pts(i, c) = p[c];
            }
            cell["gw"] = gw(euclidean_distances(pts), method);
          }
        }
      } else if (method == "kpod") {
        if (want_rand) cell["rand"] = rand(kpod(data, init, cfg.max_iters).assignments);
      } else {
        const Matrix pts = baseline_impute(parse_imputer(method), data).points;
        if (want_gw) cell["gw"] = gw(euclidean_distances(pts), method);
        if (want_rand) cell["rand"] = rand(lloyd_kmeans(pts, init, cfg.max_iters).assignments);
      }
    } catch (const Error&) {
      for (const auto& metric : cfg.metrics) cell[metric] = kNaN;
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> known_methods() {
  return {"na-kmeans", "na-kmeans-m", "mean", "median", "multiple", "knn", "lr", "kpod"};
}

std::string method_label(const std::string& method) {
  static const std::map<std::string, std::string> labels{
      {"na-kmeans", "NA k-means"}, {"na-kmeans-m", "NA k-means-m"}, {"mean", "mean imp."},
      {"median", "median imp."},   {"multiple", "multiple imp."},   {"knn", "KNN"},
      {"lr", "LR"},                {"kpod", "k-pod"}};
  const auto it = labels.find(method);
  if (it == labels.end()) throw ConfigError("unknown method '" + method + "'");
  return it->second;
}

void ExperimentConfig::validate() const {
  if (methods.empty()) throw ConfigError("experiment: method list is empty");
  const auto known = known_methods();
  for (const auto& m : methods)
    if (std::find(known.begin(), known.end(), m) == known.end())
      throw ConfigError("experiment: unknown method '" + m + "'");
  if (metrics.empty()) throw ConfigError("experiment: metric list is empty");
  for (const auto& m : metrics)
    if (m != "gw" && m != "rand") throw ConfigError("experiment: unknown metric '" + m + "'");
  if (replications == 0) throw ConfigError("experiment: replications must be >= 1");
  if (gw_restarts < 1) throw ConfigError("experiment: gw_restarts must be >= 1");
  if (max_iters < 1) throw ConfigError("experiment: max_iters must be >= 1");
  if (scenario == Scenario::Gmm) {
    if (k == 0 || d == 0 || n == 0) throw ConfigError("experiment: k, d and n must be positive");
    if (k > n) throw ConfigError("experiment: k exceeds n");
    if (betas.empty()) throw ConfigError("experiment: no beta values");
    for (double b : betas)
      if (!(b >= 0.0 && b <= 1.0)) throw ConfigError("experiment: beta must lie in [0, 1]");
    if (!(quantile >= 0.0 && quantile < 1.0)) throw ConfigError("experiment: quantile must lie in [0, 1)");
    if (!(cap >= 0.0 && cap <= 1.0)) throw ConfigError("experiment: cap must lie in [0, 1]");
    if (!h.empty() && h.size() != k) throw ConfigError("experiment: need one h per cluster");
  }
}

std::vector<ReportRow> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<Setting> settings;
  if (cfg.scenario == Scenario::MnarToy) {
    settings.push_back({"mnar-toy", kNaN});
  } else {
    for (double b : cfg.betas) settings.push_back({"beta=" + fmt("%g", b), b});
  }
  const std::size_t reps = cfg.replications;

  std::vector<Scores> scores(settings.size() * reps);
  parallel_for(reps, [&](std::size_t r) {
    const std::uint64_t rep_seed = derive_seed(cfg.master_seed, "rep=" + std::to_string(r));
    const Replicate rep = generate(cfg, rep_seed);
    for (std::size_t s = 0; s < settings.size(); ++s)
      scores[s * reps + r] = score(cfg, rep, settings[s], rep_seed);
  });

  const std::string scenario = cfg.scenario == Scenario::MnarToy ? "mnar-toy" : "gmm";
  const std::string h_range =
      cfg.scenario == Scenario::MnarToy ? "" : (cfg.h.empty() ? "U(0,2/k)" : "fixed");
  std::vector<ReportRow> rows;
  for (std::size_t s = 0; s < settings.size(); ++s) {
    for (const auto& metric : cfg.metrics) {
      for (const auto& method : cfg.methods) {
        if (!applies(method, metric)) continue;
        ReportRow row;
        row.scenario = scenario;
        row.setting = settings[s].label;
        row.beta = settings[s].beta;
        row.quantile = cfg.scenario == Scenario::MnarToy ? kNaN : cfg.quantile;
        row.h_range = h_range;
        row.method = method;
        row.metric = metric;
        if (method == "multiple") {
          row.status = "absent";
          row.note = "external method, out of scope";
          row.value = row.se = kNaN;
          rows.push_back(std::move(row));
          continue;
        }
        std::vector<double> ok;
        for (std::size_t r = 0; r < reps; ++r) {
          const double v = scores[s * reps + r].at(method).at(metric);
          row.samples.push_back(v);
          if (std::isfinite(v)) ok.push_back(v);
        }
        row.replications = ok.size();
        if (ok.empty()) {
          row.status = "failed";
          row.note = "method failed in every replication";
          row.value = row.se = kNaN;
        } else {
          double mean = 0.0;
          for (double v : ok) mean += v;
          mean /= static_cast<double>(ok.size());
          double var = 0.0;
          for (double v : ok) var += (v - mean) * (v - mean);
          row.value = mean;
          row.se = ok.size() > 1
                       ? std::sqrt(var / static_cast<double>(ok.size() - 1) / static_cast<double>(ok.size()))
                       : kNaN;
          row.status = "ok";
          if (ok.size() < reps) row.note = std::to_string(reps - ok.size()) + " replication(s) failed";
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

double median_of(const std::vector<double>& samples) {
  std::vector<double> v;
  for (double x : samples)
    if (std::isfinite(x)) v.push_back(x);
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::string rows_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out << "scenario,setting,beta,quantile,h_range,method,metric,value,se,replications,status,note\n";
  for (const auto& r : rows)
    out << r.scenario << ',' << r.setting << ',' << num(r.beta) << ',' << num(r.quantile) << ','
        << r.h_range << ',' << r.method << ',' << r.metric << ',' << num(r.value) << ',' << num(r.se)
        << ',' << r.replications << ',' << r.status << ',' << r.note << '\n';
  return out.str();
}

std::string table_csv(const std::vector<ReportRow>& rows, const std::string& metric) {
  if (metric != "gw" && metric != "rand") throw ConfigError("unknown metric '" + metric + "'");
  const auto& cols = metric == "gw" ? gw_columns() : rand_columns();
  std::vector<std::string> settings;
  for (const auto& r : rows)
    if (std::find(settings.begin(), settings.end(), r.setting) == settings.end())
      settings.push_back(r.setting);

  std::ostringstream out;
  out << "setting";
  for (const auto& c : cols) out << ',' << method_label(c);
  out << '\n';
  for (const auto& s : settings) {
    out << s;
    for (const auto& c : cols) {
      out << ',';
      const auto it = std::find_if(rows.begin(), rows.end(), [&](const ReportRow& r) {
        return r.setting == s && r.method == c && r.metric == metric;
      });
      if (it == rows.end()) continue;
      if (it->status == "absent") {
        out << "absent";
      } else if (std::isfinite(it->value)) {
        out << fmt("%.4f", it->value);
        if (std::isfinite(it->se)) out << " ± " << fmt("%.4f", it->se);
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace nakm
