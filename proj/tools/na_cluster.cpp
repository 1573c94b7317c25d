// na-cluster: command-line front end for the nakm library.
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical
// failure. Every output file is written atomically.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "nakm/baselines.hpp"
#include "nakm/euclid_kmeans.hpp"
#include "nakm/experiment.hpp"
#include "nakm/gmm.hpp"
#include "nakm/gromov.hpp"
#include "nakm/io.hpp"
#include "nakm/mds.hpp"
#include "nakm/missingness.hpp"
#include "nakm/rand_index.hpp"
#include "nakm/scenarios.hpp"
#include "nakm/seeding.hpp"
#include "nakm/wkmeans.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
using namespace nakm;

namespace {

bool g_json = false;

void log_event(const std::string& event, json fields = json::object()) {
  if (g_json) {
    fields["event"] = event;
    std::cerr << fields.dump() << '\n';
  } else {
    std::cout << event;
    for (auto it = fields.begin(); it != fields.end(); ++it) std::cout << ' ' << it.key() << '=' << it.value().dump();
    std::cout << '\n';
  }
}

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

json load_json(const std::string& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

std::string loss_csv(const std::vector<double>& trace, bool converged) {
  // The repeated final value only marks convergence; the file keeps the
  // strictly decreasing part.
  const std::size_t n = converged && trace.size() > 1 ? trace.size() - 1 : trace.size();
  std::ostringstream out;
  out << "iteration,loss\n";
  for (std::size_t t = 0; t < n; ++t) out << t + 1 << ',' << format_number(trace[t]) << '\n';
  return out.str();
}

// ---- simulate ----

struct SimulateArgs {
  std::string config, preset, out;
  std::optional<std::uint64_t> seed;
};

void simulate(const SimulateArgs& a) {
  json cfg = a.config.empty() ? json::object() : load_json(a.config);
  std::string scenario = get_or<std::string>(cfg, "scenario", a.preset.empty() ? "gmm" : a.preset);
  if (!a.preset.empty()) scenario = a.preset;
  const std::uint64_t seed = a.seed ? *a.seed : get_or<std::uint64_t>(cfg, "seed", 0);
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& text) {
    write_atomic(join(a.out, name), text);
    written.push_back(name);
  };

  if (scenario == "toy") {
    emit("dataset.jsonl", dataset_jsonl(toy_measures()));
    emit("labels.csv", labels_csv(toy_labels(), "label"));
  } else if (scenario == "institutions") {
    InstitutionsConfig ic;
    ic.institutions = get_or(cfg, "institutions", ic.institutions);
    ic.loans = get_or(cfg, "loans", ic.loans);
    ic.dim = get_or(cfg, "dim", ic.dim);
    ic.clusters = get_or(cfg, "clusters", ic.clusters);
    ic.reported = get_or(cfg, "reported", ic.reported);
    ic.seed = seed;
    const auto s = make_institutions(ic);
    emit("dataset.jsonl", dataset_jsonl(s.measures));
    emit("labels.csv", labels_csv(s.labels, "label"));
  } else if (scenario == "gmm" || scenario == "mnar-toy") {
    GmmSample sample;
    Matrix values;
    const std::uint64_t rep_seed = derive_seed(seed, "simulate");
    std::vector<double> importance;
    if (scenario == "mnar-toy") {
      const auto g = mnar_toy_config(rep_seed);
      sample = sample_gmm(g);
      values = mnar_mask(sample.points);
    } else {
      const auto k = get_or<std::size_t>(cfg, "k", 3);
      const auto d = get_or<std::size_t>(cfg, "d", 5);
      const auto n = get_or<std::size_t>(cfg, "n", 100);
      if (k == 0 || d == 0 || n == 0) throw ConfigError("k, d and n must be positive");
      const auto g = random_gmm_config(k, d, n, derive_seed(rep_seed, "gmm"));
      sample = sample_gmm(g);
      if (get_or(cfg, "standardize", true)) standardize(sample.points);
      if (get_or(cfg, "missingness", true)) {
        MissingnessConfig m;
        m.beta = get_or(cfg, "beta", m.beta);
        m.quantile = get_or(cfg, "quantile", m.quantile);
        m.h = get_or(cfg, "h", m.h);
        m.cap = get_or(cfg, "cap", m.cap);
        m.seed = derive_seed(rep_seed, "missingness");
        const auto r = apply_missingness(sample.points, sample.labels, g.alphas, m);
        values = r.values;
        log_event("missingness", {{"rule_a_cells", r.rule_a_cells}, {"repaired_rows", r.repaired_rows},
                                  {"target_fraction", r.target_fraction}});
      } else {
        values = sample.points;
      }
    }
    importance = sample_importance(sample.labels.size(), get_or(cfg, "importance_mu", 20.0),
                                   get_or(cfg, "importance_sigma", 1.5), derive_seed(rep_seed, "importance"));
    emit("points.csv", points_csv(values));
    emit("complete.csv", points_csv(sample.points));
    emit("labels.csv", labels_csv(sample.labels, "label"));
    emit("weights.csv", vector_csv(importance, "importance"));
    emit("truth.csv", matrix_csv(euclidean_distances(sample.points)));
  } else {
    throw ConfigError("unknown scenario '" + scenario + "' (gmm, mnar-toy, toy, institutions)");
  }
  log_event("simulate", {{"scenario", scenario}, {"seed", seed}, {"outputs", written}});
}

// ---- cluster / impute / distances ----

struct ClusterArgs {
  std::string mode = "euclid";
  std::string input, out;
  std::size_t k = 2;
  int max_iters = 100;
  std::uint64_t seed = 0;
  std::size_t support_size = 0;
  std::string schedule = "sqrt";
  int barycenter_iters = 200;
  double temperature = 1.0;
  std::size_t atom_cap = 10000;
  std::string kind = "rho";
};

WKMeansOptions w_options(const ClusterArgs& a) {
  WKMeansOptions o;
  o.k = a.k;
  o.max_iters = a.max_iters;
  o.schedule = LambdaSchedule::parse(a.schedule, a.max_iters);
  o.support_size = a.support_size;
  o.barycenter_max_iters = a.barycenter_iters;
  o.seed = a.seed;
  return o;
}

void check_mode(const std::string& mode) {
  if (mode != "euclid" && mode != "wasserstein") throw ConfigError("--mode must be euclid or wasserstein");
}

void cluster(const ClusterArgs& a) {
  check_mode(a.mode);
  if (a.mode == "euclid") {
    const auto table = read_points_csv(a.input);
    const Clustering c = na_kmeans(table.data, a.k, a.max_iters, a.seed);
    const bool converged = c.iterations > static_cast<int>(c.history.size());
    write_atomic(join(a.out, "assignments.csv"), labels_csv(c.assignments));
    write_atomic(join(a.out, "centroids.csv"), points_csv(c.centroids, table.columns));
    write_atomic(join(a.out, "loss.csv"), loss_csv(c.loss_trace, converged));
    const json summary{{"mode", a.mode}, {"k", a.k}, {"iterations", c.iterations}, {"converged", converged},
                       {"final_loss", c.loss_trace.back()}, {"reseeded", c.reseeded}};
    write_atomic(join(a.out, "summary.json"), summary.dump(2) + "\n");
    log_event("cluster", summary);
  } else {
    const auto data = parse_dataset_jsonl(read_text(a.input));
    const WClustering c = na_w_kmeans(data, w_options(a));
    std::ostringstream bary;
    for (const auto& b : c.barycenters) bary << measure_json(b) << '\n';
    std::ostringstream loss;
    loss << "iteration,lambda,loss,empty_clusters\n";
    const std::size_t rows = c.damping_schedule_used.size();
    for (std::size_t t = 0; t < rows; ++t) {
      loss << t + 1 << ',' << format_number(c.damping_schedule_used[t]) << ',' << format_number(c.loss_trace[t])
           << ',' << c.empty_clusters[t].size() << '\n';
    }
    write_atomic(join(a.out, "assignments.csv"), labels_csv(c.assignments));
    write_atomic(join(a.out, "barycenters.jsonl"), bary.str());
    write_atomic(join(a.out, "loss.csv"), loss.str());
    const json summary{{"mode", a.mode}, {"k", a.k}, {"iterations", c.iterations}, {"converged", c.converged},
                       {"final_loss", c.loss_trace.back()}};
    write_atomic(join(a.out, "summary.json"), summary.dump(2) + "\n");
    log_event("cluster", summary);
  }
}

void impute(const ClusterArgs& a) {
  check_mode(a.mode);
  if (a.mode == "euclid") {
    const auto table = read_points_csv(a.input);
    const Clustering c = na_kmeans(table.data, a.k, a.max_iters, a.seed);
    const auto thetas = impute_soft_euclid(table.data, c);
    Matrix mean(static_cast<Eigen::Index>(thetas.size()), static_cast<Eigen::Index>(table.data.dim()));
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      const Point p = impute_mean_point(thetas[i]);
      for (std::size_t q = 0; q < p.size(); ++q) mean(i, q) = p[q];
    }
    write_atomic(join(a.out, "imputations.jsonl"), random_measures_jsonl(thetas));
    write_atomic(join(a.out, "mean_points.csv"), points_csv(mean, table.columns));
    write_atomic(join(a.out, "assignments.csv"), labels_csv(c.assignments));
    log_event("impute", {{"mode", a.mode}, {"rows", thetas.size()}});
  } else {
    const auto data = parse_dataset_jsonl(read_text(a.input));
    const WClustering c = na_w_kmeans(data, w_options(a));
    WImputeOptions io;
    io.temperature = a.temperature;
    io.atom_cap = a.atom_cap;
    const auto imp = impute_soft_wasserstein(data, c, io);
    write_atomic(join(a.out, "imputations.jsonl"), random_measures_jsonl(imp.measures));
    write_atomic(join(a.out, "assignments.csv"), labels_csv(c.assignments));
    log_event("impute", {{"mode", a.mode}, {"measures", imp.measures.size()}, {"thinned", imp.thinned}});
  }
}

void distances(const ClusterArgs& a) {
  if (a.mode == "points") {
    const auto table = read_points_csv(a.input);
    if (table.data.missing_count() > 0) throw InvalidInput("--mode points needs complete data");
    write_atomic(a.out, matrix_csv(euclidean_distances(table.data.values())));
  } else if (a.mode == "euclid") {
    if (a.kind != "rho" && a.kind != "mean") throw ConfigError("--kind must be rho or mean");
    const auto table = read_points_csv(a.input);
    const Clustering c = na_kmeans(table.data, a.k, a.max_iters, a.seed);
    const auto thetas = impute_soft_euclid(table.data, c);
    Matrix d;
    if (a.kind == "rho") {
      d = pairwise_rho(thetas);
    } else {
      Matrix pts(static_cast<Eigen::Index>(thetas.size()), static_cast<Eigen::Index>(table.data.dim()));
      for (std::size_t i = 0; i < thetas.size(); ++i) {
        const Point p = impute_mean_point(thetas[i]);
        for (std::size_t q = 0; q < p.size(); ++q) pts(i, q) = p[q];
      }
      d = euclidean_distances(pts);
    }
    write_atomic(a.out, matrix_csv(d));
  } else if (a.mode == "wasserstein") {
    const auto data = parse_dataset_jsonl(read_text(a.input));
    const WClustering c = na_w_kmeans(data, w_options(a));
    WImputeOptions io;
    io.temperature = a.temperature;
    io.atom_cap = a.atom_cap;
    write_atomic(a.out, matrix_csv(pairwise_rho_w(impute_soft_wasserstein(data, c, io).measures)));
  } else {
    throw ConfigError("--mode must be points, euclid or wasserstein");
  }
  log_event("distances", {{"mode", a.mode}, {"output", a.out}});
}

// ---- evaluation ----

struct GwArgs {
  std::string a, a_mass, b, b_mass, out;
  int restarts = 10;
  std::uint64_t seed = 0;
};

std::vector<double> mass_or_uniform(const std::string& path, std::size_t n) {
  if (path.empty()) return std::vector<double>(n, 1.0 / static_cast<double>(n));
  auto m = read_vector_csv(path);
  double s = 0.0;
  for (double v : m) s += v;
  if (!(s > 0.0)) throw InvalidInput(path + ": masses must have a positive sum");
  for (double& v : m) v /= s;  // tolerate rounding in hand-written files
  return m;
}

void gw_eval(const GwArgs& g) {
  const Matrix da = read_matrix_csv(g.a), db = read_matrix_csv(g.b);
  const MetricMeasureSpace a(da, mass_or_uniform(g.a_mass, static_cast<std::size_t>(da.rows())));
  const MetricMeasureSpace b(db, mass_or_uniform(g.b_mass, static_cast<std::size_t>(db.rows())));
  GwOptions o;
  o.restarts = g.restarts;
  o.seed = g.seed;
  const GwResult r = gromov_wasserstein(a, b, o);
  const json out{{"gw", r.value}, {"objective", r.objective}, {"upper_bound", true},
                 {"starts", r.starts}, {"best_start", r.best_start}};
  if (!g.out.empty()) write_atomic(g.out, out.dump(2) + "\n");
  log_event("gw-eval", out);
}

void rand_cmd(const std::string& pa, const std::string& pb, const std::string& out) {
  const double r = rand_index(read_labels_csv(pa), read_labels_csv(pb));
  if (!out.empty()) write_atomic(out, "rand\n" + format_number(r) + "\n");
  log_event("rand", {{"rand", r}});
}

void mds_cmd(const std::string& dist, std::size_t dim, const std::string& labels, const std::string& out) {
  const Matrix d = read_matrix_csv(dist);
  const MdsResult r = classical_mds(d, dim);
  std::vector<std::size_t> lab;
  if (!labels.empty()) {
    lab = read_labels_csv(labels);
    if (lab.size() != static_cast<std::size_t>(d.rows())) throw InvalidInput("labels and distance matrix differ in size");
  }
  std::ostringstream csv;
  csv << "id";
  static const char* xyz[] = {"x", "y", "z"};
  for (std::size_t c = 0; c < dim; ++c) csv << ',' << (dim <= 3 ? xyz[c] : ("x" + std::to_string(c + 1)).c_str());
  csv << ",cluster\n";
  for (Eigen::Index i = 0; i < r.coords.rows(); ++i) {
    csv << i;
    for (Eigen::Index c = 0; c < r.coords.cols(); ++c) csv << ',' << format_number(r.coords(i, c));
    csv << ',';
    if (!lab.empty()) csv << lab[static_cast<std::size_t>(i)];
    csv << '\n';
  }
  write_atomic(out, csv.str());
  log_event("mds", {{"points", r.coords.rows()}, {"dim", dim}, {"clamped_negative", r.clamped_negative}});
}

// ---- report ----

ExperimentConfig experiment_config(const json& j) {
  ExperimentConfig c;
  const std::string scenario = get_or<std::string>(j, "scenario", "gmm");
  if (scenario == "gmm") c.scenario = Scenario::Gmm;
  else if (scenario == "mnar-toy") c.scenario = Scenario::MnarToy;
  else throw ConfigError("unknown experiment scenario '" + scenario + "'");
  c.k = get_or(j, "k", c.k);
  c.d = get_or(j, "d", c.d);
  c.n = get_or(j, "n", c.n);
  c.betas = get_or(j, "betas", c.betas);
  c.quantile = get_or(j, "quantile", c.quantile);
  c.cap = get_or(j, "cap", c.cap);
  c.h = get_or(j, "h", c.h);
  c.methods = get_or(j, "methods", c.methods);
  c.metrics = get_or(j, "metrics", c.metrics);
  c.replications = get_or(j, "replications", c.replications);
  c.master_seed = get_or(j, "master_seed", c.master_seed);
  c.max_iters = get_or(j, "max_iters", c.max_iters);
  c.gw_restarts = get_or(j, "gw_restarts", c.gw_restarts);
  c.importance_mu = get_or(j, "importance_mu", c.importance_mu);
  c.importance_sigma = get_or(j, "importance_sigma", c.importance_sigma);
  return c;
}

void report(const std::string& config, const std::string& out, std::optional<std::uint64_t> seed) {
  ExperimentConfig c = experiment_config(load_json(config));
  if (seed) c.master_seed = *seed;
  c.validate();
  const auto rows = run_experiment(c);
  std::vector<std::string> written{"rows.csv"};
  write_atomic(join(out, "rows.csv"), rows_csv(rows));
  for (const auto& metric : c.metrics) {
    write_atomic(join(out, metric + ".csv"), table_csv(rows, metric));
    written.push_back(metric + ".csv");
  }
  log_event("report", {{"rows", rows.size()}, {"outputs", written}, {"master_seed", c.master_seed}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-means clustering of partially observed points and measures"};
  app.require_subcommand(1);
  app.add_flag("--json", g_json, "Machine-readable log lines on stderr");

  SimulateArgs sim;
  std::uint64_t sim_seed = 0;
  auto* s = app.add_subcommand("simulate", "Generate a synthetic scenario");
  s->add_option("--config", sim.config, "Scenario JSON")->check(CLI::ExistingFile);
  s->add_option("--preset", sim.preset, "gmm | mnar-toy | toy | institutions");
  auto* sim_seed_opt = s->add_option("--seed", sim_seed, "Master seed");
  s->add_option("--out", sim.out, "Output directory")->required();

  ClusterArgs ca;
  auto add_cluster_flags = [&](CLI::App* c, bool need_mode_choice) {
    auto* m = c->add_option("--mode", ca.mode, "euclid | wasserstein");
    if (need_mode_choice) m->check(CLI::IsMember({"euclid", "wasserstein"}));
    c->add_option("--input", ca.input, "Points CSV or dataset JSON lines")->required()->check(CLI::ExistingFile);
    c->add_option("--k", ca.k, "Number of clusters")->check(CLI::PositiveNumber);
    c->add_option("--max-iters", ca.max_iters, "Iteration cap T")->check(CLI::PositiveNumber);
    c->add_option("--seed", ca.seed, "Initialization seed");
    c->add_option("--support-size", ca.support_size, "Barycenter atoms (0: largest input)");
    c->add_option("--schedule", ca.schedule, "Damping: sqrt | zero | const:<v> | v0,v1,...");
    c->add_option("--barycenter-iters", ca.barycenter_iters, "Fixed-point sweeps per barycenter")
        ->check(CLI::PositiveNumber);
  };
  auto* cl = app.add_subcommand("cluster", "NA k-means on points or measures");
  add_cluster_flags(cl, true);
  cl->add_option("--out", ca.out, "Output directory")->required();

  auto* im = app.add_subcommand("impute", "Soft imputation into random measures");
  add_cluster_flags(im, true);
  im->add_option("--temperature", ca.temperature, "Donor weight temperature (wasserstein)")
      ->check(CLI::PositiveNumber);
  im->add_option("--atom-cap", ca.atom_cap, "Atom cap per completion (wasserstein)");
  im->add_option("--out", ca.out, "Output directory")->required();

  auto* di = app.add_subcommand("distances", "Pairwise distance matrix");
  add_cluster_flags(di, false);
  di->add_option("--kind", ca.kind, "euclid mode: rho | mean");
  di->add_option("--temperature", ca.temperature, "Donor weight temperature")->check(CLI::PositiveNumber);
  di->add_option("--atom-cap", ca.atom_cap, "Atom cap per completion");
  di->add_option("--out", ca.out, "Output CSV")->required();

  GwArgs gw;
  auto* g = app.add_subcommand("gw-eval", "Gromov-Wasserstein upper bound between two spaces");
  g->add_option("--a", gw.a, "Distance matrix CSV")->required()->check(CLI::ExistingFile);
  g->add_option("--a-mass", gw.a_mass, "Mass CSV (default uniform)")->check(CLI::ExistingFile);
  g->add_option("--b", gw.b, "Distance matrix CSV")->required()->check(CLI::ExistingFile);
  g->add_option("--b-mass", gw.b_mass, "Mass CSV (default uniform)")->check(CLI::ExistingFile);
  g->add_option("--restarts", gw.restarts, "Conditional-gradient starts")->check(CLI::PositiveNumber);
  g->add_option("--seed", gw.seed, "Seed for random starts");
  g->add_option("--out", gw.out, "Result JSON");

  std::string ra, rb, rout;
  auto* r = app.add_subcommand("rand", "Rand index of two labelings");
  r->add_option("--a", ra, "Labels CSV")->required()->check(CLI::ExistingFile);
  r->add_option("--b", rb, "Labels CSV")->required()->check(CLI::ExistingFile);
  r->add_option("--out", rout, "Result CSV");

  std::string mdist, mlabels, mout;
  std::size_t mdim = 3;
  auto* md = app.add_subcommand("mds", "Classical multidimensional scaling");
  md->add_option("--dist", mdist, "Distance matrix CSV")->required()->check(CLI::ExistingFile);
  md->add_option("--dim", mdim, "Output dimension")->check(CLI::PositiveNumber);
  md->add_option("--labels", mlabels, "Cluster labels CSV")->check(CLI::ExistingFile);
  md->add_option("--out", mout, "Coordinates CSV")->required();

  std::string rep_config, rep_out;
  std::uint64_t rep_seed = 0;
  auto* rp = app.add_subcommand("report", "Run an experiment sweep and write report tables");
  rp->add_option("--config", rep_config, "Experiment JSON")->required()->check(CLI::ExistingFile);
  rp->add_option("--out", rep_out, "Output directory")->required();
  auto* rep_seed_opt = rp->add_option("--seed", rep_seed, "Override master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*s) {
      if (*sim_seed_opt) sim.seed = sim_seed;
      if (sim.config.empty() && sim.preset.empty()) throw ConfigError("simulate needs --config or --preset");
      simulate(sim);
    } else if (*cl) {
      cluster(ca);
    } else if (*im) {
      impute(ca);
    } else if (*di) {
      distances(ca);
    } else if (*g) {
      gw_eval(gw);
    } else if (*r) {
      rand_cmd(ra, rb, rout);
    } else if (*md) {
      mds_cmd(mdist, mdim, mlabels, mout);
    } else if (*rp) {
      report(rep_config, rep_out, *rep_seed_opt ? std::optional<std::uint64_t>(rep_seed) : std::nullopt);
    }
  } catch (const ConfigError& e) {
    log_event("error", {{"kind", "config"}, {"message", e.what()}});
    return 2;
  } catch (const NumericalError& e) {
    log_event("error", {{"kind", "numerical"}, {"message", e.what()}});
    return 4;
  } catch (const InvalidInput& e) {
    log_event("error", {{"kind", "data"}, {"message", e.what()}});
    return 3;
  } catch (const std::exception& e) {
    log_event("error", {{"kind", "data"}, {"message", e.what()}});
    return 3;
  }
  return 0;
}
