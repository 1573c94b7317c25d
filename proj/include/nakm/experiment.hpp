#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nakm/measure.hpp"

namespace nakm {

/// Method identifiers accepted in ExperimentConfig::methods.
///   na-kmeans, na-kmeans-m, mean, median, multiple, knn, lr, kpod
/// "multiple" is accepted but always reported as absent.
std::vector<std::string> known_methods();
/// Column label used in report tables ("NA k-means", "mean imp.", ...).
std::string method_label(const std::string& method);

enum class Scenario { Gmm, MnarToy };

struct ExperimentConfig {
  Scenario scenario = Scenario::Gmm;
  std::size_t k = 3;
  std::size_t d = 5;
  std::size_t n = 100;
  std::vector<double> betas{0.0, 0.5, 1.0};
  double quantile = 0.25;
  double cap = 0.95;      ///< upper bound on the per-cluster deletion fraction
  std::vector<double> h;  ///< fixed h_j; drawn per replication when empty
  std::vector<std::string> methods{"na-kmeans", "na-kmeans-m", "mean", "median", "multiple", "knn", "lr"};
  std::vector<std::string> metrics{"gw", "rand"};
  std::size_t replications = 10;
  std::uint64_t master_seed = 0;
  int max_iters = 100;
  int gw_restarts = 10;
  double importance_mu = 20.0;
  double importance_sigma = 1.5;

  void validate() const;
};

struct ReportRow {
  std::string scenario;
  std::string setting;  ///< e.g. "beta=0.5"
  double beta = 0.0;
  double quantile = 0.0;
  std::string h_range;
  std::string method;
  std::string metric;   ///< gw | rand
  double value = 0.0;   ///< mean over successful replications
  double se = 0.0;      ///< standard error; NaN with a single replication
  std::size_t replications = 0;
  std::string status;   ///< ok | absent | failed
  std::string note;
  std::vector<double> samples;  ///< per-replication values (NaN on failure)
};

/// Full sweep: per setting and replication generate, standardize, take the
/// true distance matrix, delete cells, run every method, and score GW
/// against the truth (lognormal masses) and Rand against the true labels.
/// Replications share seeds across settings. A failing method yields NaN
/// for that replication and never aborts the sweep.
std::vector<ReportRow> run_experiment(const ExperimentConfig& cfg);

/// Median of the finite samples (NaN if none).
double median_of(const std::vector<double>& samples);

/// Long format, one line per row.
std::string rows_csv(const std::vector<ReportRow>& rows);
/// Table with settings as rows and methods (in the fixed column order of
/// the metric) as columns; cells "mean ± se", or just the mean for a
/// single replication.
std::string table_csv(const std::vector<ReportRow>& rows, const std::string& metric);

}  // namespace nakm
