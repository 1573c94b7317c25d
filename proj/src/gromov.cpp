#include "nakm/gromov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "nakm/parallel.hpp"
#include "nakm/transport.hpp"

namespace nakm {

namespace {

void check_space(const Matrix& d, const std::vector<double>& m) {
  const auto n = d.rows();
  if (n == 0 || d.cols() != n || static_cast<std::size_t>(n) != m.size())
    throw InvalidInput("metric measure space: distance matrix and mass disagree in size");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (d(i, i) != 0.0) throw InvalidInput("metric measure space: non-zero diagonal");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!(d(i, j) >= 0.0) || !std::isfinite(d(i, j)))
        throw InvalidInput("metric measure space: negative or non-finite distance");
      if (std::abs(d(i, j) - d(j, i)) > 1e-12) throw InvalidInput("metric measure space: asymmetric");
    }
  }
  double s = 0.0;
  for (double v : m) {
    if (!(v >= 0.0)) throw InvalidInput("metric measure space: negative mass");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-12) throw InvalidInput("metric measure space: mass does not sum to one");
}

// North-west corner rule along the given row/column orders.
Matrix nw_corner(const std::vector<double>& p, const std::vector<double>& q,
                 const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  Matrix pi = Matrix::Zero(static_cast<Eigen::Index>(p.size()), static_cast<Eigen::Index>(q.size()));
  std::size_t r = 0, c = 0;
  double sr = p[rows[0]], sc = q[cols[0]];
  while (r < rows.size() && c < cols.size()) {
    const double f = std::min(sr, sc);
    pi(rows[r], cols[c]) += f;
    sr -= f;
    sc -= f;
    if (sr <= sc) {
      if (++r < rows.size()) sr = p[rows[r]];
    } else {
      if (++c < cols.size()) sc = q[cols[c]];
    }
  }
  return pi;
}

std::vector<std::size_t> by_eccentricity(const MetricMeasureSpace& s) {
  const std::size_t n = s.size();
  std::vector<double> ecc(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      ecc[i] += s.dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * s.mass[k];
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return ecc[x] < ecc[y]; });
  return order;
}

struct Run {
  Matrix pi;
  double objective;
};

// Frank-Wolfe on E(pi) = <C, pi> - 2 <A pi B, pi> over the transport polytope.
Run conditional_gradient(const MetricMeasureSpace& a, const MetricMeasureSpace& b, Matrix pi,
                         const GwOptions& opts) {
  const Matrix& A = a.dist;
  const Matrix& B = b.dist;
  const Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(a.mass.data(), a.mass.size());
  const Eigen::VectorXd q = Eigen::Map<const Eigen::VectorXd>(b.mass.data(), b.mass.size());
  const double constant = p.dot(A.cwiseProduct(A) * p) + q.dot(B.cwiseProduct(B) * q);

  Matrix apb = A * pi * B;
  double energy = constant - 2.0 * (apb.cwiseProduct(pi)).sum();
  for (int it = 0; it < opts.max_iters; ++it) {
    const Matrix grad = -4.0 * apb;
    const Matrix vertex = solve_transport(a.mass, b.mass, grad).coupling.plan;
    const Matrix delta = vertex - pi;
    const double slope = grad.cwiseProduct(delta).sum();
    if (slope >= -opts.tol * std::max(1.0, std::abs(energy))) break;
    const Matrix adb = A * delta * B;
    const double curv = -2.0 * adb.cwiseProduct(delta).sum();
    double tau;
    if (curv > 0.0)
      tau = std::clamp(-slope / (2.0 * curv), 0.0, 1.0);
    else
      tau = (curv + slope < 0.0) ? 1.0 : 0.0;
    if (tau <= 0.0) break;
    pi += tau * delta;
    apb += tau * adb;
    energy = constant - 2.0 * (apb.cwiseProduct(pi)).sum();
  }
  const double value = gw_objective(a, b, pi);
  return {std::move(pi), value};
}

// Total order on spaces so that the solver sees (A, B) and (B, A) identically.
bool canonical_less(const MetricMeasureSpace& x, const MetricMeasureSpace& y) {
  if (x.size() != y.size()) return x.size() < y.size();
  const auto n = x.dist.size();
  for (Eigen::Index i = 0; i < n; ++i)
    if (x.dist.data()[i] != y.dist.data()[i]) return x.dist.data()[i] < y.dist.data()[i];
  return x.mass < y.mass;
}

bool uniform_mass(const std::vector<double>& m) {
  const double u = 1.0 / static_cast<double>(m.size());
  return std::all_of(m.begin(), m.end(), [&](double v) { return std::abs(v - u) <= 1e-12; });
}

GwResult solve(const MetricMeasureSpace& a, const MetricMeasureSpace& b, const GwOptions& opts) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<Matrix> starts;
  Eigen::Map<const Eigen::VectorXd> p(a.mass.data(), n), q(b.mass.data(), m);
  starts.push_back(p * q.transpose());
  starts.push_back(nw_corner(a.mass, b.mass, by_eccentricity(a), by_eccentricity(b)));
  std::mt19937_64 rng(opts.seed);
  std::vector<std::size_t> rows(n), cols(m);
  while (static_cast<int>(starts.size()) < opts.restarts) {
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    std::shuffle(rows.begin(), rows.end(), rng);
    std::shuffle(cols.begin(), cols.end(), rng);
    starts.push_back(nw_corner(a.mass, b.mass, rows, cols));
  }
  if (n == m && uniform_mass(a.mass) && uniform_mass(b.mass)) {
    double fact = 1.0;
    for (std::size_t i = 2; i <= n; ++i) fact *= static_cast<double>(i);
    if (fact <= opts.exhaustive_limit) {
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        Matrix pi = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) pi(i, perm[i]) = 1.0 / static_cast<double>(n);
        starts.push_back(std::move(pi));
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }

  std::vector<Run> runs(starts.size());
  parallel_for(starts.size(), [&](std::size_t s) {
    const double start_value = gw_objective(a, b, starts[s]);
    runs[s] = conditional_gradient(a, b, starts[s], opts);
    if (start_value < runs[s].objective) runs[s] = {starts[s], start_value};
  });
  std::size_t best = 0;
  for (std::size_t s = 1; s < runs.size(); ++s)
    if (runs[s].objective < runs[best].objective) best = s;
  GwResult out;
  out.objective = runs[best].objective;
  out.value = std::sqrt(out.objective);
  out.coupling = std::move(runs[best].pi);
  out.starts = static_cast<int>(runs.size());
  out.best_start = static_cast<int>(best);
  return out;
}

}  // namespace

MetricMeasureSpace::MetricMeasureSpace(Matrix d, std::vector<double> m)
    : dist(std::move(d)), mass(std::move(m)) {
  check_space(dist, mass);
}

MetricMeasureSpace MetricMeasureSpace::uniform(Matrix d) {
  const auto n = static_cast<std::size_t>(d.rows());
  return {std::move(d), std::vector<double>(n, 1.0 / static_cast<double>(std::max<std::size_t>(n, 1)))};
}

double gw_objective(const MetricMeasureSpace& a, const MetricMeasureSpace& b, const Matrix& pi) {
  struct Entry {
    Eigen::Index i, j;
    double w;
  };
  std::vector<Entry> support;
  for (Eigen::Index i = 0; i < pi.rows(); ++i)
    for (Eigen::Index j = 0; j < pi.cols(); ++j)
      if (pi(i, j) > 0.0) support.push_back({i, j, pi(i, j)});

  double e = 0.0;
  if (support.size() * support.size() <= 4'000'000) {
    // Direct sum: exactly zero on isometric couplings.
    for (const auto& x : support)
      for (const auto& y : support) {
        const double diff = a.dist(x.i, y.i) - b.dist(x.j, y.j);
        e += diff * diff * x.w * y.w;
      }
  } else {
    Eigen::Map<const Eigen::VectorXd> p(a.mass.data(), a.mass.size()), q(b.mass.data(), b.mass.size());
    e = p.dot(a.dist.cwiseProduct(a.dist) * p) + q.dot(b.dist.cwiseProduct(b.dist) * q) -
        2.0 * (a.dist * pi * b.dist).cwiseProduct(pi).sum();
  }
  return std::max(e, 0.0);
}

GwResult gromov_wasserstein(const MetricMeasureSpace& a, const MetricMeasureSpace& b,
                            const GwOptions& opts) {
  if (opts.restarts < 1) throw ConfigError("gromov_wasserstein: restarts must be >= 1");
  if (opts.max_iters < 0) throw ConfigError("gromov_wasserstein: max_iters must be >= 0");
  if (!canonical_less(b, a)) return solve(a, b, opts);
  GwResult r = solve(b, a, opts);
  r.coupling.transposeInPlace();
  return r;
}

}  // namespace nakm
