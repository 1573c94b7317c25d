#include "nakm/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nakm {

namespace {

// Flow value carried as v + e * eps for an infinitesimal eps (Orden's
// perturbation). Comparisons are lexicographic with a tolerance on v.
struct LexFlow {
  double v = 0.0;
  long long e = 0;
};

class NetworkSimplex {
 public:
  NetworkSimplex(std::span<const double> supply, std::span<const double> demand, const Matrix& cost)
      : n_(supply.size()), m_(demand.size()), cost_(cost), supply_(supply), demand_(demand) {
    const double total = std::accumulate(supply.begin(), supply.end(), 0.0);
    tol_ = 1e-13 * std::max(1.0, total);
    const double cmax = cost.size() ? cost.cwiseAbs().maxCoeff() : 0.0;
    eps_ = 1e-12 * std::max(1.0, cmax);
  }

  TransportResult run() {
    initial_basis();
    int pivots = 0;
    const long long max_pivots = 1000LL * static_cast<long long>(n_ + m_) + 100000LL;
    std::size_t cursor = 0;
    const std::size_t cells = n_ * m_;
    const std::size_t block =
        std::max<std::size_t>(std::min<std::size_t>(cells, 16),
                              static_cast<std::size_t>(std::sqrt(static_cast<double>(cells))));
    for (;;) {
      build_tree();
      // Block search pivot rule: scan blocks of cells starting at the cursor,
      // take the most negative reduced cost of the first block that has one.
      std::ptrdiff_t entering = -1;
      double best = -eps_;
      std::size_t scanned = 0;
      while (scanned < cells) {
        const std::size_t len = std::min(block, cells - scanned);
        for (std::size_t s = 0; s < len; ++s) {
          const std::size_t c = cursor;
          cursor = (cursor + 1 == cells) ? 0 : cursor + 1;
          if (is_basic_[c]) continue;
          const std::size_t i = c / m_, j = c % m_;
          const double r = cost_(i, j) - pot_[i] - pot_[n_ + j];
          if (r < best) {
            best = r;
            entering = static_cast<std::ptrdiff_t>(c);
          }
        }
        scanned += len;
        if (entering >= 0) break;
      }
      if (entering < 0) break;
      if (++pivots > max_pivots) throw NumericalError("network simplex: pivot limit exceeded");
      pivot(static_cast<std::size_t>(entering));
    }

    TransportResult out;
    out.coupling.plan = Matrix::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(m_));
    for (std::size_t b = 0; b < basis_row_.size(); ++b)
      out.coupling.plan(basis_row_[b], basis_col_[b]) = std::max(0.0, flow_[b].v);
    out.coupling.row_marginal.assign(supply_.begin(), supply_.end());
    out.coupling.col_marginal.assign(demand_.begin(), demand_.end());
    out.cost = 0.0;
    for (std::size_t b = 0; b < basis_row_.size(); ++b)
      out.cost += cost_(basis_row_[b], basis_col_[b]) *
                  out.coupling.plan(basis_row_[b], basis_col_[b]);
    out.pivots = pivots;
    return out;
  }

 private:
  bool less(const LexFlow& a, const LexFlow& b) const {
    if (a.v < b.v - tol_) return true;
    if (a.v > b.v + tol_) return false;
    return a.e < b.e;
  }

  void add_basic(std::size_t i, std::size_t j, LexFlow f) {
    const std::size_t id = basis_row_.size();
    basis_row_.push_back(i);
    basis_col_.push_back(j);
    flow_.push_back(f);
    adj_[i].push_back(id);
    adj_[n_ + j].push_back(id);
    is_basic_[i * m_ + j] = 1;
  }

  // North-west corner rule on the perturbed problem: yields a spanning tree
  // of exactly n + m - 1 cells.
  void initial_basis() {
    adj_.assign(n_ + m_, {});
    is_basic_.assign(n_ * m_, 0);
    std::vector<LexFlow> ra(n_), rb(m_);
    for (std::size_t i = 0; i < n_; ++i) ra[i] = {supply_[i], 1};
    for (std::size_t j = 0; j < m_; ++j) rb[j] = {demand_[j], 0};
    rb[m_ - 1].e = static_cast<long long>(n_);
    std::size_t i = 0, j = 0;
    for (;;) {
      if (i == n_ - 1 && j == m_ - 1) {
        add_basic(i, j, ra[i]);
        break;
      }
      const bool take_row = (j == m_ - 1) || (i < n_ - 1 && less(ra[i], rb[j]));
      if (take_row) {
        add_basic(i, j, ra[i]);
        rb[j].v -= ra[i].v;
        rb[j].e -= ra[i].e;
        ++i;
      } else {
        add_basic(i, j, rb[j]);
        ra[i].v -= rb[j].v;
        ra[i].e -= rb[j].e;
        ++j;
      }
    }
  }

  // Potentials (u_i for rows, v_j for columns, u_0 = 0) and rooted tree
  // structure by breadth-first search over basic cells.
  void build_tree() {
    const std::size_t nodes = n_ + m_;
    pot_.assign(nodes, 0.0);
    parent_edge_.assign(nodes, -1);
    parent_.assign(nodes, -1);
    depth_.assign(nodes, -1);
    queue_.clear();
    queue_.push_back(0);
    depth_[0] = 0;
    for (std::size_t h = 0; h < queue_.size(); ++h) {
      const std::size_t u = queue_[h];
      for (std::size_t b : adj_[u]) {
        const std::size_t r = basis_row_[b], c = n_ + basis_col_[b];
        const std::size_t w = (u == r) ? c : r;
        if (depth_[w] >= 0) continue;
        depth_[w] = depth_[u] + 1;
        parent_[w] = static_cast<std::ptrdiff_t>(u);
        parent_edge_[w] = static_cast<std::ptrdiff_t>(b);
        pot_[w] = cost_(basis_row_[b], basis_col_[b]) - pot_[u];
        queue_.push_back(w);
      }
    }
  }

  void pivot(std::size_t cell) {
    const std::size_t ei = cell / m_, ej = cell % m_;
    // Walk both endpoints to their common ancestor. Edges at even distance
    // from either endpoint lose flow, the others gain.
    std::vector<std::size_t>& minus = minus_;
    std::vector<std::size_t>& plus = plus_;
    minus.clear();
    plus.clear();
    std::size_t a = ei, b = n_ + ej;
    int ka = 0, kb = 0;
    while (a != b) {
      if (depth_[a] >= depth_[b]) {
        const auto e = static_cast<std::size_t>(parent_edge_[a]);
        (ka % 2 == 0 ? minus : plus).push_back(e);
        a = static_cast<std::size_t>(parent_[a]);
        ++ka;
      } else {
        const auto e = static_cast<std::size_t>(parent_edge_[b]);
        (kb % 2 == 0 ? minus : plus).push_back(e);
        b = static_cast<std::size_t>(parent_[b]);
        ++kb;
      }
    }
    std::size_t leave = minus.front();
    for (std::size_t e : minus)
      if (less(flow_[e], flow_[leave])) leave = e;
    const LexFlow theta = flow_[leave];
    for (std::size_t e : minus) {
      flow_[e].v -= theta.v;
      flow_[e].e -= theta.e;
    }
    for (std::size_t e : plus) {
      flow_[e].v += theta.v;
      flow_[e].e += theta.e;
    }
    // Replace the leaving cell by the entering one in slot `leave`.
    const std::size_t li = basis_row_[leave], lj = basis_col_[leave];
    is_basic_[li * m_ + lj] = 0;
    auto drop = [&](std::size_t node) {
      auto& v = adj_[node];
      v.erase(std::find(v.begin(), v.end(), leave));
    };
    drop(li);
    drop(n_ + lj);
    basis_row_[leave] = ei;
    basis_col_[leave] = ej;
    flow_[leave] = theta;
    adj_[ei].push_back(leave);
    adj_[n_ + ej].push_back(leave);
    is_basic_[cell] = 1;
  }

  std::size_t n_, m_;
  const Matrix& cost_;
  std::span<const double> supply_, demand_;
  double tol_ = 0.0, eps_ = 0.0;

  std::vector<std::size_t> basis_row_, basis_col_;
  std::vector<LexFlow> flow_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<char> is_basic_;

  std::vector<double> pot_;
  std::vector<std::ptrdiff_t> parent_edge_, parent_;
  std::vector<int> depth_;
  std::vector<std::size_t> queue_, minus_, plus_;
};

}  // namespace

TransportResult solve_transport(std::span<const double> supply, std::span<const double> demand,
                                const Matrix& cost) {
  if (supply.empty() || demand.empty()) throw InvalidInput("solve_transport: empty marginal");
  if (cost.rows() != static_cast<Eigen::Index>(supply.size()) ||
      cost.cols() != static_cast<Eigen::Index>(demand.size()))
    throw InvalidInput("solve_transport: cost matrix shape does not match marginals");
  double sa = 0.0, sb = 0.0;
  for (double x : supply) {
    if (!(x >= 0.0)) throw InvalidInput("solve_transport: negative supply");
    sa += x;
  }
  for (double x : demand) {
    if (!(x >= 0.0)) throw InvalidInput("solve_transport: negative demand");
    sb += x;
  }
  if (std::abs(sa - sb) > 1e-9) throw InvalidInput("solve_transport: unbalanced marginals");
  if (!cost.allFinite()) throw InvalidInput("solve_transport: non-finite cost");
  return NetworkSimplex(supply, demand, cost).run();
}

Matrix squared_euclidean_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != nu.dim()) throw InvalidInput("squared_euclidean_cost: dimension mismatch");
  Matrix c(static_cast<Eigen::Index>(mu.size()), static_cast<Eigen::Index>(nu.size()));
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t j = 0; j < nu.size(); ++j)
      c(i, j) = squared_distance(mu.point(i), nu.point(j));
  return c;
}

TransportResult solve_exact_ot(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != nu.dim()) throw InvalidInput("solve_exact_ot: dimension mismatch");
  const Matrix c = squared_euclidean_cost(mu, nu);
  return solve_transport(mu.weights(), nu.weights(), c);
}

double w2_squared(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  return std::max(0.0, solve_exact_ot(mu, nu).cost);
}

double w2(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  return std::sqrt(w2_squared(mu, nu));
}

std::vector<Point> barycentric_map(const Coupling& coupling, const DiscreteMeasure& target) {
  const auto n = static_cast<std::size_t>(coupling.plan.rows());
  if (static_cast<std::size_t>(coupling.plan.cols()) != target.size())
    throw InvalidInput("barycentric_map: coupling columns differ from target atoms");
  std::vector<Point> out(n, Point(target.dim(), 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double r = coupling.row_marginal[i];
    if (!(r > 0.0)) throw InvalidInput("barycentric_map: zero row marginal");
    for (std::size_t j = 0; j < target.size(); ++j) {
      const double p = coupling.plan(i, j);
      if (p == 0.0) continue;
      const double w = p / r;
      auto y = target.point(j);
      for (std::size_t k = 0; k < y.size(); ++k) out[i][k] += w * y[k];
    }
  }
  return out;
}

}  // namespace nakm
