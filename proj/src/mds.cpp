#include "nakm/mds.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace nakm {

MdsResult classical_mds(const Matrix& dist, std::size_t dim) {
  const Eigen::Index n = dist.rows();
  if (dist.cols() != n) throw InvalidInput("classical_mds: distance matrix must be square");
  if (dim == 0) throw ConfigError("classical_mds: dim must be >= 1");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (dist(i, i) != 0.0) throw InvalidInput("classical_mds: non-zero diagonal");
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(dist(i, j) - dist(j, i)) > 1e-12) throw InvalidInput("classical_mds: asymmetric input");
  }

  Eigen::MatrixXd sq = dist.cwiseProduct(dist);
  const Eigen::VectorXd row_mean = sq.rowwise().mean();
  const double grand = row_mean.mean();
  Eigen::MatrixXd b(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      b(i, j) = -0.5 * (sq(i, j) - row_mean(i) - row_mean(j) + grand);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  if (eig.info() != Eigen::Success) throw NumericalError("classical_mds: eigen-decomposition failed");

  MdsResult out;
  const auto k = static_cast<Eigen::Index>(dim);
  out.coords = Matrix::Zero(n, k);
  out.eigenvalues = Eigen::VectorXd::Zero(k);
  for (Eigen::Index a = 0; a < k && a < n; ++a) {
    const Eigen::Index col = n - 1 - a;  // ascending order from the solver
    const double lambda = eig.eigenvalues()(col);
    out.eigenvalues(a) = lambda;
    if (lambda < 0.0) ++out.clamped_negative;
    Eigen::VectorXd v = eig.eigenvectors().col(col);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(v(i)) > 1e-12) {
        if (v(i) < 0.0) v = -v;
        break;
      }
    }
    out.coords.col(a) = v * std::sqrt(std::max(lambda, 0.0));
  }
  return out;
}

}  // namespace nakm
