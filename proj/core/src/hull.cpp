#include <Eigen/Dense>

#include <algorithm>
#include <vector>

#include "welfare/errors.hpp"
#include "welfare/welfare_measure.hpp"

namespace welfare {

// Wolfe's minimum-norm-point algorithm applied to the vertices translated by
// -point. Terminates in finitely many major cycles; the iteration cap only
// guards against numerical cycling.
double distance_to_hull(std::span<const WeightVector> vertices,
                        std::span<const double> point) {
  if (vertices.empty()) throw ContractViolation("distance_to_hull: no vertices");
  const auto n = static_cast<Eigen::Index>(point.size());
  const auto m = static_cast<Eigen::Index>(vertices.size());

  Eigen::MatrixXd pts(n, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto& v = vertices[static_cast<std::size_t>(j)];
    if (v.size() != point.size()) {
      throw ContractViolation("distance_to_hull: dimension mismatch");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      pts(i, j) = v[static_cast<std::size_t>(i)] - point[static_cast<std::size_t>(i)];
    }
  }

  const Eigen::VectorXd sq = pts.colwise().squaredNorm();
  const double scale = std::max(sq.maxCoeff(), 1e-300);
  constexpr double kTol = 1e-14;
  constexpr double kWeightTol = 1e-13;

  Eigen::Index start = 0;
  sq.minCoeff(&start);
  std::vector<Eigen::Index> active{start};
  Eigen::VectorXd lambda = Eigen::VectorXd::Ones(1);
  Eigen::VectorXd x = pts.col(start);

  auto gather = [&]() {
    Eigen::MatrixXd sub(n, static_cast<Eigen::Index>(active.size()));
    for (std::size_t k = 0; k < active.size(); ++k) {
      sub.col(static_cast<Eigen::Index>(k)) = pts.col(active[k]);
    }
    return sub;
  };

  const int max_major = 50 * static_cast<int>(m) + 50;
  for (int major = 0; major < max_major; ++major) {
    const Eigen::VectorXd dots = pts.transpose() * x;
    Eigen::Index entering = 0;
    dots.minCoeff(&entering);
    if (x.squaredNorm() - dots(entering) <= kTol * scale) break;
    if (std::find(active.begin(), active.end(), entering) != active.end()) break;

    active.push_back(entering);
    lambda.conservativeResize(lambda.size() + 1);
    lambda(lambda.size() - 1) = 0.0;

    for (;;) {
      const Eigen::MatrixXd sub = gather();
      const auto k = sub.cols();
      // Affine minimiser: min ||sub a||^2 subject to sum(a) = 1.
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
      kkt.topLeftCorner(k, k) = sub.transpose() * sub;
      kkt.topRightCorner(k, 1).setOnes();
      kkt.bottomLeftCorner(1, k).setOnes();
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
      rhs(k) = 1.0;
      const Eigen::VectorXd alpha =
          kkt.completeOrthogonalDecomposition().solve(rhs).head(k);

      if ((alpha.array() > kWeightTol).all()) {
        lambda = alpha / alpha.sum();
        x = sub * lambda;
        break;
      }

      double step = 1.0;
      for (Eigen::Index i = 0; i < k; ++i) {
        if (alpha(i) <= kWeightTol) {
          const double denom = lambda(i) - alpha(i);
          if (denom > 0.0) step = std::min(step, lambda(i) / denom);
        }
      }
      lambda = step * alpha + (1.0 - step) * lambda;

      std::vector<Eigen::Index> kept;
      std::vector<double> kept_lambda;
      for (Eigen::Index i = 0; i < k; ++i) {
        if (lambda(i) > kWeightTol) {
          kept.push_back(active[static_cast<std::size_t>(i)]);
          kept_lambda.push_back(lambda(i));
        }
      }
      if (kept.empty()) {
        // Degenerate step; fall back to the entering vertex alone.
        kept.push_back(entering);
        kept_lambda.push_back(1.0);
      }
      active = std::move(kept);
      lambda = Eigen::Map<const Eigen::VectorXd>(
          kept_lambda.data(), static_cast<Eigen::Index>(kept_lambda.size()));
      lambda /= lambda.sum();
      x = gather() * lambda;
    }
  }
  return x.norm();
}

}  // namespace welfare
