#include "welfare/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "welfare/errors.hpp"

namespace welfare::oracles {

namespace {

std::vector<double> axis_points(double lower, double upper, double step) {
  std::vector<double> pts;
  const auto count = static_cast<std::size_t>(std::floor((upper - lower) / step));
  pts.reserve(count + 2);
  for (std::size_t i = 0; i <= count; ++i) {
    pts.push_back(lower + static_cast<double>(i) * step);
  }
  if (upper - pts.back() > 1e-12 * std::max(1.0, std::abs(upper))) {
    pts.push_back(upper);
  } else {
    pts.back() = upper;
  }
  return pts;
}

}  // namespace

LowKSolution lp_min_over_AK(std::span<const double> u, std::size_t k) {
  const std::size_t n = u.size();
  if (n == 0 || n > kMaxEnumerationAgents) {
    throw ContractViolation("lp_min_over_AK: N must be in [1, 12]");
  }
  if (k < 1 || k > n) throw ContractViolation("lp_min_over_AK: need 1 <= K <= N");

  // Subset masks in lexicographic order of their member lists.
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> best_mask;
  do {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask[i]) sum += u[i];
    }
    const double value = sum / static_cast<double>(k);
    if (value < best) {
      best = value;
      best_mask = mask;
    }
  } while (std::prev_permutation(mask.begin(), mask.end()));

  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (best_mask[i]) w[i] = 1.0 / static_cast<double>(k);
  }
  return LowKSolution{best, WeightVector(std::move(w))};
}

std::vector<double> finite_difference_gradient(const ScalarField& f,
                                               std::span<const double> x,
                                               double h) {
  if (!(h > 0.0)) throw ContractViolation("finite difference step must be positive");
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> grad(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    probe[j] = x[j] + h;
    const double up = f(probe);
    probe[j] = x[j] - h;
    const double down = f(probe);
    probe[j] = x[j];
    grad[j] = (up - down) / (2.0 * h);
  }
  return grad;
}

GridOptimum grid_search_optimum(const WelfareMeasure& phi,
                                const UtilityOracle& oracle, const GridSpec& grid) {
  const std::size_t d = oracle.dimension();
  if (d == 0 || d > 3) throw ContractViolation("grid search supports 1 <= D <= 3");
  if (grid.box.lower.size() != d || grid.box.upper.size() != d) {
    throw ContractViolation("grid search: box dimension mismatch");
  }
  if (!(grid.resolution > 0.0)) throw ContractViolation("grid resolution must be > 0");

  std::vector<std::vector<double>> axes;
  for (std::size_t j = 0; j < d; ++j) {
    const double lo = grid.box.lower[j];
    const double hi = grid.box.upper[j];
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
      throw ContractViolation("grid search needs a bounded box");
    }
    if (hi > lo && grid.resolution > hi - lo) {
      throw ContractViolation("grid resolution exceeds a box edge");
    }
    axes.push_back(hi > lo ? axis_points(lo, hi, grid.resolution)
                           : std::vector<double>{lo});
  }

  // The outermost axis is split into contiguous chunks; chunk results are
  // reduced in order with a strict comparison, so the lexicographically
  // first maximiser wins regardless of the thread count.
  struct Partial {
    double value = -std::numeric_limits<double>::infinity();
    std::vector<double> theta;
    std::size_t points = 0;
  };
  auto scan = [&](std::size_t first, std::size_t last, Partial& out) {
    std::vector<double> theta(d);
    std::vector<double> u(oracle.agents());
    const std::size_t n1 = d > 1 ? axes[1].size() : 1;
    const std::size_t n2 = d > 2 ? axes[2].size() : 1;
    for (std::size_t a = first; a < last; ++a) {
      theta[0] = axes[0][a];
      for (std::size_t b = 0; b < n1; ++b) {
        if (d > 1) theta[1] = axes[1][b];
        for (std::size_t c = 0; c < n2; ++c) {
          if (d > 2) theta[2] = axes[2][c];
          oracle.utilities(theta, u);
          const double value = evaluate(phi, u);
          ++out.points;
          if (value > out.value) {
            out.value = value;
            out.theta = theta;
          }
        }
      }
    }
  };

  const std::size_t outer = axes[0].size();
  const std::size_t workers = std::clamp<std::size_t>(
      std::thread::hardware_concurrency(), 1, std::min<std::size_t>(outer, 16));
  std::vector<Partial> partials(workers);
  if (workers == 1) {
    scan(0, outer, partials[0]);
  } else {
    std::vector<std::thread> threads;
    const std::size_t chunk = (outer + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t first = std::min(outer, w * chunk);
      const std::size_t last = std::min(outer, first + chunk);
      threads.emplace_back(scan, first, last, std::ref(partials[w]));
    }
    for (auto& t : threads) t.join();
  }

  Partial best;
  for (const auto& p : partials) {
    best.points += p.points;
    if (!p.theta.empty() && p.value > best.value) {
      best.value = p.value;
      best.theta = p.theta;
    }
  }
  if (best.theta.empty()) throw ContractViolation("grid search found no finite value");
  return GridOptimum{best.value, Allocation(std::move(best.theta)), best.points};
}

}  // namespace welfare::oracles
