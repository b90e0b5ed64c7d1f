#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "welfare/errors.hpp"
#include "welfare/solver.hpp"

namespace welfare {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Principal branch of Lambert W evaluated at z = exp(log_z).
double lambert_w_of_exp(double log_z) {
  if (log_z < 0.0) {
    const double z = std::exp(log_z);
    double w = z;
    for (int i = 0; i < 60; ++i) {
      const double ew = std::exp(w);
      const double f = w * ew - z;
      const double wp1 = w + 1.0;
      const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
      w -= step;
      if (std::abs(step) <= 1e-16 * std::max(std::abs(w), 1e-300)) break;
    }
    return w;
  }
  // Solve w + log(w) = log_z; the left side is increasing and concave.
  double w = log_z < 2.0 ? 0.5 + 0.3 * log_z : log_z - std::log(log_z);
  for (int i = 0; i < 100; ++i) {
    const double step = (w + std::log(w) - log_z) / (1.0 + 1.0 / w);
    w = std::max(w - step, 1e-300);
    if (std::abs(step) <= 1e-15 * w) break;
  }
  return w;
}

// Projection onto {y : sum_j c_j exp(y_j) <= b}. The KKT conditions give
// y_j = x_j - W(lambda c_j exp(x_j)) for the active multiplier lambda, and
// the constraint value is decreasing in lambda, so lambda is found by
// bisection on log(lambda).
void project_single_row(std::span<const double> c, double b,
                        std::span<double> x) {
  const std::size_t d = x.size();
  auto constraint = [&](std::span<const double> y) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      if (c[j] > 0.0) acc += std::exp(std::log(c[j]) + y[j]);
    }
    return acc;
  };
  if (constraint(x) <= b) return;

  std::vector<double> y(d);
  auto solve_for = [&](double log_lambda) {
    for (std::size_t j = 0; j < d; ++j) {
      y[j] = c[j] > 0.0
                 ? x[j] - lambert_w_of_exp(log_lambda + std::log(c[j]) + x[j])
                 : x[j];
    }
    return constraint(y);
  };

  double lo = -745.0;
  double hi = 0.0;
  while (solve_for(hi) > b) {
    lo = hi;
    hi += 8.0;
    if (hi > 745.0) throw InfeasibleSet("log-polytope projection failed to bracket");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++i) {
    const double midpoint = 0.5 * (lo + hi);
    if (solve_for(midpoint) > b) {
      lo = midpoint;
    } else {
      hi = midpoint;
    }
  }
  solve_for(hi);
  std::copy(y.begin(), y.end(), x.begin());
}

}  // namespace

Allocation::Allocation(std::vector<double> theta) : theta_(std::move(theta)) {
  if (theta_.empty()) throw ContractViolation("allocation must be nonempty");
  for (double v : theta_) {
    if (!std::isfinite(v)) throw ContractViolation("allocation entries must be finite");
  }
}

FeasibleSet::FeasibleSet(Variant v) : variant_(std::move(v)) {}

FeasibleSet FeasibleSet::box(std::vector<double> lower, std::vector<double> upper) {
  if (lower.empty() || lower.size() != upper.size()) {
    throw ContractViolation("box bounds must be nonempty and of equal size");
  }
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (std::isnan(lower[i]) || std::isnan(upper[i]) || lower[i] > upper[i]) {
      throw InfeasibleSet("box has lower > upper at coordinate " + std::to_string(i));
    }
  }
  feasible::Box b{std::move(lower), std::move(upper)};
  FeasibleSet set(b);
  set.box_ = std::move(b);
  set.is_box_ = true;
  return set;
}

FeasibleSet FeasibleSet::log_polytope(std::size_t rows, std::size_t cols,
                                      std::vector<double> c,
                                      std::vector<double> p_hat) {
  if (rows == 0 || cols == 0 || c.size() != rows * cols || p_hat.size() != rows) {
    throw ContractViolation("log_polytope: inconsistent matrix dimensions");
  }
  for (double v : c) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ContractViolation("log_polytope: C must be finite and nonnegative");
    }
  }
  for (double v : p_hat) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ContractViolation("log_polytope: p_hat must be positive");
    }
  }

  bool diagonal_like = true;
  feasible::Box reduced{std::vector<double>(cols, -kInf),
                        std::vector<double>(cols, kInf)};
  for (std::size_t i = 0; i < rows && diagonal_like; ++i) {
    std::size_t positives = 0;
    for (std::size_t j = 0; j < cols; ++j) {
      const double cij = c[i * cols + j];
      if (cij > 0.0) {
        ++positives;
        reduced.upper[j] = std::min(reduced.upper[j], std::log(p_hat[i] / cij));
      }
    }
    diagonal_like = positives <= 1;
  }
  if (!diagonal_like && rows != 1) {
    throw UnsupportedConfiguration(
        "log_polytope: projection is only supported when every row of C has a "
        "single positive entry or C has one row");
  }

  FeasibleSet set(feasible::LogPolytope{rows, cols, std::move(c), std::move(p_hat)});
  if (diagonal_like) {
    set.box_ = std::move(reduced);
    set.is_box_ = true;
  }
  return set;
}

std::size_t FeasibleSet::dimension() const noexcept {
  if (const auto* b = std::get_if<feasible::Box>(&variant_)) return b->lower.size();
  return std::get<feasible::LogPolytope>(variant_).cols;
}

const feasible::Box* FeasibleSet::as_box() const noexcept {
  return is_box_ ? &box_ : nullptr;
}

bool FeasibleSet::contains(std::span<const double> theta, double tol) const {
  if (theta.size() != dimension()) return false;
  if (is_box_) {
    for (std::size_t i = 0; i < theta.size(); ++i) {
      if (theta[i] < box_.lower[i] - tol || theta[i] > box_.upper[i] + tol) {
        return false;
      }
    }
    return true;
  }
  const auto& poly = std::get<feasible::LogPolytope>(variant_);
  for (std::size_t i = 0; i < poly.rows; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < poly.cols; ++j) {
      acc += poly.c[i * poly.cols + j] * std::exp(theta[j]);
    }
    if (acc > poly.p_hat[i] + tol * std::max(1.0, poly.p_hat[i])) return false;
  }
  return true;
}

double FeasibleSet::diameter() const {
  if (!is_box_) return kInf;
  double acc = 0.0;
  for (std::size_t i = 0; i < box_.lower.size(); ++i) {
    const double w = box_.upper[i] - box_.lower[i];
    acc += w * w;
  }
  return std::sqrt(acc / 2.0);
}

void project_in_place(const FeasibleSet& set, std::span<double> x) {
  if (x.size() != set.dimension()) {
    throw ContractViolation("project: dimension mismatch");
  }
  if (const auto* b = set.as_box()) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = std::clamp(x[i], b->lower[i], b->upper[i]);
    }
    return;
  }
  const auto& poly = std::get<feasible::LogPolytope>(set.variant());
  project_single_row(poly.c, poly.p_hat.front(), x);
}

Allocation project(const FeasibleSet& set, const Allocation& x) {
  std::vector<double> y(x.values().begin(), x.values().end());
  project_in_place(set, y);
  return Allocation(std::move(y));
}

}  // namespace welfare
