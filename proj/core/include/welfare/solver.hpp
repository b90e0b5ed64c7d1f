#pragma once

// Projected supergradient ascent for welfare maximisation:
//
//     maximise Phi(U(theta))  subject to  theta in Theta,
//
// where U = (U_1, ..., U_N) are concave per-agent utilities and Phi is a
// welfare measure. Each iteration picks a weight w_t with
// <w_t, U(theta_t)> = Phi(U(theta_t)), combines the agents' supergradients as
// g_t = sum_i w_t[i] * grad U_i(theta_t), and steps
// theta_{t+1} = Proj(theta_t + gamma_t * g_t).

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "welfare/welfare_measure.hpp"

namespace welfare {

/// A resource allocation theta in R^D with finite entries.
class Allocation {
 public:
  explicit Allocation(std::vector<double> theta);

  std::size_t size() const noexcept { return theta_.size(); }
  double operator[](std::size_t i) const { return theta_[i]; }
  std::span<const double> values() const noexcept { return theta_; }

  friend bool operator==(const Allocation&, const Allocation&) = default;

 private:
  std::vector<double> theta_;
};

namespace feasible {

/// lower <= theta <= upper elementwise. Bounds may be infinite.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;
};

/// {theta : C exp(theta) <= p_hat} with C >= 0 (M x D, row-major) and
/// p_hat > 0. Only the shapes listed on FeasibleSet::log_polytope are
/// projectable.
struct LogPolytope {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> c;
  std::vector<double> p_hat;
};

}  // namespace feasible

class FeasibleSet {
 public:
  using Variant = std::variant<feasible::Box, feasible::LogPolytope>;

  /// Throws ContractViolation if lower > upper somewhere or sizes differ.
  static FeasibleSet box(std::vector<double> lower, std::vector<double> upper);

  /// Accepted shapes:
  ///  * every row of C has at most one positive entry (the set is then a
  ///    box in log space, unbounded below), or
  ///  * C has a single row; projection solves the KKT system exactly.
  /// Any other shape throws UnsupportedConfiguration. Negative entries of C
  /// or nonpositive p_hat throw ContractViolation.
  static FeasibleSet log_polytope(std::size_t rows, std::size_t cols,
                                  std::vector<double> c,
                                  std::vector<double> p_hat);

  const Variant& variant() const noexcept { return variant_; }
  std::size_t dimension() const noexcept;

  bool contains(std::span<const double> theta, double tol = 1e-8) const;

  /// D such that D^2 = max over theta, theta' in the set of ||theta - theta'||^2 / 2.
  /// Infinite for unbounded sets.
  double diameter() const;

  /// The equivalent box when the set is one, e.g. a diagonal log-polytope.
  const feasible::Box* as_box() const noexcept;

 private:
  explicit FeasibleSet(Variant v);
  Variant variant_;
  // Populated for boxes and for log-polytopes that reduce to a box.
  feasible::Box box_;
  bool is_box_ = false;
};

/// Euclidean projection onto the set.
Allocation project(const FeasibleSet& set, const Allocation& x);
/// In-place variant used on the solver's hot path.
void project_in_place(const FeasibleSet& set, std::span<double> x);

namespace step {

struct Fixed {
  double gamma;
};

/// gamma_t = c / sqrt(t + 1).
struct InverseSqrt {
  double c;
};

}  // namespace step

class StepSchedule {
 public:
  using Variant = std::variant<step::Fixed, step::InverseSqrt>;

  static StepSchedule fixed(double gamma);
  static StepSchedule inverse_sqrt(double c);
  /// Fixed step c / sqrt(horizon).
  static StepSchedule fixed_for_horizon(double c, std::size_t horizon);

  double at(std::size_t t) const;
  const Variant& variant() const noexcept { return variant_; }

 private:
  explicit StepSchedule(Variant v) : variant_(v) {}
  Variant variant_;
};

/// Per-agent utilities and supergradients on the allocation space.
class UtilityOracle {
 public:
  virtual ~UtilityOracle() = default;

  virtual std::size_t agents() const = 0;
  virtual std::size_t dimension() const = 0;

  /// Writes U_i(theta) for every agent into `out` (size agents()).
  virtual void utilities(std::span<const double> theta,
                         std::span<double> out) const = 0;

  /// Writes a supergradient of U_agent at theta into `out` (size dimension()).
  virtual void supergradient(std::span<const double> theta, std::size_t agent,
                             std::span<double> out) const = 0;

  /// False when the utilities are not known to be concave; runs are then
  /// flagged heuristic.
  virtual bool concave() const { return true; }
};

struct IterationRecord {
  std::size_t t = 0;
  double gamma = 0.0;
  std::vector<double> theta;
  std::vector<double> utilities;
  double welfare = 0.0;
  std::vector<double> weight;
  double grad_norm = 0.0;

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

struct SolverRun {
  std::vector<IterationRecord> trace;
  /// sum_t gamma_t theta_t / sum_t gamma_t over the trace.
  Allocation ergodic{std::vector<double>{0.0}};
  /// First iterate attaining best_value.
  Allocation best{std::vector<double>{0.0}};
  double best_value = 0.0;
  std::size_t best_iteration = 0;
  /// The starting point was outside the set and was projected.
  bool start_projected = false;
  /// The oracle does not guarantee concavity; convergence theory does not apply.
  bool heuristic = false;
};

/// Generic projected supergradient ascent on Phi(U(theta)).
/// Throws OracleFailure when an iterate yields a non-finite utility.
SolverRun smwm(const WelfareMeasure& phi, const UtilityOracle& oracle,
               const FeasibleSet& set, const Allocation& theta0,
               std::size_t horizon, const StepSchedule& schedule);

/// Specialisation for the low-K welfare: only the K worst-off agents'
/// supergradients are queried. Produces the same trace as
/// smwm(WelfareMeasure::low_k(k), ...).
SolverRun smwm_klow(std::size_t k, const UtilityOracle& oracle,
                    const FeasibleSet& set, const Allocation& theta0,
                    std::size_t horizon, const StepSchedule& schedule);

/// D^2 / sum(gamma_t) + M^2 * sum(gamma_t^2) / sum(gamma_t), t = 0..T-1.
double theoretical_gap_bound(double diameter, double grad_bound,
                             const StepSchedule& schedule, std::size_t horizon);

/// max over the weight set of phi of <w, m>, for per-agent caps m >= 0.
double supergradient_bound(std::span<const double> m, const WelfareMeasure& phi);

}  // namespace welfare
