#pragma once

// Welfare measures over a finite population of agents.
//
// A welfare measure aggregates a vector of per-agent utilities into a single
// score. Every measure handled here has the robust form
//
//     Phi(u) = min_{w in W} <w, u>,
//
// where W (the weight set, equal to the superdifferential of Phi at the
// origin) is a closed convex subset of the probability simplex. The four
// supported variants are the weighted average (W is a single point), the
// minimum (W is the whole simplex), the low-K average (W is the simplex capped
// at 1/K per coordinate) and an arbitrary polytope given by its vertices.
//
// All types are immutable after construction and every function is pure.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace welfare {

/// Tolerance for simplex membership of weight vectors.
inline constexpr double kSimplexTolerance = 1e-12;
/// Tolerance for convex-hull membership of vertex-set weight sets.
inline constexpr double kHullTolerance = 1e-9;

/// Per-agent utilities u in R^N. N >= 1, every entry finite.
class UtilityVector {
 public:
  explicit UtilityVector(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const UtilityVector&, const UtilityVector&) = default;

 private:
  std::vector<double> values_;
};

/// A point of the probability simplex: nonnegative entries summing to one.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> weights);

  static WeightVector uniform(std::size_t n);
  static WeightVector indicator(std::size_t n, std::size_t index);

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const noexcept { return weights_; }

  friend bool operator==(const WeightVector&, const WeightVector&) = default;

 private:
  std::vector<double> weights_;
};

/// True when `w` lies on the simplex within kSimplexTolerance.
bool on_simplex(std::span<const double> w, double tol = kSimplexTolerance);

/// Agent indices ordered by nondecreasing utility, ties by ascending index.
class SortPermutation {
 public:
  explicit SortPermutation(std::vector<std::size_t> order);

  std::size_t size() const noexcept { return order_.size(); }
  std::size_t operator[](std::size_t rank) const { return order_[rank]; }
  std::span<const std::size_t> order() const noexcept { return order_; }

  friend bool operator==(const SortPermutation&, const SortPermutation&) = default;

 private:
  std::vector<std::size_t> order_;
};

namespace measure {

struct Average {
  WeightVector weights;
};

struct Minimum {};

struct LowK {
  std::size_t k;
};

struct VertexSet {
  std::vector<WeightVector> vertices;
};

}  // namespace measure

class WelfareMeasure {
 public:
  using Variant = std::variant<measure::Average, measure::Minimum,
                               measure::LowK, measure::VertexSet>;

  static WelfareMeasure average(WeightVector weights);
  static WelfareMeasure uniform_average(std::size_t n);
  static WelfareMeasure minimum();
  /// Requires k >= 1; the upper bound k <= N is checked on evaluation.
  static WelfareMeasure low_k(std::size_t k);
  /// Requires at least one vertex, all of the same dimension.
  static WelfareMeasure vertex_set(std::vector<WeightVector> vertices);

  const Variant& variant() const noexcept { return variant_; }

  /// Number of agents the measure is tied to, if any. Minimum and LowK
  /// adapt to the size of the utility vector.
  std::optional<std::size_t> dimension() const;

  /// Short human-readable name such as "low-3" or "min".
  std::string name() const;

 private:
  explicit WelfareMeasure(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

/// Stable ascending sort of agent indices by utility.
SortPermutation sort_permutation(std::span<const double> u);
SortPermutation sort_permutation(const UtilityVector& u);

/// Phi(u). Throws ContractViolation on dimension mismatch or K > N.
double evaluate(const WelfareMeasure& phi, std::span<const double> u);
double evaluate(const WelfareMeasure& phi, const UtilityVector& u);

/// A weight w in the weight set with <w, u> = Phi(u), i.e. a supergradient
/// of Phi at u. Deterministic: LowK picks the first K agents of
/// sort_permutation(u), Minimum the first minimiser, VertexSet the first
/// vertex in list order attaining the minimum.
WeightVector select_weight(const WelfareMeasure& phi, std::span<const double> u);
WeightVector select_weight(const WelfareMeasure& phi, const UtilityVector& u);

/// Whether w belongs to the weight set of phi.
bool weight_set_contains(const WelfareMeasure& phi, const WeightVector& w);

/// Euclidean distance from `point` to the convex hull of `vertices`.
/// Computed with Wolfe's minimum-norm-point method.
double distance_to_hull(std::span<const WeightVector> vertices,
                        std::span<const double> point);

// ---------------------------------------------------------------------------
// Randomised axiom checker.

struct AxiomCheck {
  bool passed = true;
  std::size_t checks = 0;
  /// Human-readable description of the first failing case.
  std::optional<std::string> witness;
};

/// Per-axiom outcome. Upper semi-continuity is not sampled.
struct AxiomReport {
  AxiomCheck monotonicity;
  AxiomCheck concavity;
  AxiomCheck homogeneity;
  AxiomCheck antisymmetry;  // Phi(1) == -Phi(-1)

  bool all_passed() const {
    return monotonicity.passed && concavity.passed && homogeneity.passed &&
           antisymmetry.passed;
  }
};

using Functional = std::function<double(std::span<const double>)>;

/// Checks monotonicity, midpoint concavity, positive homogeneity for
/// lambda in {0, 0.5, 2} and Phi(1) = -Phi(-1) over every sample pair.
AxiomReport check_axioms(const Functional& phi,
                         std::span<const UtilityVector> samples, double tol);
AxiomReport check_axioms(const WelfareMeasure& phi,
                         std::span<const UtilityVector> samples, double tol);

}  // namespace welfare
