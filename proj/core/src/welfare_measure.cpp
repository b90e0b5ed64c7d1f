#include "welfare/welfare_measure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "welfare/errors.hpp"

namespace welfare {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void require_same_size(std::size_t expected, std::size_t actual,
                       const char* what) {
  if (expected != actual) {
    throw ContractViolation(std::string(what) + ": dimension mismatch (" +
                            std::to_string(expected) + " vs " +
                            std::to_string(actual) + ")");
  }
}

void require_k(std::size_t k, std::size_t n) {
  if (k < 1 || k > n) {
    throw ContractViolation("low-K welfare requires 1 <= K <= N (K=" +
                            std::to_string(k) + ", N=" + std::to_string(n) +
                            ")");
  }
}

// Mean of the k smallest entries, summed in ascending order.
double low_k_mean(std::span<const double> u, std::size_t k) {
  constexpr std::size_t kInline = 32;
  std::array<double, kInline> small{};
  std::vector<double> large;
  std::span<double> buf;
  if (u.size() <= kInline) {
    buf = std::span<double>(small.data(), u.size());
  } else {
    large.resize(u.size());
    buf = large;
  }
  std::copy(u.begin(), u.end(), buf.begin());
  std::sort(buf.begin(), buf.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i) acc += buf[i];
  return acc / static_cast<double>(k);
}

}  // namespace

UtilityVector::UtilityVector(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) throw ContractViolation("utility vector must be nonempty");
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw ContractViolation("utility vector entries must be finite");
    }
  }
}

bool on_simplex(std::span<const double> w, double tol) {
  if (w.empty()) return false;
  double sum = 0.0;
  for (double x : w) {
    if (!std::isfinite(x) || x < 0.0) return false;
    sum += x;
  }
  return std::abs(sum - 1.0) <= tol;
}

WeightVector::WeightVector(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (!on_simplex(weights_)) {
    throw ContractViolation("weight vector must lie on the probability simplex");
  }
}

WeightVector WeightVector::uniform(std::size_t n) {
  if (n == 0) throw ContractViolation("uniform weight needs n >= 1");
  return WeightVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

WeightVector WeightVector::indicator(std::size_t n, std::size_t index) {
  if (index >= n) throw ContractViolation("indicator index out of range");
  std::vector<double> w(n, 0.0);
  w[index] = 1.0;
  return WeightVector(std::move(w));
}

SortPermutation::SortPermutation(std::vector<std::size_t> order)
    : order_(std::move(order)) {
  std::vector<bool> seen(order_.size(), false);
  for (std::size_t i : order_) {
    if (i >= order_.size() || seen[i]) {
      throw ContractViolation("sort permutation must be a bijection");
    }
    seen[i] = true;
  }
}

WelfareMeasure WelfareMeasure::average(WeightVector weights) {
  return WelfareMeasure(measure::Average{std::move(weights)});
}

WelfareMeasure WelfareMeasure::uniform_average(std::size_t n) {
  return average(WeightVector::uniform(n));
}

WelfareMeasure WelfareMeasure::minimum() {
  return WelfareMeasure(measure::Minimum{});
}

WelfareMeasure WelfareMeasure::low_k(std::size_t k) {
  if (k < 1) throw ContractViolation("low-K welfare requires K >= 1");
  return WelfareMeasure(measure::LowK{k});
}

WelfareMeasure WelfareMeasure::vertex_set(std::vector<WeightVector> vertices) {
  if (vertices.empty()) {
    throw ContractViolation("vertex-set welfare needs at least one vertex");
  }
  for (const auto& v : vertices) {
    require_same_size(vertices.front().size(), v.size(), "vertex_set");
  }
  return WelfareMeasure(measure::VertexSet{std::move(vertices)});
}

std::optional<std::size_t> WelfareMeasure::dimension() const {
  return std::visit(
      Overloaded{
          [](const measure::Average& a) -> std::optional<std::size_t> {
            return a.weights.size();
          },
          [](const measure::Minimum&) -> std::optional<std::size_t> {
            return std::nullopt;
          },
          [](const measure::LowK&) -> std::optional<std::size_t> {
            return std::nullopt;
          },
          [](const measure::VertexSet& v) -> std::optional<std::size_t> {
            return v.vertices.front().size();
          },
      },
      variant_);
}

std::string WelfareMeasure::name() const {
  return std::visit(
      Overloaded{
          [](const measure::Average&) -> std::string { return "average"; },
          [](const measure::Minimum&) -> std::string { return "min"; },
          [](const measure::LowK& l) -> std::string {
            return "low-" + std::to_string(l.k);
          },
          [](const measure::VertexSet& v) -> std::string {
            return "vertex-set(" + std::to_string(v.vertices.size()) + ")";
          },
      },
      variant_);
}

SortPermutation sort_permutation(std::span<const double> u) {
  std::vector<std::size_t> order(u.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return u[a] < u[b]; });
  return SortPermutation(std::move(order));
}

SortPermutation sort_permutation(const UtilityVector& u) {
  return sort_permutation(u.values());
}

double evaluate(const WelfareMeasure& phi, std::span<const double> u) {
  if (u.empty()) throw ContractViolation("evaluate: empty utility vector");
  return std::visit(
      Overloaded{
          [&](const measure::Average& a) {
            require_same_size(a.weights.size(), u.size(), "evaluate");
            return dot(a.weights.weights(), u);
          },
          [&](const measure::Minimum&) {
            return *std::min_element(u.begin(), u.end());
          },
          [&](const measure::LowK& l) {
            require_k(l.k, u.size());
            return low_k_mean(u, l.k);
          },
          [&](const measure::VertexSet& v) {
            require_same_size(v.vertices.front().size(), u.size(), "evaluate");
            double best = dot(v.vertices.front().weights(), u);
            for (std::size_t j = 1; j < v.vertices.size(); ++j) {
              best = std::min(best, dot(v.vertices[j].weights(), u));
            }
            return best;
          },
      },
      phi.variant());
}

double evaluate(const WelfareMeasure& phi, const UtilityVector& u) {
  return evaluate(phi, u.values());
}

WeightVector select_weight(const WelfareMeasure& phi, std::span<const double> u) {
  if (u.empty()) throw ContractViolation("select_weight: empty utility vector");
  return std::visit(
      Overloaded{
          [&](const measure::Average& a) {
            require_same_size(a.weights.size(), u.size(), "select_weight");
            return a.weights;
          },
          [&](const measure::Minimum&) {
            auto it = std::min_element(u.begin(), u.end());
            return WeightVector::indicator(
                u.size(), static_cast<std::size_t>(it - u.begin()));
          },
          [&](const measure::LowK& l) {
            require_k(l.k, u.size());
            const SortPermutation order = sort_permutation(u);
            std::vector<double> w(u.size(), 0.0);
            const double share = 1.0 / static_cast<double>(l.k);
            for (std::size_t r = 0; r < l.k; ++r) w[order[r]] = share;
            return WeightVector(std::move(w));
          },
          [&](const measure::VertexSet& v) {
            require_same_size(v.vertices.front().size(), u.size(),
                              "select_weight");
            std::size_t arg = 0;
            double best = dot(v.vertices.front().weights(), u);
            for (std::size_t j = 1; j < v.vertices.size(); ++j) {
              const double val = dot(v.vertices[j].weights(), u);
              if (val < best) {
                best = val;
                arg = j;
              }
            }
            return v.vertices[arg];
          },
      },
      phi.variant());
}

WeightVector select_weight(const WelfareMeasure& phi, const UtilityVector& u) {
  return select_weight(phi, u.values());
}

bool weight_set_contains(const WelfareMeasure& phi, const WeightVector& w) {
  return std::visit(
      Overloaded{
          [&](const measure::Average& a) {
            require_same_size(a.weights.size(), w.size(), "weight_set_contains");
            for (std::size_t i = 0; i < w.size(); ++i) {
              if (std::abs(w[i] - a.weights[i]) > kSimplexTolerance) return false;
            }
            return true;
          },
          // The weight set of the minimum is the whole simplex, which a
          // WeightVector already belongs to.
          [&](const measure::Minimum&) { return true; },
          [&](const measure::LowK& l) {
            require_k(l.k, w.size());
            const double cap = 1.0 / static_cast<double>(l.k) + kSimplexTolerance;
            return std::all_of(w.weights().begin(), w.weights().end(),
                               [cap](double x) { return x <= cap; });
          },
          [&](const measure::VertexSet& v) {
            require_same_size(v.vertices.front().size(), w.size(),
                              "weight_set_contains");
            return distance_to_hull(v.vertices, w.weights()) <= kHullTolerance;
          },
      },
      phi.variant());
}

}  // namespace welfare
