#pragma once

// Brute-force references for checking the optimised code paths. Everything
// here is deliberately naive and limited to small problem sizes.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "welfare/solver.hpp"
#include "welfare/welfare_measure.hpp"

namespace welfare::oracles {

/// Largest N accepted by lp_min_over_AK.
inline constexpr std::size_t kMaxEnumerationAgents = 12;

struct LowKSolution {
  double value;
  WeightVector weight;
};

/// min over {w in simplex : w_i <= 1/K} of <w, u>, solved by enumerating the
/// extreme points (1/K) * indicator(S) with |S| = K. Returns the first
/// minimising vertex in lexicographic subset order.
LowKSolution lp_min_over_AK(std::span<const double> u, std::size_t k);

using ScalarField = std::function<double(std::span<const double>)>;

/// Central differences (f(x + h e_j) - f(x - h e_j)) / 2h.
std::vector<double> finite_difference_gradient(const ScalarField& f,
                                               std::span<const double> x,
                                               double h = 1e-6);

struct GridSpec {
  double resolution;
  feasible::Box box;
};

struct GridOptimum {
  double value;
  Allocation theta;
  std::size_t points;
};

/// Exhaustive maximisation of phi(U(theta)) over a regular grid covering the
/// box (both endpoints of every edge are included). Ties resolve to the
/// lexicographically smallest theta. Limited to D <= 3.
GridOptimum grid_search_optimum(const WelfareMeasure& phi,
                                const UtilityOracle& oracle, const GridSpec& grid);

}  // namespace welfare::oracles
