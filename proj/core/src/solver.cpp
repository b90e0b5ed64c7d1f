#include "welfare/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

#include "welfare/errors.hpp"

namespace welfare {

namespace {

std::string describe(std::span<const double> theta) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < theta.size(); ++i) os << (i ? ", " : "") << theta[i];
  os << ')';
  return os.str();
}

// One iteration's welfare value and weight. `support` lists the agents with
// nonzero weight in ascending index order; only those are queried.
struct WeightChoice {
  double welfare = 0.0;
  std::vector<double> weight;
  std::vector<std::size_t> support;
};

using WeightRule = std::function<WeightChoice(std::span<const double>)>;

SolverRun run_projected_ascent(const WeightRule& choose,
                               const UtilityOracle& oracle,
                               const FeasibleSet& set,
                               const Allocation& theta0, std::size_t horizon,
                               const StepSchedule& schedule) {
  const std::size_t d = oracle.dimension();
  const std::size_t n = oracle.agents();
  if (horizon < 1) throw ContractViolation("smwm: horizon must be >= 1");
  if (theta0.size() != d || set.dimension() != d) {
    throw ContractViolation("smwm: dimension mismatch between oracle, set and start");
  }

  SolverRun run;
  run.heuristic = !oracle.concave();
  run.trace.reserve(horizon);

  std::vector<double> theta(theta0.values().begin(), theta0.values().end());
  if (!set.contains(theta, 0.0)) {
    project_in_place(set, theta);
    run.start_projected = true;
  }

  std::vector<double> utilities(n);
  std::vector<double> agent_grad(d);
  std::vector<double> grad(d);
  std::vector<double> ergodic_sum(d, 0.0);
  double gamma_sum = 0.0;
  double best_value = -std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;

  for (std::size_t t = 0; t < horizon; ++t) {
    oracle.utilities(theta, utilities);
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(utilities[i])) {
        throw OracleFailure("utility of agent " + std::to_string(i) +
                                " is not finite at iteration " + std::to_string(t) +
                                ", theta=" + describe(theta),
                            t);
      }
    }

    WeightChoice choice = choose(utilities);

    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i : choice.support) {
      oracle.supergradient(theta, i, agent_grad);
      const double wi = choice.weight[i];
      for (std::size_t j = 0; j < d; ++j) {
        if (!std::isfinite(agent_grad[j])) {
          throw OracleFailure("supergradient of agent " + std::to_string(i) +
                                  " is not finite at iteration " + std::to_string(t) +
                                  ", theta=" + describe(theta),
                              t);
        }
        grad[j] += wi * agent_grad[j];
      }
    }

    double norm_sq = 0.0;
    for (double g : grad) norm_sq += g * g;
    const double gamma = schedule.at(t);

    for (std::size_t j = 0; j < d; ++j) ergodic_sum[j] += gamma * theta[j];
    gamma_sum += gamma;
    if (choice.welfare > best_value) {
      best_value = choice.welfare;
      best_index = t;
    }

    IterationRecord rec;
    rec.t = t;
    rec.gamma = gamma;
    rec.theta = theta;
    rec.utilities = utilities;
    rec.welfare = choice.welfare;
    rec.weight = std::move(choice.weight);
    rec.grad_norm = std::sqrt(norm_sq);
    run.trace.push_back(std::move(rec));

    for (std::size_t j = 0; j < d; ++j) theta[j] += gamma * grad[j];
    project_in_place(set, theta);
  }

  for (double& v : ergodic_sum) v /= gamma_sum;
  run.ergodic = Allocation(std::move(ergodic_sum));
  run.best = Allocation(run.trace[best_index].theta);
  run.best_value = best_value;
  run.best_iteration = best_index;
  return run;
}

}  // namespace

StepSchedule StepSchedule::fixed(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ContractViolation("fixed step size must be positive");
  }
  return StepSchedule(step::Fixed{gamma});
}

StepSchedule StepSchedule::inverse_sqrt(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw ContractViolation("inverse-sqrt step constant must be positive");
  }
  return StepSchedule(step::InverseSqrt{c});
}

StepSchedule StepSchedule::fixed_for_horizon(double c, std::size_t horizon) {
  if (horizon < 1) throw ContractViolation("horizon must be >= 1");
  return fixed(c / std::sqrt(static_cast<double>(horizon)));
}

double StepSchedule::at(std::size_t t) const {
  if (const auto* f = std::get_if<step::Fixed>(&variant_)) return f->gamma;
  const auto& s = std::get<step::InverseSqrt>(variant_);
  return s.c / std::sqrt(static_cast<double>(t) + 1.0);
}

SolverRun smwm(const WelfareMeasure& phi, const UtilityOracle& oracle,
               const FeasibleSet& set, const Allocation& theta0,
               std::size_t horizon, const StepSchedule& schedule) {
  const WeightRule rule = [&phi](std::span<const double> u) {
    WeightChoice c;
    c.welfare = evaluate(phi, u);
    const WeightVector w = select_weight(phi, u);
    c.weight.assign(w.weights().begin(), w.weights().end());
    for (std::size_t i = 0; i < c.weight.size(); ++i) {
      if (c.weight[i] != 0.0) c.support.push_back(i);
    }
    return c;
  };
  return run_projected_ascent(rule, oracle, set, theta0, horizon, schedule);
}

SolverRun smwm_klow(std::size_t k, const UtilityOracle& oracle,
                    const FeasibleSet& set, const Allocation& theta0,
                    std::size_t horizon, const StepSchedule& schedule) {
  if (k < 1 || k > oracle.agents()) {
    throw ContractViolation("smwm_klow requires 1 <= K <= N");
  }
  const WelfareMeasure low = WelfareMeasure::low_k(k);
  const double share = 1.0 / static_cast<double>(k);
  const WeightRule rule = [&low, k, share](std::span<const double> u) {
    WeightChoice c;
    c.welfare = evaluate(low, u);
    const SortPermutation order = sort_permutation(u);
    c.support.assign(order.order().begin(), order.order().begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(c.support.begin(), c.support.end());
    c.weight.assign(u.size(), 0.0);
    for (std::size_t i : c.support) c.weight[i] = share;
    return c;
  };
  return run_projected_ascent(rule, oracle, set, theta0, horizon, schedule);
}

double theoretical_gap_bound(double diameter, double grad_bound,
                             const StepSchedule& schedule, std::size_t horizon) {
  if (!(diameter >= 0.0) || !(grad_bound >= 0.0) || horizon < 1) {
    throw ContractViolation("theoretical_gap_bound: need D >= 0, M >= 0, T >= 1");
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t t = 0; t < horizon; ++t) {
    const double g = schedule.at(t);
    sum += g;
    sum_sq += g * g;
  }
  return diameter * diameter / sum + grad_bound * grad_bound * sum_sq / sum;
}

double supergradient_bound(std::span<const double> m, const WelfareMeasure& phi) {
  if (m.empty()) throw ContractViolation("supergradient_bound: empty caps");
  for (double v : m) {
    if (!(v >= 0.0)) throw ContractViolation("supergradient_bound: caps must be >= 0");
  }
  // max_w <w, m> = -min_w <w, -m>.
  std::vector<double> negated(m.size());
  std::transform(m.begin(), m.end(), negated.begin(), [](double v) { return -v; });
  return -evaluate(phi, negated);
}

}  // namespace welfare
