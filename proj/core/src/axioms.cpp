#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "welfare/errors.hpp"
#include "welfare/welfare_measure.hpp"

namespace welfare {

namespace {

std::string format_vector(std::span<const double> v) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

void record(AxiomCheck& check, bool ok, const std::string& witness) {
  ++check.checks;
  if (!ok && check.passed) {
    check.passed = false;
    check.witness = witness;
  }
}

double slack(double tol, double a, double b) {
  return tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

}  // namespace

AxiomReport check_axioms(const Functional& phi,
                         std::span<const UtilityVector> samples, double tol) {
  if (samples.empty()) throw ContractViolation("check_axioms: no samples");
  const std::size_t n = samples.front().size();
  for (const auto& s : samples) {
    if (s.size() != n) throw ContractViolation("check_axioms: mixed dimensions");
  }

  AxiomReport report;
  std::vector<double> joined(n);
  std::vector<double> mid(n);
  std::vector<double> scaled(n);

  for (std::size_t a = 0; a < samples.size(); ++a) {
    const auto u = samples[a].values();
    const double fu = phi(u);

    for (double lambda : {0.0, 0.5, 2.0}) {
      for (std::size_t i = 0; i < n; ++i) scaled[i] = lambda * u[i];
      const double lhs = phi(scaled);
      record(report.homogeneity,
             std::abs(lhs - lambda * fu) <= slack(tol, lhs, lambda * fu),
             "lambda=" + std::to_string(lambda) + " at u=" + format_vector(u));
    }

    for (std::size_t b = a + 1; b < samples.size(); ++b) {
      const auto v = samples[b].values();
      const double fv = phi(v);
      for (std::size_t i = 0; i < n; ++i) {
        joined[i] = std::max(u[i], v[i]);
        mid[i] = 0.5 * (u[i] + v[i]);
      }
      const double fj = phi(joined);
      record(report.monotonicity,
             fu <= fj + slack(tol, fu, fj) && fv <= fj + slack(tol, fv, fj),
             "u=" + format_vector(u) + " v=" + format_vector(v));
      const double fm = phi(mid);
      const double chord = 0.5 * (fu + fv);
      record(report.concavity, fm >= chord - slack(tol, fm, chord),
             "midpoint of u=" + format_vector(u) + " and v=" + format_vector(v));
    }
  }

  const std::vector<double> ones(n, 1.0);
  const std::vector<double> minus_ones(n, -1.0);
  const double up = phi(ones);
  const double down = phi(minus_ones);
  record(report.antisymmetry, std::abs(up + down) <= slack(tol, up, down),
         "Phi(1)=" + std::to_string(up) + " Phi(-1)=" + std::to_string(down));
  return report;
}

AxiomReport check_axioms(const WelfareMeasure& phi,
                         std::span<const UtilityVector> samples, double tol) {
  return check_axioms(
      [&phi](std::span<const double> u) { return evaluate(phi, u); }, samples,
      tol);
}

}  // namespace welfare
