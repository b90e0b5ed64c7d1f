#pragma once

// Uplink power control: N links share a channel and each link's utility is a
// QoS map applied to its SINR. Allocations are log transmit powers s, so link
// k transmits exp(s[k]) and
//
//     SINR_k(s) = V[k][k] exp(s_k) / (sum_{l != k} V[k][l] exp(s_l) + sigma2_k).

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "welfare/solver.hpp"

namespace welfare::wireless {

/// Maps an SINR value x > 0 to a utility.
class QoSMap {
 public:
  enum class Kind { kLog, kNegInvPow, kLog1p, kIdentity };

  static QoSMap log() { return QoSMap(Kind::kLog, 0.0); }
  /// -1 / x^alpha, alpha >= 1.
  static QoSMap neg_inv_pow(double alpha);
  static QoSMap log1p() { return QoSMap(Kind::kLog1p, 0.0); }
  static QoSMap identity() { return QoSMap(Kind::kIdentity, 0.0); }

  /// Parses "log", "neginv:<alpha>", "log1p" or "id".
  static QoSMap parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }

  double value(double x) const;
  double derivative(double x) const;
  /// x * psi'(x): the derivative of psi(exp(y)) with respect to y.
  double log_derivative(double x) const;

  /// Whether psi(exp(.)) is concave, which makes utilities concave in log power.
  bool concave_in_log() const noexcept;

  /// The form accepted by parse(), e.g. "neginv:2".
  std::string name() const;
  /// A filename-safe tag, e.g. "neginv2".
  std::string tag() const;

  friend bool operator==(const QoSMap&, const QoSMap&) = default;

 private:
  QoSMap(Kind k, double alpha) : kind_(k), alpha_(alpha) {}
  Kind kind_;
  double alpha_;
};

class NetworkModel {
 public:
  /// `gains` is N x N row-major. Requires V[k][k] > 0, V[k][l] >= 0 and
  /// sigma2 > 0, all finite.
  NetworkModel(std::size_t n, std::vector<double> gains, std::vector<double> sigma2,
               QoSMap psi);

  std::size_t size() const noexcept { return n_; }
  double gain(std::size_t k, std::size_t l) const { return gains_[k * n_ + l]; }
  std::span<const double> gains() const noexcept { return gains_; }
  std::span<const double> sigma2() const noexcept { return sigma2_; }
  const QoSMap& psi() const noexcept { return psi_; }

  NetworkModel with_psi(QoSMap psi) const;

  friend bool operator==(const NetworkModel&, const NetworkModel&) = default;

 private:
  std::size_t n_;
  std::vector<double> gains_;
  std::vector<double> sigma2_;
  QoSMap psi_;
};

double sinr(const NetworkModel& model, std::span<const double> s, std::size_t k);
/// SINR of every link.
std::vector<double> sinr_all(const NetworkModel& model, std::span<const double> s);

double utility(const NetworkModel& model, std::span<const double> s, std::size_t k);

/// Gradient of s -> psi(SINR_k(s)).
std::vector<double> utility_supergradient(const NetworkModel& model,
                                          std::span<const double> s, std::size_t k);

/// An upper bound on the gradient norm of link k's utility over the box,
/// obtained by bounding every gradient component with interval arithmetic.
double gradient_norm_cap(const NetworkModel& model, const feasible::Box& box,
                         std::size_t k);

/// Caps for every link.
std::vector<double> gradient_norm_caps(const NetworkModel& model,
                                       const feasible::Box& box);

/// Random scenario: V[k][k] ~ U[1, 3], V[k][l] ~ Exp(rate 10), sigma2 = 0.2.
/// Draws come from std::mt19937_64 seeded with `seed`, consumed row-major
/// over (k, l). A uniform variate is (x >> 11) * 2^-53; an exponential one
/// is -log(1 - u) / rate.
NetworkModel generate_scenario(std::size_t n, std::uint64_t seed,
                               QoSMap psi = QoSMap::log());

/// Adapts a model to the solver's oracle interface; theta is log power.
class UtilityModel final : public UtilityOracle {
 public:
  explicit UtilityModel(NetworkModel model) : model_(std::move(model)) {}

  std::size_t agents() const override { return model_.size(); }
  std::size_t dimension() const override { return model_.size(); }
  void utilities(std::span<const double> theta, std::span<double> out) const override;
  void supergradient(std::span<const double> theta, std::size_t agent,
                     std::span<double> out) const override;
  bool concave() const override { return model_.psi().concave_in_log(); }

  const NetworkModel& model() const noexcept { return model_; }

 private:
  NetworkModel model_;
};

/// A scenario as stored on disk.
struct Scenario {
  std::uint64_t seed = 0;
  NetworkModel model;
};

/// JSON document with keys n, seed, psi, gains (row-major), sigma2.
/// Numbers are written in shortest round-trip form, so reading back
/// reproduces every double exactly.
std::string write_scenario(const Scenario& scenario);
Scenario read_scenario(std::string_view text);

void save_scenario(const Scenario& scenario, const std::string& path);
Scenario load_scenario(const std::string& path);

}  // namespace welfare::wireless
