#include "welfare/wireless.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "welfare/errors.hpp"

namespace welfare::wireless {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_agent(const NetworkModel& model, std::span<const double> s,
                 std::size_t k) {
  if (s.size() != model.size()) {
    throw ContractViolation("log-power vector has wrong dimension");
  }
  if (k >= model.size()) throw ContractViolation("agent index out of range");
}

// Interference-plus-noise seen by link k.
double interference(const NetworkModel& model, std::span<const double> s,
                    std::size_t k) {
  double acc = model.sigma2()[k];
  for (std::size_t l = 0; l < model.size(); ++l) {
    if (l != k) acc += model.gain(k, l) * std::exp(s[l]);
  }
  return acc;
}

}  // namespace

QoSMap QoSMap::neg_inv_pow(double alpha) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) {
    throw ContractViolation("neginv QoS map needs a finite alpha >= 1");
  }
  return QoSMap(Kind::kNegInvPow, alpha);
}

QoSMap QoSMap::parse(std::string_view text) {
  if (text == "log") return log();
  if (text == "log1p") return log1p();
  if (text == "id") return identity();
  constexpr std::string_view prefix = "neginv:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string number(text.substr(prefix.size()));
    std::size_t used = 0;
    double alpha = 0.0;
    try {
      alpha = std::stod(number, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != number.size()) {
      throw ContractViolation("bad alpha in QoS map '" + std::string(text) + "'");
    }
    return neg_inv_pow(alpha);
  }
  throw ContractViolation("unknown QoS map '" + std::string(text) +
                          "' (expected log, neginv:<alpha>, log1p or id)");
}

double QoSMap::value(double x) const {
  switch (kind_) {
    case Kind::kLog: return std::log(x);
    case Kind::kNegInvPow: return -std::pow(x, -alpha_);
    case Kind::kLog1p: return std::log1p(x);
    case Kind::kIdentity: return x;
  }
  return 0.0;
}

double QoSMap::derivative(double x) const {
  switch (kind_) {
    case Kind::kLog: return 1.0 / x;
    case Kind::kNegInvPow: return alpha_ * std::pow(x, -alpha_ - 1.0);
    case Kind::kLog1p: return 1.0 / (1.0 + x);
    case Kind::kIdentity: return 1.0;
  }
  return 0.0;
}

double QoSMap::log_derivative(double x) const {
  switch (kind_) {
    case Kind::kLog: return 1.0;
    case Kind::kNegInvPow: return alpha_ * std::pow(x, -alpha_);
    case Kind::kLog1p: return x / (1.0 + x);
    case Kind::kIdentity: return x;
  }
  return 0.0;
}

bool QoSMap::concave_in_log() const noexcept {
  return kind_ == Kind::kLog || kind_ == Kind::kNegInvPow;
}

std::string QoSMap::name() const {
  switch (kind_) {
    case Kind::kLog: return "log";
    case Kind::kNegInvPow: return fmt::format("neginv:{}", alpha_);
    case Kind::kLog1p: return "log1p";
    case Kind::kIdentity: return "id";
  }
  return {};
}

std::string QoSMap::tag() const {
  std::string out;
  for (char c : name()) {
    if (c == ':') continue;
    out.push_back(c == '.' ? 'p' : c);
  }
  return out;
}

NetworkModel::NetworkModel(std::size_t n, std::vector<double> gains,
                           std::vector<double> sigma2, QoSMap psi)
    : n_(n), gains_(std::move(gains)), sigma2_(std::move(sigma2)), psi_(psi) {
  if (n_ == 0) throw ContractViolation("network needs at least one link");
  if (gains_.size() != n_ * n_ || sigma2_.size() != n_) {
    throw ContractViolation("network gain matrix or noise vector has wrong size");
  }
  for (std::size_t k = 0; k < n_; ++k) {
    for (std::size_t l = 0; l < n_; ++l) {
      const double v = gain(k, l);
      const bool ok = std::isfinite(v) && (k == l ? v > 0.0 : v >= 0.0);
      if (!ok) {
        throw ContractViolation(fmt::format(
            "invalid gain V[{}][{}]={} (diagonal must be > 0, off-diagonal >= 0)",
            k, l, v));
      }
    }
    if (!(sigma2_[k] > 0.0) || !std::isfinite(sigma2_[k])) {
      throw ContractViolation("noise powers must be positive");
    }
  }
}

NetworkModel NetworkModel::with_psi(QoSMap psi) const {
  NetworkModel copy = *this;
  copy.psi_ = psi;
  return copy;
}

double sinr(const NetworkModel& model, std::span<const double> s, std::size_t k) {
  check_agent(model, s, k);
  return model.gain(k, k) * std::exp(s[k]) / interference(model, s, k);
}

std::vector<double> sinr_all(const NetworkModel& model, std::span<const double> s) {
  std::vector<double> out(model.size());
  for (std::size_t k = 0; k < model.size(); ++k) out[k] = sinr(model, s, k);
  return out;
}

double utility(const NetworkModel& model, std::span<const double> s, std::size_t k) {
  return model.psi().value(sinr(model, s, k));
}

std::vector<double> utility_supergradient(const NetworkModel& model,
                                          std::span<const double> s,
                                          std::size_t k) {
  check_agent(model, s, k);
  const double denom = interference(model, s, k);
  const double r = model.gain(k, k) * std::exp(s[k]) / denom;
  const double a = model.psi().log_derivative(r);
  std::vector<double> g(model.size());
  for (std::size_t j = 0; j < model.size(); ++j) {
    g[j] = j == k ? a : -a * model.gain(k, j) * std::exp(s[j]) / denom;
  }
  return g;
}

double gradient_norm_cap(const NetworkModel& model, const feasible::Box& box,
                         std::size_t k) {
  const std::size_t n = model.size();
  if (box.lower.size() != n || box.upper.size() != n) {
    throw ContractViolation("gradient_norm_cap: box dimension mismatch");
  }
  if (k >= n) throw ContractViolation("agent index out of range");

  std::vector<double> lo(n);
  std::vector<double> hi(n);
  for (std::size_t l = 0; l < n; ++l) {
    lo[l] = std::exp(box.lower[l]);
    hi[l] = std::exp(box.upper[l]);
  }
  const double noise = model.sigma2()[k];
  double i_min = noise;
  double i_max = noise;
  for (std::size_t l = 0; l < n; ++l) {
    if (l == k) continue;
    i_min += model.gain(k, l) * lo[l];
    i_max += model.gain(k, l) * hi[l];
  }
  const double r_min = model.gain(k, k) * lo[k] / i_max;
  const double r_max = model.gain(k, k) * hi[k] / i_min;

  // x psi'(x) is monotone on (0, inf) for every supported map.
  const QoSMap& psi = model.psi();
  double a_max = 0.0;
  switch (psi.kind()) {
    case QoSMap::Kind::kLog: a_max = 1.0; break;
    case QoSMap::Kind::kNegInvPow:
      a_max = r_min > 0.0 ? psi.log_derivative(r_min) : kInf;
      break;
    case QoSMap::Kind::kLog1p:
    case QoSMap::Kind::kIdentity:
      a_max = std::isfinite(r_max) ? psi.log_derivative(r_max) : kInf;
      break;
  }

  // Cross terms V_kj e^{s_j} / I_k(s) grow with s_j and shrink with the
  // other interferers, so their maximum sits at (upper_j, lower_rest).
  double sum_sq = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == k) continue;
    const double own = model.gain(k, j) * hi[j];
    if (own == 0.0) continue;
    const double rest = i_min - model.gain(k, j) * lo[j];
    const double ratio = std::isfinite(own) ? own / (own + rest) : 1.0;
    sum_sq += ratio * ratio;
  }
  return a_max * std::sqrt(sum_sq);
}

std::vector<double> gradient_norm_caps(const NetworkModel& model,
                                       const feasible::Box& box) {
  std::vector<double> caps(model.size());
  for (std::size_t k = 0; k < model.size(); ++k) {
    caps[k] = gradient_norm_cap(model, box, k);
  }
  return caps;
}

NetworkModel generate_scenario(std::size_t n, std::uint64_t seed, QoSMap psi) {
  if (n < 1) throw ContractViolation("scenario needs N >= 1");
  std::mt19937_64 engine(seed);
  auto uniform01 = [&engine]() {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
  };
  constexpr double kCrossRate = 10.0;
  std::vector<double> gains(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      const double u = uniform01();
      gains[k * n + l] = k == l ? 1.0 + 2.0 * u : -std::log1p(-u) / kCrossRate;
    }
  }
  return NetworkModel(n, std::move(gains), std::vector<double>(n, 0.2), psi);
}

void UtilityModel::utilities(std::span<const double> theta,
                             std::span<double> out) const {
  const std::size_t n = model_.size();
  if (theta.size() != n || out.size() != n) {
    throw ContractViolation("UtilityModel::utilities: dimension mismatch");
  }
  constexpr std::size_t kInline = 32;
  std::array<double, kInline> small{};
  std::vector<double> large;
  std::span<double> powers;
  if (n <= kInline) {
    powers = std::span<double>(small.data(), n);
  } else {
    large.resize(n);
    powers = large;
  }
  for (std::size_t l = 0; l < n; ++l) powers[l] = std::exp(theta[l]);
  for (std::size_t k = 0; k < n; ++k) {
    double denom = model_.sigma2()[k];
    for (std::size_t l = 0; l < n; ++l) {
      if (l != k) denom += model_.gain(k, l) * powers[l];
    }
    out[k] = model_.psi().value(model_.gain(k, k) * powers[k] / denom);
  }
}

void UtilityModel::supergradient(std::span<const double> theta, std::size_t agent,
                                 std::span<double> out) const {
  if (out.size() != model_.size()) {
    throw ContractViolation("UtilityModel::supergradient: dimension mismatch");
  }
  const std::vector<double> g = utility_supergradient(model_, theta, agent);
  std::copy(g.begin(), g.end(), out.begin());
}

}  // namespace welfare::wireless
