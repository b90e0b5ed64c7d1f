#pragma once

// Power-control sweep: one random network, one solver run per (K, psi)
// pair, SINR statistics at each run's best iterate, and CSV output.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "welfare/solver.hpp"
#include "welfare/wireless.hpp"

namespace welfare::experiment {

/// How the step size is derived from the configuration.
struct StepSpec {
  enum class Kind {
    kOverSqrtHorizon,  // gamma_t = value / sqrt(T) for every t
    kFixed,            // gamma_t = value
    kInverseSqrt,      // gamma_t = value / sqrt(t + 1)
  };
  Kind kind = Kind::kOverSqrtHorizon;
  double value = 5.0;

  StepSchedule resolve(std::size_t horizon) const;
  std::string describe() const;
};

struct ExperimentConfig {
  std::size_t n = 10;
  std::uint64_t seed = 1;
  std::size_t horizon = 2000;
  StepSpec step;
  std::vector<std::size_t> k_list{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<wireless::QoSMap> psi_list{
      wireless::QoSMap::log(), wireless::QoSMap::neg_inv_pow(2.0),
      wireless::QoSMap::log1p(), wireless::QoSMap::identity()};
  /// Transmit power bounds in linear units.
  double power_min = 0.05;
  double power_max = 1.0;
  std::size_t metrics_k = 5;
  /// Empty means no files are written.
  std::filesystem::path output_dir;

  /// Throws ContractViolation describing the first invalid field.
  void validate() const;

  /// The log-power box [log power_min, log power_max]^N. This is the only
  /// place where linear power is converted to log power.
  FeasibleSet log_power_box() const;
};

/// Parses the JSON config schema (see README). Missing keys keep defaults.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct RunSummary {
  std::size_t k = 0;
  wireless::QoSMap psi = wireless::QoSMap::log();
  double welfare = 0.0;          // low-K welfare at the best iterate
  double ergodic_welfare = 0.0;  // low-K welfare at the ergodic average
  double avg_sinr = 0.0;
  double min_sinr = 0.0;
  double max_sinr = 0.0;
  double lowk_sinr = 0.0;     // mean of the metrics_k smallest SINRs
  double lowk_utility = 0.0;  // mean of the metrics_k smallest utilities
  std::size_t best_iteration = 0;
  std::size_t iterations = 0;
  bool heuristic = false;
  double wall_seconds = 0.0;
};

/// Runs the sweep. Summaries are ordered by K, then by position in psi_list.
/// When output_dir is set, writes scenario.json, trace_K{K}_{psi}.csv,
/// summary.csv and the series files.
std::vector<RunSummary> run_experiment(const ExperimentConfig& config);

/// Writes series_{metric}_{psi}.csv for metric in avg_sinr, min_sinr,
/// max_sinr and low{metrics_k}_sinr. Returns the written paths.
std::vector<std::filesystem::path> emit_plot_data(
    const std::vector<RunSummary>& summaries, std::size_t metrics_k,
    const std::filesystem::path& dir);

/// CSV body of summary.csv.
std::string format_summary(const std::vector<RunSummary>& summaries,
                           std::size_t metrics_k);

}  // namespace welfare::experiment
