// Power-control sweep driver.
//
//   welfare_cli --config sweep.json --seed 7 --out results/
//
// Every flag overrides the matching key of the config file; without a config
// file the defaults reproduce the N=10, T=2000 sweep over K = 1..10 and the
// four QoS maps.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "welfare/errors.hpp"
#include "welfare/experiment.hpp"

namespace {

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace welfare;

  CLI::App app{"Low-K welfare power-control sweep"};
  std::string config_path;
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> horizon;
  std::optional<double> step_c;
  std::optional<std::string> k_list;
  std::optional<std::string> psi_list;
  std::optional<std::size_t> metrics_k;
  std::optional<std::string> out_dir;
  bool quiet = false;

  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--n", n, "number of links");
  app.add_option("--seed", seed, "scenario seed");
  app.add_option("--T", horizon, "iterations per run");
  app.add_option("--step-c", step_c, "fixed step gamma = c / sqrt(T)");
  app.add_option("--k", k_list, "comma-separated K values, e.g. 1,2,5");
  app.add_option("--psi", psi_list, "comma-separated QoS maps: log|neginv:<alpha>|log1p|id");
  app.add_option("--metrics-k", metrics_k, "K of the low-K SINR metric");
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("-q,--quiet", quiet, "do not print the summary table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help exits 0; every other parse error is a usage error.
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    experiment::ExperimentConfig cfg =
        config_path.empty() ? experiment::ExperimentConfig{}
                            : experiment::load_config(config_path);
    if (n) cfg.n = *n;
    if (seed) cfg.seed = *seed;
    if (horizon) cfg.horizon = *horizon;
    if (step_c) cfg.step = {experiment::StepSpec::Kind::kOverSqrtHorizon, *step_c};
    if (k_list) {
      cfg.k_list.clear();
      for (const auto& tok : split(*k_list)) {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
          v = std::stoul(tok, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != tok.size()) throw ContractViolation("bad K value '" + tok + "'");
        cfg.k_list.push_back(v);
      }
    }
    if (psi_list) {
      cfg.psi_list.clear();
      for (const auto& tok : split(*psi_list)) {
        cfg.psi_list.push_back(wireless::QoSMap::parse(tok));
      }
    }
    if (metrics_k) cfg.metrics_k = *metrics_k;
    if (out_dir) cfg.output_dir = *out_dir;
    // Without an explicit --k, a smaller N keeps only the admissible K values.
    if (!k_list && n) {
      std::erase_if(cfg.k_list, [&](std::size_t k) { return k > cfg.n; });
    }
    if (!metrics_k && cfg.metrics_k > cfg.n) cfg.metrics_k = cfg.n;
    cfg.validate();

    const auto summaries = experiment::run_experiment(cfg);

    if (!quiet) {
      std::cout << fmt::format("N={} seed={} T={} step={}\n", cfg.n, cfg.seed,
                               cfg.horizon, cfg.step.describe());
      std::cout << fmt::format("{:>3} {:>10} {:>12} {:>12} {:>12} {:>12} {:>12} {:>9}\n",
                               "K", "psi", "welfare", "min_sinr", "avg_sinr",
                               "max_sinr", fmt::format("low{}_sinr", cfg.metrics_k),
                               "seconds");
      for (const auto& s : summaries) {
        std::cout << fmt::format(
            "{:>3} {:>10} {:>12.6g} {:>12.6g} {:>12.6g} {:>12.6g} {:>12.6g} {:>9.3f}{}\n",
            s.k, s.psi.name(), s.welfare, s.min_sinr, s.avg_sinr, s.max_sinr,
            s.lowk_sinr, s.wall_seconds, s.heuristic ? "  (heuristic)" : "");
      }
      if (!cfg.output_dir.empty()) {
        std::cout << "wrote results to " << cfg.output_dir.string() << "\n";
      }
    }
  } catch (const ContractViolation& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
