#include "welfare/experiment.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <thread>

#include "welfare/errors.hpp"

namespace welfare::experiment {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
}

struct SinrStats {
  double min = 0.0;
  double avg = 0.0;
  double max = 0.0;
};

SinrStats stats(const std::vector<double>& sinrs) {
  SinrStats s;
  s.min = *std::min_element(sinrs.begin(), sinrs.end());
  s.max = *std::max_element(sinrs.begin(), sinrs.end());
  double acc = 0.0;
  for (double v : sinrs) acc += v;
  s.avg = acc / static_cast<double>(sinrs.size());
  return s;
}

std::string trace_csv(const SolverRun& run, const wireless::NetworkModel& model) {
  std::string out = "t,gamma_t,welfare,min_sinr,avg_sinr,max_sinr,grad_norm\n";
  for (const auto& rec : run.trace) {
    const SinrStats s = stats(wireless::sinr_all(model, rec.theta));
    out += fmt::format("{},{},{},{},{},{},{}\n", rec.t, num(rec.gamma),
                       num(rec.welfare), num(s.min), num(s.avg), num(s.max),
                       num(rec.grad_norm));
  }
  return out;
}

std::string trace_name(std::size_t k, const wireless::QoSMap& psi) {
  return fmt::format("trace_K{}_{}.csv", k, psi.tag());
}

}  // namespace

StepSchedule StepSpec::resolve(std::size_t horizon) const {
  switch (kind) {
    case Kind::kOverSqrtHorizon: return StepSchedule::fixed_for_horizon(value, horizon);
    case Kind::kFixed: return StepSchedule::fixed(value);
    case Kind::kInverseSqrt: return StepSchedule::inverse_sqrt(value);
  }
  throw ContractViolation("unknown step kind");
}

std::string StepSpec::describe() const {
  switch (kind) {
    case Kind::kOverSqrtHorizon: return fmt::format("{}/sqrt(T)", value);
    case Kind::kFixed: return fmt::format("{}", value);
    case Kind::kInverseSqrt: return fmt::format("{}/sqrt(t+1)", value);
  }
  return {};
}

void ExperimentConfig::validate() const {
  if (n < 1) throw ContractViolation("n must be >= 1");
  if (horizon < 1) throw ContractViolation("T must be >= 1");
  if (!(step.value > 0.0) || !std::isfinite(step.value)) {
    throw ContractViolation("step constant must be positive");
  }
  if (k_list.empty()) throw ContractViolation("k list must be nonempty");
  for (std::size_t k : k_list) {
    if (k < 1 || k > n) {
      throw ContractViolation(fmt::format("K={} outside [1, {}]", k, n));
    }
  }
  if (std::set<std::size_t>(k_list.begin(), k_list.end()).size() != k_list.size()) {
    throw ContractViolation("k list has duplicates");
  }
  if (psi_list.empty()) throw ContractViolation("psi list must be nonempty");
  std::set<std::string> tags;
  for (const auto& p : psi_list) tags.insert(p.tag());
  if (tags.size() != psi_list.size()) throw ContractViolation("psi list has duplicates");
  if (!(power_min > 0.0) || !(power_min < power_max) || !std::isfinite(power_max)) {
    throw ContractViolation("power bounds must satisfy 0 < power_min < power_max");
  }
  if (metrics_k < 1 || metrics_k > n) {
    throw ContractViolation(fmt::format("metrics_k={} outside [1, {}]", metrics_k, n));
  }
}

FeasibleSet ExperimentConfig::log_power_box() const {
  return FeasibleSet::box(std::vector<double>(n, std::log(power_min)),
                          std::vector<double>(n, std::log(power_max)));
}

ExperimentConfig parse_config(std::string_view json_text) {
  ExperimentConfig cfg;
  try {
    const json doc = json::parse(json_text);
    if (!doc.is_object()) throw ContractViolation("config must be a JSON object");
    static const std::set<std::string> known{
        "n", "seed", "T", "step", "step_c", "k", "psi",
        "power_min", "power_max", "metrics_k", "out"};
    for (const auto& [key, _] : doc.items()) {
      if (!known.count(key)) throw ContractViolation("unknown config key '" + key + "'");
    }
    if (doc.contains("n")) cfg.n = doc["n"].get<std::size_t>();
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("T")) cfg.horizon = doc["T"].get<std::size_t>();
    if (doc.contains("step_c")) {
      cfg.step = StepSpec{StepSpec::Kind::kOverSqrtHorizon, doc["step_c"].get<double>()};
    }
    if (doc.contains("step")) {
      const auto& s = doc["step"];
      const auto type = s.at("type").get<std::string>();
      const double value = s.at("value").get<double>();
      if (type == "over_sqrt_T") {
        cfg.step = StepSpec{StepSpec::Kind::kOverSqrtHorizon, value};
      } else if (type == "fixed") {
        cfg.step = StepSpec{StepSpec::Kind::kFixed, value};
      } else if (type == "inverse_sqrt") {
        cfg.step = StepSpec{StepSpec::Kind::kInverseSqrt, value};
      } else {
        throw ContractViolation("unknown step type '" + type + "'");
      }
    }
    if (doc.contains("k")) cfg.k_list = doc["k"].get<std::vector<std::size_t>>();
    if (doc.contains("psi")) {
      cfg.psi_list.clear();
      for (const auto& p : doc["psi"]) {
        cfg.psi_list.push_back(wireless::QoSMap::parse(p.get<std::string>()));
      }
    }
    if (doc.contains("power_min")) cfg.power_min = doc["power_min"].get<double>();
    if (doc.contains("power_max")) cfg.power_max = doc["power_max"].get<double>();
    if (doc.contains("metrics_k")) cfg.metrics_k = doc["metrics_k"].get<std::size_t>();
    if (doc.contains("out")) cfg.output_dir = doc["out"].get<std::string>();
  } catch (const json::exception& e) {
    throw ContractViolation(std::string("malformed config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContractViolation("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::vector<RunSummary> run_experiment(const ExperimentConfig& config) {
  config.validate();
  const FeasibleSet box = config.log_power_box();
  const wireless::NetworkModel base = wireless::generate_scenario(config.n, config.seed);
  const StepSchedule schedule = config.step.resolve(config.horizon);
  const Allocation start(std::vector<double>(config.n, 0.0));
  const WelfareMeasure metric_measure = WelfareMeasure::low_k(config.metrics_k);

  const bool write = !config.output_dir.empty();
  if (write) {
    fs::create_directories(config.output_dir);
    wireless::save_scenario(wireless::Scenario{config.seed, base},
                            (config.output_dir / "scenario.json").string());
  }

  struct Task {
    std::size_t k;
    wireless::QoSMap psi;
  };
  std::vector<Task> tasks;
  std::vector<std::size_t> ks = config.k_list;
  std::sort(ks.begin(), ks.end());
  for (std::size_t k : ks) {
    for (const auto& psi : config.psi_list) tasks.push_back(Task{k, psi});
  }

  std::vector<RunSummary> summaries(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) return;
      const Task& task = tasks[idx];
      try {
        const auto started = std::chrono::steady_clock::now();
        const wireless::UtilityModel oracle(base.with_psi(task.psi));
        const SolverRun run =
            smwm_klow(task.k, oracle, box, start, config.horizon, schedule);

        const auto& model = oracle.model();
        const std::vector<double> sinrs = wireless::sinr_all(model, run.best.values());
        std::vector<double> utils(config.n);
        oracle.utilities(run.best.values(), utils);
        std::vector<double> ergodic_utils(config.n);
        oracle.utilities(run.ergodic.values(), ergodic_utils);
        const SinrStats s = stats(sinrs);

        RunSummary& out = summaries[idx];
        out.k = task.k;
        out.psi = task.psi;
        out.welfare = run.best_value;
        out.ergodic_welfare = evaluate(WelfareMeasure::low_k(task.k), ergodic_utils);
        out.avg_sinr = s.avg;
        out.min_sinr = s.min;
        out.max_sinr = s.max;
        out.lowk_sinr = evaluate(metric_measure, sinrs);
        out.lowk_utility = evaluate(metric_measure, utils);
        out.best_iteration = run.best_iteration;
        out.iterations = run.trace.size();
        out.heuristic = run.heuristic;

        if (write) {
          write_file(config.output_dir / trace_name(task.k, task.psi),
                     trace_csv(run, model));
        }
        out.wall_seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - started)
                               .count();
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (!error) {
          error = std::make_exception_ptr(std::runtime_error(fmt::format(
              "run K={} psi={} failed: {}", task.k, task.psi.name(), e.what())));
        }
      }
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(
      std::thread::hardware_concurrency(), 1, tasks.size());
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  if (write) {
    write_file(config.output_dir / "summary.csv",
               format_summary(summaries, config.metrics_k));
    emit_plot_data(summaries, config.metrics_k, config.output_dir);
  }
  return summaries;
}

std::string format_summary(const std::vector<RunSummary>& summaries,
                           std::size_t metrics_k) {
  std::string out = fmt::format(
      "K,psi,welfare,ergodic_welfare,avg_sinr,min_sinr,max_sinr,low{0}_sinr,"
      "low{0}_utility,best_iteration,iterations,heuristic\n",
      metrics_k);
  for (const auto& s : summaries) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", s.k, s.psi.name(),
                       num(s.welfare), num(s.ergodic_welfare), num(s.avg_sinr),
                       num(s.min_sinr), num(s.max_sinr), num(s.lowk_sinr),
                       num(s.lowk_utility), s.best_iteration, s.iterations,
                       s.heuristic ? 1 : 0);
  }
  return out;
}

std::vector<fs::path> emit_plot_data(const std::vector<RunSummary>& summaries,
                                     std::size_t metrics_k, const fs::path& dir) {
  if (summaries.empty()) throw ContractViolation("emit_plot_data: no summaries");
  fs::create_directories(dir);

  std::vector<wireless::QoSMap> psis;
  for (const auto& s : summaries) {
    if (std::find(psis.begin(), psis.end(), s.psi) == psis.end()) psis.push_back(s.psi);
  }

  struct Metric {
    std::string name;
    double RunSummary::*field;
  };
  const std::vector<Metric> metrics{
      {"avg_sinr", &RunSummary::avg_sinr},
      {"min_sinr", &RunSummary::min_sinr},
      {"max_sinr", &RunSummary::max_sinr},
      {fmt::format("low{}_sinr", metrics_k), &RunSummary::lowk_sinr},
  };

  std::vector<fs::path> written;
  for (const auto& metric : metrics) {
    for (const auto& psi : psis) {
      std::vector<const RunSummary*> rows;
      for (const auto& s : summaries) {
        if (s.psi == psi) rows.push_back(&s);
      }
      std::sort(rows.begin(), rows.end(),
                [](const RunSummary* a, const RunSummary* b) { return a->k < b->k; });
      std::string body = "K,value\n";
      for (const RunSummary* r : rows) {
        body += fmt::format("{},{}\n", r->k, num(r->*(metric.field)));
      }
      const fs::path path = dir / fmt::format("series_{}_{}.csv", metric.name, psi.tag());
      write_file(path, body);
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace welfare::experiment
