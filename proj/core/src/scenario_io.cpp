#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "welfare/errors.hpp"
#include "welfare/wireless.hpp"

namespace welfare::wireless {

using nlohmann::json;

std::string write_scenario(const Scenario& scenario) {
  const NetworkModel& m = scenario.model;
  json doc;
  doc["n"] = m.size();
  doc["seed"] = scenario.seed;
  doc["psi"] = m.psi().name();
  doc["gains"] = std::vector<double>(m.gains().begin(), m.gains().end());
  doc["sigma2"] = std::vector<double>(m.sigma2().begin(), m.sigma2().end());
  return doc.dump(2) + "\n";
}

Scenario read_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
    const auto n = doc.at("n").get<std::size_t>();
    const auto seed = doc.at("seed").get<std::uint64_t>();
    const QoSMap psi = QoSMap::parse(doc.at("psi").get<std::string>());
    auto gains = doc.at("gains").get<std::vector<double>>();
    auto sigma2 = doc.at("sigma2").get<std::vector<double>>();
    return Scenario{seed, NetworkModel(n, std::move(gains), std::move(sigma2), psi)};
  } catch (const json::exception& e) {
    throw ContractViolation(std::string("malformed scenario document: ") + e.what());
  }
}

void save_scenario(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << write_scenario(scenario);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_scenario(buf.str());
}

}  // namespace welfare::wireless
