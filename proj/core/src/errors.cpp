#include "welfare/errors.hpp"

namespace welfare {

ContractViolation::ContractViolation(const std::string& what)
    : std::invalid_argument(what) {}

InfeasibleSet::InfeasibleSet(const std::string& what)
    : std::runtime_error(what) {}

UnsupportedConfiguration::UnsupportedConfiguration(const std::string& what)
    : std::runtime_error(what) {}

OracleFailure::OracleFailure(const std::string& what, std::size_t iteration)
    : std::runtime_error(what), iteration_(iteration) {}

}  // namespace welfare
