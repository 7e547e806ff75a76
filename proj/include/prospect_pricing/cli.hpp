#pragma once

// Scenario configuration files and the command-line front end.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "prospect_pricing/experiments.hpp"

namespace pricing::cli {

using Config = experiments::ScenarioSpec;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// JSON object with any subset of the Config keys. Empty text means all
/// defaults. Unknown keys, wrong types and invalid values throw ConfigError
/// naming the key.
Config parse_config_text(const std::string& text);

/// `path` may be the literal "default".
Config parse_config(const std::string& path);

std::string serialize_config(const Config& config);

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitInfeasible = 3,
  kExitUsage = 64,
};

/// args[0] is the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pricing::cli
