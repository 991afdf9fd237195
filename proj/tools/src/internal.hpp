#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rdtlab/app.hpp"

namespace rdt::app {

// Validates the parameters (throwing ConfigError) and returns the run.
using Runner = std::function<void(RunContext&)>;
using Planner = std::function<Runner(const config::KeyValues& params, std::uint64_t seed)>;

struct CommandSpec {
  std::string name;
  std::string summary;
  std::vector<Param> params;
  Planner plan;
};
const std::vector<CommandSpec>& commands();
const CommandSpec& find_command(const std::string& name);

std::string utc_now();
CommandSpec report_command();

// Typed access that reports bad values as ConfigError.
double number(const config::KeyValues& kv, const std::string& key);
long long integer(const config::KeyValues& kv, const std::string& key);
std::vector<double> number_list(const config::KeyValues& kv, const std::string& key);
std::vector<std::string> text_list(const config::KeyValues& kv, const std::string& key);

}  // namespace rdt::app
