#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdt/config.hpp"
#include "rdt/io.hpp"

namespace rdt::app {

// Invalid configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Tier { kSmoke, kDesk, kDeep };
Tier parse_tier(const std::string& name);
std::string to_string(Tier t);

// One key of a command's parameter block with its default at each tier.
struct Param {
  std::string key;
  std::string smoke, desk, deep;
  std::string help;
  const std::string& at(Tier t) const { return t == Tier::kSmoke ? smoke : t == Tier::kDesk ? desk : deep; }
};

const std::vector<std::string>& command_names();
const std::vector<Param>& command_params(const std::string& command);

struct ExperimentConfig {
  std::string command;
  std::optional<std::uint64_t> seed;
  Tier tier = Tier::kDesk;
  std::filesystem::path out;
  config::KeyValues params;  // the command's section, keys without prefix

  // Top-level keys command, seed, tier, out; one section per command.
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& path);
  // Tier defaults overlaid with the given parameters; throws ConfigError on
  // unknown keys or a missing seed.
  config::KeyValues effective_params() const;
  // Sorted "key = value" lines of the effective configuration (not the output
  // directory).
  std::string echo() const;
  std::string input_hash() const;
};

struct CheckResult {
  std::string id;
  std::string description;
  std::string status;  // pass | fail | skip
  double margin = 0;
  nlohmann::json detail;
  nlohmann::json to_json() const;
};

struct Artifact {
  std::string path;  // relative to the run directory
  std::string sha1;
  std::size_t bytes = 0;
};

struct RunManifest {
  std::string tool_version;
  std::string command, tier;
  std::uint64_t seed = 0;
  std::string config;  // echo of the effective configuration
  std::string input_hash;
  std::vector<CheckResult> checks;
  std::vector<Artifact> artifacts;
  std::string started_at;
  double wall_clock_s = 0;

  bool passed() const;  // no check failed
  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
  // SHA-1 of the manifest without its start time and wall clock.
  std::string digest() const;
};

// Collects the artifacts and checks of one run.
class RunContext {
 public:
  explicit RunContext(std::filesystem::path dir);
  const std::filesystem::path& dir() const { return dir_; }
  void write_text(const std::string& name, const std::string& text);
  void write_csv(const std::string& name, const std::vector<io::Column>& columns);
  void write_json(const std::string& name, const nlohmann::json& j);
  void check(const std::string& id, const std::string& description, bool passed, double margin,
             nlohmann::json detail = nlohmann::json::object());
  void skip(const std::string& id, const std::string& description, const std::string& reason);
  // Free-form lines printed after the check table.
  void note(const std::string& line) { notes_.push_back(line); }

  const std::vector<CheckResult>& checks() const { return checks_; }
  const std::vector<Artifact>& artifacts() const { return artifacts_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  std::filesystem::path dir_;
  std::vector<CheckResult> checks_;
  std::vector<Artifact> artifacts_;
  std::vector<std::string> notes_;
};

// Validates the configuration (ConfigError), runs the command, writes the
// artifacts and finally the manifest into cfg.out.
RunManifest dispatch(const ExperimentConfig& cfg, std::ostream* log = nullptr);

// Entry point of the rdtlab executable; returns the exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace rdt::app
