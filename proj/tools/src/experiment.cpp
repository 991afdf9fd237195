#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include "rdt/common.hpp"
#include "rdt/hash.hpp"
#include "internal.hpp"
#include "rdtlab/app.hpp"

namespace rdt::app {

namespace {

const std::vector<std::string> kTopLevel{"command", "seed", "tier", "out"};

template <class F>
auto as_config_error(F&& f) {
  try {
    return f();
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

Tier parse_tier(const std::string& name) {
  if (name == "smoke") return Tier::kSmoke;
  if (name == "desk") return Tier::kDesk;
  if (name == "deep") return Tier::kDeep;
  throw ConfigError("unknown tier '" + name + "' (expected smoke, desk or deep)");
}

std::string to_string(Tier t) {
  switch (t) {
    case Tier::kSmoke:
      return "smoke";
    case Tier::kDesk:
      return "desk";
    case Tier::kDeep:
      return "deep";
  }
  return "?";
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  const auto kv = as_config_error([&] { return config::KeyValues::parse(text); });
  const auto& names = command_names();
  for (const auto& key : kv.keys()) {
    const auto dot = key.find('.');
    if (dot == std::string::npos) {
      if (std::find(kTopLevel.begin(), kTopLevel.end(), key) == kTopLevel.end())
        throw ConfigError("unknown top-level key '" + key + "'");
    } else if (std::find(names.begin(), names.end(), key.substr(0, dot)) == names.end()) {
      throw ConfigError("unknown section '" + key.substr(0, dot) + "'");
    }
  }
  ExperimentConfig c;
  c.command = kv.text("command", "");
  if (kv.has("seed")) {
    const long long s = as_config_error([&] { return kv.integer("seed", 0); });
    if (s < 0) throw ConfigError("seed must be non-negative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  c.tier = parse_tier(kv.text("tier", "desk"));
  c.out = kv.text("out", "");
  for (const auto& name : names) {
    const auto sec = kv.section(name);
    for (const auto& key : sec.keys()) c.params.set(name + "." + key, sec.text(key, ""));
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

config::KeyValues ExperimentConfig::effective_params() const {
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), command) == names.end())
    throw ConfigError("unknown command '" + command + "'");
  if (!seed) throw ConfigError("a seed is required (config key 'seed' or --seed)");
  const auto& schema = command_params(command);
  const auto given = params.section(command);
  config::KeyValues out;
  for (const auto& p : schema) out.set(p.key, p.at(tier));
  for (const auto& key : given.keys()) {
    const bool known = std::any_of(schema.begin(), schema.end(), [&](const Param& p) { return p.key == key; });
    if (!known) throw ConfigError("unknown key '" + key + "' for command " + command);
    out.set(key, given.text(key, ""));
  }
  return out;
}

std::string ExperimentConfig::echo() const {
  const auto kv = effective_params();
  std::ostringstream s;
  s << "command = " << command << "\ntier = " << to_string(tier) << "\nseed = " << *seed << "\n[" << command << "]\n";
  for (const auto& key : kv.keys()) s << key << " = " << kv.text(key, "") << "\n";
  return s.str();
}

std::string ExperimentConfig::input_hash() const { return sha1_hex(std::string("rdtlab ") + RDTLAB_VERSION + "\n" + echo()); }

nlohmann::json CheckResult::to_json() const {
  return {{"id", id}, {"description", description}, {"status", status}, {"margin", margin}, {"detail", detail}};
}

bool RunManifest::passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == "fail"; });
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json cs = nlohmann::json::array(), as = nlohmann::json::array();
  for (const auto& c : checks) cs.push_back(c.to_json());
  for (const auto& a : artifacts) as.push_back({{"path", a.path}, {"sha1", a.sha1}, {"bytes", a.bytes}});
  return {{"tool", "rdtlab"},
          {"version", tool_version},
          {"command", command},
          {"tier", tier},
          {"seed", seed},
          {"config", config},
          {"input_hash", input_hash},
          {"verdict", passed() ? "pass" : "fail"},
          {"checks", cs},
          {"artifacts", as},
          {"started_at", started_at},
          {"wall_clock_s", wall_clock_s}};
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  RunManifest m;
  m.tool_version = j.at("version");
  m.command = j.at("command");
  m.tier = j.at("tier");
  m.seed = j.at("seed");
  m.config = j.at("config");
  m.input_hash = j.at("input_hash");
  for (const auto& c : j.at("checks"))
    m.checks.push_back({c.at("id"), c.at("description"), c.at("status"), c.at("margin"), c.value("detail", nlohmann::json::object())});
  for (const auto& a : j.at("artifacts")) m.artifacts.push_back({a.at("path"), a.at("sha1"), a.at("bytes")});
  m.started_at = j.value("started_at", "");
  m.wall_clock_s = j.value("wall_clock_s", 0.0);
  return m;
}

std::string RunManifest::digest() const {
  auto j = to_json();
  j.erase("started_at");
  j.erase("wall_clock_s");
  return sha1_hex(j.dump());
}

RunContext::RunContext(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

void RunContext::write_text(const std::string& name, const std::string& text) {
  io::write_text_atomic(dir_ / name, text);
  artifacts_.push_back({name, sha1_hex(text), text.size()});
}

void RunContext::write_csv(const std::string& name, const std::vector<io::Column>& columns) {
  write_text(name, io::to_csv(columns));
}

void RunContext::write_json(const std::string& name, const nlohmann::json& j) { write_text(name, j.dump(2) + "\n"); }

void RunContext::check(const std::string& id, const std::string& description, bool passed, double margin,
                       nlohmann::json detail) {
  checks_.push_back({id, description, passed ? "pass" : "fail", std::isfinite(margin) ? margin : 0.0, std::move(detail)});
}

void RunContext::skip(const std::string& id, const std::string& description, const std::string& reason) {
  checks_.push_back({id, description, "skip", 0.0, {{"reason", reason}}});
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[40];
  const std::size_t k = std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  std::snprintf(buf + k, sizeof buf - k, ".%03dZ", static_cast<int>(ms));
  return buf;
}

}  // namespace rdt::app
