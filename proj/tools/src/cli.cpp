#include <ostream>

#include "CLI11.hpp"
#include "internal.hpp"

namespace rdt::app {

namespace {

void config_error(std::ostream& err, const std::string& message) {
  err << nlohmann::json{{"error", "config"}, {"message", message}}.dump() << "\n";
}

std::string parameter_help(const CommandSpec& c) {
  std::string s = "parameters (smoke / desk / deep):\n";
  for (const auto& p : c.params)
    s += "  " + p.key + " = " + (p.smoke.empty() ? "\"\"" : p.smoke) + " / " + (p.desk.empty() ? "\"\"" : p.desk) +
         " / " + (p.deep.empty() ? "\"\"" : p.deep) + "    " + p.help + "\n";
  return s;
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"rdtlab: numerical checks for Ricci-DeTurck flow near flat space", "rdtlab"};
  app.set_version_flag("--version", std::string("rdtlab ") + RDTLAB_VERSION);
  app.require_subcommand(0, 1);

  std::string config_path, tier, out_dir;
  std::uint64_t seed = 0;
  std::vector<std::string> sets;
  std::map<std::string, CLI::App*> subs;
  auto add_common = [&](CLI::App* a, const std::string& section) {
    a->add_option("--config", config_path, "INI file with command, seed, tier, out and a [" + section + "] section")
        ->check(CLI::ExistingFile);
    a->add_option("--tier", tier, "smoke, desk or deep (default desk)");
    a->add_option("--out", out_dir, "run directory");
    a->add_option("--seed", seed, "random seed");
  };
  add_common(&app, "<command>");
  for (const auto& c : commands()) {
    auto* sub = app.add_subcommand(c.name, c.summary);
    sub->footer(parameter_help(c));
    add_common(sub, c.name);
    sub->add_option("--set", sets, "key=value parameter override (repeatable)");
    subs[c.name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    config_error(err, e.what());
    return 2;
  }

  std::string command;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) command = name;
  auto given = [&](const char* flag) {
    return app.count(flag) > 0 || (!command.empty() && subs.at(command)->count(flag) > 0);
  };

  ExperimentConfig cfg;
  try {
    if (!config_path.empty()) {
      cfg = ExperimentConfig::load(config_path);
      if (!command.empty() && !cfg.command.empty() && cfg.command != command)
        throw ConfigError("config is for command '" + cfg.command + "', not '" + command + "'");
    }
    if (command.empty()) command = cfg.command;
    if (command.empty()) throw ConfigError("no command given (subcommand or config key 'command')");
    cfg.command = command;
    if (given("--tier")) cfg.tier = parse_tier(tier);
    if (given("--seed")) cfg.seed = seed;
    if (given("--out")) cfg.out = out_dir;
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + kv + "'");
      cfg.params.set(command + "." + kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (cfg.out.empty()) throw ConfigError("an output directory is required (config key 'out' or --out)");
    const RunManifest m = dispatch(cfg, &out);
    return m.passed() ? 0 : 1;
  } catch (const ConfigError& e) {
    config_error(err, e.what());
    return 2;
  } catch (const std::exception& e) {
    err << nlohmann::json{{"error", "runtime"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
}

}  // namespace rdt::app
