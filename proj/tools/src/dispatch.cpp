#include <chrono>
#include <cstdio>
#include <ostream>

#include "internal.hpp"
#include "rdt/common.hpp"
#include "rdt/io.hpp"

namespace rdt::app {

RunManifest dispatch(const ExperimentConfig& cfg, std::ostream* log) {
  const CommandSpec& spec = find_command(cfg.command);
  if (cfg.out.empty()) throw ConfigError("no output directory given");
  const config::KeyValues params = cfg.effective_params();
  Runner run;
  try {
    run = spec.plan(params, *cfg.seed);
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }

  RunManifest m;
  m.tool_version = RDTLAB_VERSION;
  m.command = cfg.command;
  m.tier = to_string(cfg.tier);
  m.seed = *cfg.seed;
  m.config = cfg.echo();
  m.input_hash = cfg.input_hash();
  m.started_at = utc_now();

  RunContext ctx(cfg.out);
  ctx.write_text("config.ini", m.config);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    run(ctx);
  } catch (const std::exception& e) {
    ctx.check(cfg.command + ".runtime", "command ran to completion", false, 0, {{"error", e.what()}});
  }
  m.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.checks = ctx.checks();
  m.artifacts = ctx.artifacts();
  io::write_json(cfg.out / "manifest.json", m.to_json());

  if (log) {
    *log << "rdtlab " << m.command << "  tier " << m.tier << "  seed " << m.seed << "\n";
    for (const auto& c : m.checks) {
      char line[256];
      std::snprintf(line, sizeof line, "  %-4s  %-40s  margin %11.4e", c.status.c_str(), c.id.c_str(), c.margin);
      *log << line << "\n";
    }
    for (const auto& n : ctx.notes()) *log << "  " << n << "\n";
    char tail[128];
    std::snprintf(tail, sizeof tail, "verdict %s  (%.2f s)", m.passed() ? "pass" : "fail", m.wall_clock_s);
    *log << tail << "  ->  " << (cfg.out / "manifest.json").string() << "\n";
  }
  return m;
}

}  // namespace rdt::app
