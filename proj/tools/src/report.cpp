#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "internal.hpp"
#include "rdt/barriers/barriers.hpp"
#include "rdt/hash.hpp"

namespace rdt::app {

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct RunEntry {
  fs::path dir;
  RunManifest manifest;
  std::vector<std::string> stale;  // reasons
  std::vector<std::string> orphans;
};

// Reasons a stored run no longer matches what the current tool would produce.
std::vector<std::string> staleness(const fs::path& dir, const RunManifest& m) {
  std::vector<std::string> why;
  try {
    const auto cfg = ExperimentConfig::parse(m.config);
    if (cfg.input_hash() != m.input_hash) why.push_back("input hash differs from the current configuration");
  } catch (const std::exception& e) {
    why.push_back(std::string("configuration no longer valid: ") + e.what());
  }
  for (const auto& a : m.artifacts) {
    const fs::path p = dir / a.path;
    if (!fs::exists(p))
      why.push_back("missing artifact " + a.path);
    else if (sha1_hex(slurp(p)) != a.sha1)
      why.push_back("modified artifact " + a.path);
  }
  return why;
}

std::vector<RunEntry> scan(const fs::path& root) {
  std::vector<RunEntry> runs;
  if (!fs::exists(root)) return runs;
  for (const auto& e : fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied)) {
    if (!e.is_regular_file() || e.path().filename() != "manifest.json") continue;
    RunEntry r;
    r.dir = e.path().parent_path();
    try {
      r.manifest = RunManifest::from_json(nlohmann::json::parse(slurp(e.path())));
    } catch (const std::exception& ex) {
      r.manifest.command = "?";
      r.stale.push_back(std::string("unreadable manifest: ") + ex.what());
      runs.push_back(std::move(r));
      continue;
    }
    if (r.manifest.command == "report") continue;
    auto why = staleness(r.dir, r.manifest);
    r.stale.insert(r.stale.end(), why.begin(), why.end());
    std::set<std::string> known{"manifest.json"};
    for (const auto& a : r.manifest.artifacts) known.insert(a.path);
    for (const auto& f : fs::directory_iterator(r.dir))
      if (f.is_regular_file() && !known.count(f.path().filename().string()))
        r.orphans.push_back(f.path().filename().string());
    std::sort(r.orphans.begin(), r.orphans.end());
    runs.push_back(std::move(r));
  }
  std::sort(runs.begin(), runs.end(), [](const RunEntry& a, const RunEntry& b) { return a.dir < b.dir; });
  return runs;
}

Runner plan_report(const config::KeyValues& kv, std::uint64_t) {
  const fs::path root = kv.text("root", ".");
  const auto expect = text_list(kv, "expect");
  const bool reverify = integer(kv, "reverify") != 0;
  for (const auto& c : expect)
    if (c == "report" || std::find(command_names().begin(), command_names().end(), c) == command_names().end())
      throw ConfigError("report.expect names an unknown command: " + c);

  return [=](RunContext& ctx) {
    const auto runs = scan(root);

    struct Row {
      CheckResult check;
      std::string command, run, started_at;
      bool stale = false;
    };
    std::map<std::string, Row> latest;
    std::set<std::string> seen;
    nlohmann::json jruns = nlohmann::json::array();
    int stale_runs = 0, orphan_files = 0;
    for (const auto& r : runs) {
      const std::string rel = fs::relative(r.dir, root).generic_string();
      seen.insert(r.manifest.command);
      stale_runs += !r.stale.empty();
      orphan_files += static_cast<int>(r.orphans.size());
      jruns.push_back({{"run", rel},
                       {"command", r.manifest.command},
                       {"started_at", r.manifest.started_at},
                       {"digest", r.manifest.digest()},
                       {"stale", r.stale},
                       {"orphans", r.orphans}});
      for (const auto& c : r.manifest.checks) {
        auto it = latest.find(c.id);
        if (it == latest.end() || it->second.started_at < r.manifest.started_at)
          latest[c.id] = {c, r.manifest.command, rel, r.manifest.started_at, !r.stale.empty()};
      }
    }
    std::vector<std::string> missing;
    for (const auto& c : expect)
      if (!seen.count(c)) missing.push_back(c);

    int failing = 0;
    nlohmann::json jrows = nlohmann::json::array();
    std::ostringstream txt;
    txt << "check                                     status  margin       stale  run\n";
    for (const auto& [id, row] : latest) {
      failing += row.check.status == "fail";
      jrows.push_back({{"id", id},
                       {"status", row.check.status},
                       {"margin", row.check.margin},
                       {"command", row.command},
                       {"run", row.run},
                       {"started_at", row.started_at},
                       {"stale", row.stale}});
      char line[512];
      std::snprintf(line, sizeof line, "%-41s %-7s %11.4e  %-5s  %s\n", id.c_str(), row.check.status.c_str(),
                    row.check.margin, row.stale ? "yes" : "no", row.run.c_str());
      txt << line;
    }
    for (const auto& r : runs) {
      for (const auto& why : r.stale) txt << "stale " << r.dir.generic_string() << ": " << why << "\n";
      for (const auto& f : r.orphans) txt << "orphan " << (r.dir / f).generic_string() << "\n";
    }
    for (const auto& c : missing) txt << "missing command " << c << "\n";

    nlohmann::json jrecords = nlohmann::json::array();
    int record_failures = 0, unsupported = 0;
    if (reverify) {
      for (const auto& r : runs)
        for (const auto& a : r.manifest.artifacts) {
          if (a.path.size() < 12 || a.path.compare(a.path.size() - 12, 12, ".record.json") != 0) continue;
          std::string status;
          try {
            const auto rec = CalibrationRecord::from_json(nlohmann::json::parse(slurp(r.dir / a.path)));
            static const std::set<std::string> barrier_ids{"chi.bounds", "F.sandwich", "G.dr_bound",
                                                           "F.supersolution", "G.supersolution"};
            if (barrier_ids.count(rec.bound_id))
              status = barriers::reverify(rec) ? "reproduced" : "differs";
            else
              status = "unsupported";
          } catch (const std::exception&) {
            status = "unreadable";
          }
          record_failures += status == "differs" || status == "unreadable";
          unsupported += status == "unsupported";
          jrecords.push_back({{"path", (r.dir / a.path).generic_string()}, {"status", status}});
          txt << "record " << (r.dir / a.path).generic_string() << ": " << status << "\n";
        }
    }

    ctx.write_json("report.json", {{"root", root.generic_string()},
                                   {"runs", jruns},
                                   {"checks", jrows},
                                   {"missing", missing},
                                   {"records", jrecords}});
    ctx.write_text("report.txt", txt.str());
    std::istringstream lines(txt.str());
    for (std::string line; std::getline(lines, line);) ctx.note(line);

    ctx.check("report.latest_checks_pass", "no failing check among the latest results", failing == 0, -failing,
              {{"checks", latest.size()}, {"failing", failing}});
    ctx.check("report.fresh", "stored runs match the current configuration and artifacts", stale_runs == 0,
              -stale_runs, {{"runs", runs.size()}, {"stale", stale_runs}, {"orphan_files", orphan_files}});
    ctx.check("report.complete", "every expected command has a run", missing.empty(),
              missing.empty() ? 0.0 : -static_cast<double>(missing.size()), {{"missing", missing}});
    if (reverify)
      ctx.check("report.records_reproducible", "calibration records reproduce bitwise", record_failures == 0,
                -record_failures, {{"records", jrecords.size()}, {"unsupported", unsupported}});
    else
      ctx.skip("report.records_reproducible", "calibration records reproduce bitwise", "reverify = 0");
  };
}

}  // namespace

CommandSpec report_command() {
  return {"report",
          "collect manifests under a directory into one table",
          {{"root", ".", ".", ".", "directory scanned for manifest.json"},
           {"expect", "", "", "", "comma-separated commands that must have a run"},
           {"reverify", "0", "0", "1", "recompute calibration records (0 or 1)"}},
          plan_report};
}

}  // namespace rdt::app
