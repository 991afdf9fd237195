#include "rdt/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <sstream>

#include "rdt/common.hpp"

namespace rdt::config {

namespace pt = boost::property_tree;

KeyValues KeyValues::parse(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw PreconditionError(std::string("malformed config: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  KeyValues kv;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      kv.kv_[name] = node.data();
      continue;
    }
    for (const auto& [key, leaf] : node) kv.kv_[name + "." + key] = leaf.data();
  }
  return kv;
}

KeyValues KeyValues::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string KeyValues::text(const std::string& key, const std::string& fallback) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double KeyValues::number(const std::string& key, double fallback) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  const std::string& s = it->second;
  double v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  require(ec == std::errc() && p == s.data() + s.size(), "config key '" + key + "' is not a number: " + s);
  return v;
}

long long KeyValues::integer(const std::string& key, long long fallback) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  const std::string& s = it->second;
  long long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  require(ec == std::errc() && p == s.data() + s.size(), "config key '" + key + "' is not an integer: " + s);
  return v;
}

KeyValues KeyValues::section(const std::string& name) const {
  KeyValues out;
  const std::string prefix = name + ".";
  for (const auto& [k, v] : kv_)
    if (k.rfind(prefix, 0) == 0) out.kv_[k.substr(prefix.size())] = v;
  return out;
}

std::vector<std::string> KeyValues::keys() const {
  std::vector<std::string> out;
  for (const auto& kv : kv_) out.push_back(kv.first);
  return out;
}

void KeyValues::require_known(const std::vector<std::string>& allowed) const {
  for (const auto& kv : kv_)
    require(std::find(allowed.begin(), allowed.end(), kv.first) != allowed.end(), "unknown config key '" + kv.first + "'");
}

}  // namespace rdt::config
