#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace rdt::config {

// Flat view of an INI document.  Keys inside a section are "section.key";
// keys before the first section header keep their bare name.
class KeyValues {
 public:
  static KeyValues parse(const std::string& text);
  static KeyValues load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  std::string text(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key, double fallback) const;
  long long integer(const std::string& key, long long fallback) const;
  void set(const std::string& key, const std::string& value) { kv_[key] = value; }

  // Entries of one section with the prefix removed.
  KeyValues section(const std::string& name) const;
  std::vector<std::string> keys() const;
  // Throws PreconditionError naming the first key outside `allowed`.
  void require_known(const std::vector<std::string>& allowed) const;

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace rdt::config
