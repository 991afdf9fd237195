#include "rdt/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "rdt/common.hpp"

namespace rdt::io {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string to_csv(const std::vector<Column>& columns) {
  std::string s;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) s += ',';
    s += columns[c].name;
  }
  s += '\n';
  if (columns.empty()) return s;
  const std::size_t rows = columns.front().values.size();
  for (const auto& c : columns) require(c.values.size() == rows, "CSV columns have different lengths");
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) s += ',';
      s += format_double(columns[c].values[r]);
    }
    s += '\n';
  }
  return s;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << text;
  }
  std::filesystem::rename(tmp, path);
}

void write_csv(const std::filesystem::path& path, const std::vector<Column>& columns) {
  write_text_atomic(path, to_csv(columns));
}

std::vector<Column> read_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  std::vector<Column> cols;
  std::string line;
  if (!std::getline(f, line)) return cols;
  {
    std::stringstream ss(line);
    std::string name;
    while (std::getline(ss, name, ',')) cols.push_back(Column{name, {}});
  }
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::size_t c = 0, pos = 0;
    while (pos <= line.size() && c < cols.size()) {
      const std::size_t end = std::min(line.find(',', pos), line.size());
      double v = 0;
      auto r = std::from_chars(line.data() + pos, line.data() + end, v);
      if (r.ec != std::errc()) throw PreconditionError("malformed CSV value in " + path.string());
      cols[c++].values.push_back(v);
      pos = end + 1;
    }
    if (c != cols.size()) throw PreconditionError("short CSV row in " + path.string());
  }
  return cols;
}

std::vector<Column> profile_columns(const grid::RadialGrid& grid, const grid::TensorProfile& p) {
  grid::validate_profile(grid, p);
  std::vector<Column> cols{{"r", grid.nodes()}};
  for (std::size_t i = 0; i < p.names.size(); ++i) cols.push_back({p.names[i], p.components[i]});
  return cols;
}

nlohmann::json grid_manifest(const grid::RadialGrid& grid) {
  return {{"n", grid.dim()},
          {"gamma_order", grid.gamma_order()},
          {"r_min", grid.r_min()},
          {"r_max", grid.r_max()},
          {"nodes", grid.size()},
          {"map", "sinh"}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) { write_text_atomic(path, j.dump(2) + "\n"); }

}  // namespace rdt::io
