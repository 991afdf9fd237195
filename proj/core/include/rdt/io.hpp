#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdt/grid/radial_grid.hpp"

namespace rdt::io {

// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

struct Column {
  std::string name;
  std::vector<double> values;
};

// Columnar CSV with a header row; all columns must have equal length.
std::string to_csv(const std::vector<Column>& columns);
void write_csv(const std::filesystem::path& path, const std::vector<Column>& columns);
std::vector<Column> read_csv(const std::filesystem::path& path);

// Profiles with an r column first.
std::vector<Column> profile_columns(const grid::RadialGrid& grid, const grid::TensorProfile& p);
nlohmann::json grid_manifest(const grid::RadialGrid& grid);

// Writes through a temporary file and renames, so readers never see a partial file.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace rdt::io
