#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace rdt {

// Result of a calibrated bound check, serialisable and content-addressed.
struct CalibrationRecord {
  std::string bound_id;
  nlohmann::json parameters;
  nlohmann::json constants;
  nlohmann::json grid;
  double min_margin = 0;
  bool passed = false;
  std::string timestamp;  // not part of the canonical content

  nlohmann::json to_json() const;
  static CalibrationRecord from_json(const nlohmann::json& j);
  // Deterministic serialisation without the timestamp, and its SHA-1.
  std::string canonical() const;
  std::string run_id() const;
};

}  // namespace rdt
