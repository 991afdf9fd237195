#include "rdt/record.hpp"

#include "rdt/hash.hpp"

namespace rdt {

nlohmann::json CalibrationRecord::to_json() const {
  nlohmann::json j{{"bound_id", bound_id}, {"parameters", parameters}, {"constants", constants},
                   {"grid", grid},         {"min_margin", min_margin}, {"passed", passed}};
  j["timestamp"] = timestamp;
  return j;
}

CalibrationRecord CalibrationRecord::from_json(const nlohmann::json& j) {
  CalibrationRecord r;
  r.bound_id = j.at("bound_id");
  r.parameters = j.at("parameters");
  r.constants = j.at("constants");
  r.grid = j.at("grid");
  r.min_margin = j.at("min_margin");
  r.passed = j.at("passed");
  r.timestamp = j.value("timestamp", "");
  return r;
}

std::string CalibrationRecord::canonical() const {
  nlohmann::json j = to_json();
  j.erase("timestamp");
  return j.dump();
}

std::string CalibrationRecord::run_id() const { return sha1_hex(canonical()).substr(0, 12); }

}  // namespace rdt
