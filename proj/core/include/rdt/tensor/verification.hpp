#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

namespace rdt::tensor {

// Convergence of ricci_deturck against the independently assembled
// −2 Ric + L_V g on seeded random patch metrics with ‖g − g0‖_{C²} ≤ c2_bound.
struct OracleStudy {
  int n = 4;
  std::vector<double> spacings;
  std::vector<double> orders;  // fitted order per metric
  double min_order = 0;
  double max_error = 0;        // at the coarsest spacing
  nlohmann::json to_json() const;
};
OracleStudy operator_oracle_study(int n, int metrics, std::uint64_t seed, const std::vector<double>& spacings = {0.2, 0.1, 0.05},
                                  double c2_bound = 0.2);

// Difference quotients of M against its linearisation.
//   flat:    ‖(M(g0 + s h) − M(g0))/s − L h‖ against s ∈ {10⁻², 10⁻³, 10⁻⁴}, slope ≈ 1;
//   general: central differences at random g, order from s ∈ {10⁻³, 5·10⁻⁴}, ≈ 2.
struct LinearizationStudy {
  int n = 4;
  std::vector<double> flat_slopes;
  std::vector<double> general_orders;
  double flat_min = 0, flat_max = 0, general_min = 0, general_max = 0;
  nlohmann::json to_json() const;
};
LinearizationStudy linearization_study(int n, int cases, std::uint64_t seed);

// |∇h| − |∇|h|| at random points for random (g, h) pairs, with g0 flat.
struct KatoStudy {
  int pairs = 0;
  long long samples = 0, excluded = 0;
  double min_gap = 0;
  nlohmann::json to_json() const;
};
KatoStudy kato_study(int n, int pairs, int samples_per_pair, std::uint64_t seed);

}  // namespace rdt::tensor
