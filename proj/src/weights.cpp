#include "vetrank/weights.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "vetrank/error.hpp"

namespace vetrank::weights {

WeightVector normalize(std::span<const double> relative) {
  if (relative.empty()) throw Error(ErrorKind::NonPositiveWeight, "empty weight vector");
  double total = 0.0;
  for (std::size_t j = 0; j < relative.size(); ++j) {
    if (!(relative[j] > 0.0) || !std::isfinite(relative[j])) {
      throw Error(ErrorKind::NonPositiveWeight,
                  "weight " + std::to_string(j + 1) + " is not a positive finite number");
    }
    total += relative[j];
  }
  WeightVector out;
  out.absolute.reserve(relative.size());
  for (double w : relative) out.absolute.push_back(w / total);
  return out;
}

std::vector<double> relative_weights(const std::vector<CriterionSpec>& criteria) {
  std::vector<double> out;
  out.reserve(criteria.size());
  for (const auto& c : criteria) out.push_back(c.relative_weight);
  return out;
}

WeightVector scenario_weights(std::size_t n, std::size_t focus, ScenarioKind kind, double ratio) {
  if (n < 2) throw Error(ErrorKind::TooFewCriteria, "scenario weights need at least 2 criteria");
  if (focus >= n) {
    throw Error(ErrorKind::IndexOutOfRange,
                "focus criterion " + std::to_string(focus) + " out of range for n=" + std::to_string(n));
  }
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw Error(ErrorKind::NonPositiveWeight, "scenario ratio must be positive");
  }
  const bool most = kind == ScenarioKind::MostWeighted;
  std::vector<double> relative(n, most ? 1.0 : ratio);
  relative[focus] = most ? ratio : 1.0;
  return normalize(relative);
}

const char* to_string(ScenarioKind kind) {
  return kind == ScenarioKind::MostWeighted ? "most" : "least";
}

}  // namespace vetrank::weights
