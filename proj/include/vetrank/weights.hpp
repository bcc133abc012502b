#pragma once

#include <cstddef>
#include <span>

#include "vetrank/model.hpp"

namespace vetrank::weights {

enum class ScenarioKind { MostWeighted, LeastWeighted };

/// Relative (expert-scale) weights to absolute weights summing to one.
/// Throws NonPositiveWeight if any entry is not strictly positive.
WeightVector normalize(std::span<const double> relative);

/// Relative weights of the criteria set, in column order.
std::vector<double> relative_weights(const std::vector<CriterionSpec>& criteria);

/// Weight vector in which criterion `focus` (0-based) has `ratio` times the
/// relative weight of every other criterion (MostWeighted), or 1/ratio of it
/// (LeastWeighted). The default ratio of 2 gives relative weights 2 and 1.
WeightVector scenario_weights(std::size_t n, std::size_t focus, ScenarioKind kind,
                              double ratio = 2.0);

const char* to_string(ScenarioKind kind);

}  // namespace vetrank::weights
