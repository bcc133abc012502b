#pragma once

#include <map>
#include <string>
#include <vector>

#include "vetrank/model.hpp"
#include "vetrank/stats.hpp"

namespace vetrank::scenario {

// Outcome of weighting one criterion up versus down while all others share a
// common weight. `distance` is the relative Kendall-tau distance between the
// two resulting rankings.
struct ScenarioResult {
  std::string criterion_id;
  RankingResult ranking_most;
  RankingResult ranking_least;
  double distance = 0.0;
};

struct Options {
  double ratio = 2.0;
  bool parallel = true;
};

/// One ScenarioResult per criterion, in criterion order. Expert weights in the
/// matrix are ignored. Throws TooFewCriteria when n < 2.
std::vector<ScenarioResult> scenario_analysis(const PerformanceMatrix& matrix,
                                              const Options& options = {});

struct CriterionDistribution {
  std::string criterion_id;
  std::vector<std::pair<int, double>> by_year;  // ascending year
  stats::FiveNumber summary;
};

/// Scenario distances for every year, collected per criterion.
/// Throws CriteriaMismatch if the yearly matrices disagree on criteria.
std::vector<CriterionDistribution> scenario_panel(const std::map<int, PerformanceMatrix>& matrices,
                                                  const Options& options = {});

/// Throws CriteriaMismatch unless every matrix has the same criterion ids and
/// directions, in the same order.
void require_same_criteria(const std::map<int, PerformanceMatrix>& matrices);

}  // namespace vetrank::scenario
