#include "vetrank/scenario.hpp"

#include <future>

#include "vetrank/error.hpp"
#include "vetrank/rankcompare.hpp"
#include "vetrank/topsis.hpp"
#include "vetrank/weights.hpp"

namespace vetrank::scenario {

namespace {

ScenarioResult evaluate(const PerformanceMatrix& matrix, std::size_t focus, double ratio) {
  const std::size_t n = matrix.num_criteria();
  ScenarioResult out;
  out.criterion_id = matrix.criteria[focus].id;
  out.ranking_most = topsis::rank(
      matrix, weights::scenario_weights(n, focus, weights::ScenarioKind::MostWeighted, ratio));
  out.ranking_least = topsis::rank(
      matrix, weights::scenario_weights(n, focus, weights::ScenarioKind::LeastWeighted, ratio));
  out.distance = rankcompare::kendall_tau_distance(out.ranking_most, out.ranking_least);
  return out;
}

}  // namespace

std::vector<ScenarioResult> scenario_analysis(const PerformanceMatrix& matrix,
                                              const Options& options) {
  if (matrix.num_criteria() < 2) {
    throw Error(ErrorKind::TooFewCriteria, "scenario analysis needs at least 2 criteria");
  }
  require_valid(matrix);
  const std::size_t n = matrix.num_criteria();
  std::vector<ScenarioResult> out;
  out.reserve(n);
  if (!options.parallel) {
    for (std::size_t j = 0; j < n; ++j) out.push_back(evaluate(matrix, j, options.ratio));
    return out;
  }
  std::vector<std::future<ScenarioResult>> pending;
  pending.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    pending.push_back(std::async(std::launch::async, evaluate, std::cref(matrix), j, options.ratio));
  }
  for (auto& f : pending) out.push_back(f.get());
  return out;
}

void require_same_criteria(const std::map<int, PerformanceMatrix>& matrices) {
  if (matrices.empty()) return;
  const auto& reference = matrices.begin()->second.criteria;
  for (const auto& [year, matrix] : matrices) {
    bool same = matrix.criteria.size() == reference.size();
    for (std::size_t j = 0; same && j < reference.size(); ++j) {
      same = matrix.criteria[j].id == reference[j].id &&
             matrix.criteria[j].direction == reference[j].direction;
    }
    if (!same) {
      throw Error(ErrorKind::CriteriaMismatch,
                  "criteria of year " + std::to_string(year) + " differ from year " +
                      std::to_string(matrices.begin()->first));
    }
  }
}

std::vector<CriterionDistribution> scenario_panel(const std::map<int, PerformanceMatrix>& matrices,
                                                  const Options& options) {
  require_same_criteria(matrices);
  std::vector<CriterionDistribution> out;
  if (matrices.empty()) return out;
  for (const auto& c : matrices.begin()->second.criteria) out.push_back({c.id, {}, {}});

  for (const auto& [year, matrix] : matrices) {
    const auto results = scenario_analysis(matrix, options);
    for (std::size_t j = 0; j < results.size(); ++j) {
      out[j].by_year.emplace_back(year, results[j].distance);
    }
  }
  for (auto& dist : out) {
    std::vector<double> values;
    for (const auto& [year, d] : dist.by_year) values.push_back(d);
    dist.summary = stats::five_number(std::move(values));
  }
  return out;
}

}  // namespace vetrank::scenario
