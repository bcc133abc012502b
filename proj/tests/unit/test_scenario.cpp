#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "../support/oracles.hpp"
#include "vetrank/error.hpp"
#include "vetrank/fixtures.hpp"
#include "vetrank/scenario.hpp"

using namespace vetrank;

namespace {

// Ranking order from reference scores, ties by index (ids are index-ordered).
std::vector<std::size_t> order_of(const std::vector<double>& s) {
  std::vector<std::size_t> o(s.size());
  std::iota(o.begin(), o.end(), 0);
  std::stable_sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });
  return o;
}

double reference_distance(const oracle::Instance& inst, std::size_t focus) {
  const std::size_t n = inst.matrix.criteria.size(), m = inst.rows.size();
  std::vector<double> most(n, 1.0), least(n, 1.0);
  most[focus] = 2.0;
  least[focus] = 0.5;
  const auto dirs = inst.matrix.directions();
  const auto a = order_of(oracle::topsis_scores(inst.rows, most, dirs));
  const auto b = order_of(oracle::topsis_scores(inst.rows, least, dirs));
  return double(oracle::discordant_brute(a, b)) / (double(m) * double(m - 1) / 2.0);
}

PerformanceMatrix opposing_matrix(fixtures::Rng& rng, std::size_t m, std::size_t n, std::size_t odd) {
  PerformanceMatrix pm;
  pm.values = Matrix(m, n);
  for (std::size_t j = 0; j < n; ++j) pm.criteria.push_back({"K" + std::to_string(j + 1), "", Direction::Benefit, 1.0});
  for (std::size_t i = 0; i < m; ++i) {
    pm.alternatives.push_back("A" + std::to_string(100 + i));
    const double q = double(i) / double(m - 1);
    for (std::size_t j = 0; j < n; ++j) {
      pm.values(i, j) = j == odd ? 1.0 + 5.0 * (1.0 - q) : 1.0 + q + rng.normal(0.0, 0.3) * 0.5;
      pm.values(i, j) = std::max(pm.values(i, j), 0.05);
    }
  }
  return pm;
}

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("a single criterion is rejected") {
    PerformanceMatrix pm;
    pm.alternatives = {"a", "b"};
    pm.criteria = {{"K1", "", Direction::Benefit, 1.0}};
    pm.values = Matrix(2, 1);
    pm.values(0, 0) = 1;
    pm.values(1, 0) = 2;
    try {
      scenario::scenario_analysis(pm);
      FAIL("expected TooFewCriteria");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::TooFewCriteria);
    }
  }

  TEST_CASE("distances match the reference pipeline") {
    fixtures::Rng rng(31);
    for (int t = 0; t < 60; ++t) {
      auto inst = oracle::random_instance(rng, rng.integer(3, 12), rng.integer(2, 5));
      // Make the last criterion an affine copy of the first.
      const std::size_t n = inst.matrix.criteria.size();
      inst.matrix.criteria[n - 1].direction = inst.matrix.criteria[0].direction;
      for (std::size_t i = 0; i < inst.rows.size(); ++i) {
        inst.rows[i][n - 1] = 3.0 * inst.rows[i][0] + 2.0;
        inst.matrix.values(i, n - 1) = inst.rows[i][n - 1];
      }
      // Index-ordered ids make the id tie-break agree with the reference.
      for (std::size_t i = 0; i < inst.rows.size(); ++i) inst.matrix.alternatives[i] = "a" + std::to_string(100 + i);
      const auto results = scenario::scenario_analysis(inst.matrix);
      REQUIRE(results.size() == n);
      for (std::size_t j = 0; j < n; ++j) CHECK(results[j].distance == doctest::Approx(reference_distance(inst, j)));
    }
  }

  TEST_CASE("an opposing criterion has the largest distance") {
    fixtures::Rng rng(32);
    const auto pm = opposing_matrix(rng, 10, 8, 5);
    const auto results = scenario::scenario_analysis(pm);
    const auto best = std::max_element(results.begin(), results.end(), [](const auto& a, const auto& b) {
      return a.distance < b.distance;
    });
    CHECK(best->criterion_id == "K6");
    CHECK(best->distance > 0.0);
  }

  TEST_CASE("parallel and sequential agree") {
    fixtures::Rng rng(33);
    const auto pm = opposing_matrix(rng, 25, 6, 2);
    const auto a = scenario::scenario_analysis(pm, {2.0, true});
    const auto b = scenario::scenario_analysis(pm, {2.0, false});
    for (std::size_t j = 0; j < a.size(); ++j) {
      CHECK(a[j].distance == b[j].distance);
      CHECK(a[j].ranking_most.ranks == b[j].ranking_most.ranks);
    }
  }

  TEST_CASE("panel of one year and of identical years") {
    fixtures::Rng rng(34);
    const auto pm = opposing_matrix(rng, 12, 4, 1);
    const auto single = scenario::scenario_panel({{2015, pm}});
    const auto direct = scenario::scenario_analysis(pm);
    for (std::size_t j = 0; j < single.size(); ++j) {
      CHECK(single[j].summary.median == direct[j].distance);
      CHECK(single[j].summary.min == single[j].summary.max);
    }
    const auto twice = scenario::scenario_panel({{2015, pm}, {2016, pm}});
    for (const auto& c : twice) {
      REQUIRE(c.by_year.size() == 2);
      CHECK(c.by_year[0].second == c.by_year[1].second);
      CHECK(c.summary.q3 - c.summary.q1 == 0.0);
    }
  }

  TEST_CASE("years must share criteria") {
    fixtures::Rng rng(35);
    auto a = opposing_matrix(rng, 6, 3, 0);
    auto b = a;
    b.criteria[2].id = "other";
    CHECK_THROWS_AS(scenario::scenario_panel({{1, a}, {2, b}}), Error);
  }

  TEST_CASE("adversarial fixture separates leverage from redundancy") {
    const auto panel = scenario::scenario_panel(fixtures::adversarial_matrices());
    const auto top = std::max_element(panel.begin(), panel.end(), [](const auto& a, const auto& b) {
      return a.summary.median < b.summary.median;
    });
    CHECK(top->criterion_id == "C4");
    CHECK(panel[7].criterion_id == "C8");
    CHECK(panel[7].summary.median < 0.1);
  }
}
