#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "vetrank/error.hpp"
#include "vetrank/fixtures.hpp"
#include "vetrank/gsa.hpp"
#include "vetrank/stats.hpp"
#include "vetrank/weights.hpp"

using namespace vetrank;
using gsa::Estimator;

namespace {

gsa::Design linear_design(std::uint64_t seed, std::size_t m, bool noise_column) {
  fixtures::Rng rng(seed);
  gsa::Design d;
  d.criterion_ids = {"x1", "x2"};
  if (noise_column) d.criterion_ids.push_back("z");
  d.inputs = Matrix(m, d.criterion_ids.size());
  for (std::size_t i = 0; i < m; ++i) {
    const double x1 = rng.uniform(), x2 = rng.uniform();
    d.inputs(i, 0) = x1;
    d.inputs(i, 1) = x2;
    if (noise_column) d.inputs(i, 2) = rng.uniform();
    d.output.push_back(2.0 * x1 + x2);
  }
  return d;
}

}  // namespace

TEST_SUITE("gsa") {
  TEST_CASE("perfect signal") {
    std::vector<double> x, r;
    fixtures::Rng rng(41);
    for (int i = 0; i < 400; ++i) x.push_back(rng.uniform());
    r = x;
    const auto fit = gsa::conditional_mean(x, r, Estimator::StateSpaceSmoother);
    std::vector<double> resid(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) resid[i] = r[i] - fit.fitted[i];
    CHECK(stats::variance(resid) < 1e-6 * stats::variance(r));

    const auto bins = gsa::conditional_mean(x, r, Estimator::Binned);
    CHECK(bins.bins == 20);
    // Each fitted value is the mean of its own bin: the fit is constant on
    // sorted runs of 20 and averages them exactly.
    std::vector<std::size_t> order(x.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
    for (std::size_t b = 0; b < 20; ++b) {
      double sum = 0.0;
      for (std::size_t k = 0; k < 20; ++k) sum += r[order[b * 20 + k]];
      for (std::size_t k = 0; k < 20; ++k) CHECK(bins.fitted[order[b * 20 + k]] == doctest::Approx(sum / 20.0).epsilon(1e-12));
    }
  }

  TEST_CASE("independent output explains little") {
    for (auto est : {Estimator::Binned, Estimator::StateSpaceSmoother}) {
      fixtures::Rng rng(42);
      std::vector<double> x, r;
      for (int i = 0; i < 300; ++i) {
        x.push_back(rng.uniform());
        r.push_back(rng.uniform());
      }
      const auto fit = gsa::conditional_mean(x, r, est);
      CHECK(stats::variance(fit.fitted) / stats::variance(r) < 0.15);
    }
  }

  TEST_CASE("parabola recovered by the smoother") {
    fixtures::Rng rng(43);
    std::vector<double> x, r;
    for (int i = 0; i < 500; ++i) {
      x.push_back(rng.uniform(-1.0, 1.0));
      r.push_back(x.back() * x.back() + rng.normal(0.0, 0.05));
    }
    const auto fit = gsa::conditional_mean(x, r, Estimator::StateSpaceSmoother);
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(fit.fitted[i] - x[i] * x[i]));
    CHECK(worst < 0.1);
  }

  TEST_CASE("linear decomposition 0.8 / 0.2 and a noise column") {
    for (auto est : {Estimator::Binned, Estimator::StateSpaceSmoother}) {
      const auto e = gsa::main_effects(linear_design(44, 1000, true), est);
      CHECK(std::abs(e.eta_sq[0] - 0.8) < 0.05);
      CHECK(std::abs(e.eta_sq[1] - 0.2) < 0.05);
      CHECK(e.eta_sq[2] < 0.1);
      CHECK(e.samples == 1000);
    }
  }

  TEST_CASE("one bin explains nothing") {
    const auto e = gsa::main_effects(linear_design(45, 200, false), Estimator::Binned, {1, {}});
    CHECK(e.eta_sq[0] == 0.0);
    CHECK(e.eta_sq[1] == 0.0);
  }

  TEST_CASE("estimators agree on smooth relationships") {
    const auto d = linear_design(46, 600, false);
    const auto a = gsa::main_effects(d, Estimator::Binned);
    const auto b = gsa::main_effects(d, Estimator::StateSpaceSmoother);
    for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(a.eta_sq[j] - b.eta_sq[j]) < 0.1);
  }

  TEST_CASE("sample order does not matter") {
    auto d = linear_design(47, 300, false);
    const auto a = gsa::main_effects(d, Estimator::StateSpaceSmoother);
    gsa::Design rev = d;
    const std::size_t m = d.output.size();
    for (std::size_t i = 0; i < m; ++i) {
      rev.output[i] = d.output[m - 1 - i];
      for (std::size_t j = 0; j < 2; ++j) rev.inputs(i, j) = d.inputs(m - 1 - i, j);
    }
    const auto b = gsa::main_effects(rev, Estimator::StateSpaceSmoother);
    for (std::size_t j = 0; j < 2; ++j) CHECK(a.eta_sq[j] == doctest::Approx(b.eta_sq[j]).epsilon(1e-12));
  }

  TEST_CASE("monotone single input is fully explained") {
    fixtures::Rng rng(48);
    PerformanceMatrix pm;
    pm.criteria = {{"K1", "", Direction::Benefit, 1.0}};
    pm.values = Matrix(200, 1);
    for (std::size_t i = 0; i < 200; ++i) {
      pm.alternatives.push_back("a" + std::to_string(i));
      pm.values(i, 0) = rng.uniform(1.0, 5.0);
    }
    for (auto est : {Estimator::Binned, Estimator::StateSpaceSmoother}) {
      const auto e = gsa::main_effects(pm, WeightVector{{1.0}}, est);
      CHECK(e.eta_sq[0] > 0.95);
    }
  }

  TEST_CASE("errors") {
    std::vector<double> x(9, 0.0), r(9, 0.0);
    for (int i = 0; i < 9; ++i) x[i] = r[i] = i;
    CHECK_THROWS_AS(gsa::conditional_mean(x, r, Estimator::StateSpaceSmoother), Error);
    CHECK_THROWS_AS(gsa::conditional_mean(x, r, Estimator::Binned, {5, {}}), Error);
    std::vector<double> shorter(8, 0.0);
    CHECK_THROWS_AS(gsa::conditional_mean(x, shorter, Estimator::Binned), Error);
    gsa::Design flat;
    flat.criterion_ids = {"x"};
    flat.inputs = Matrix(20, 1, 1.0);
    flat.output.assign(20, 0.5);
    try {
      gsa::main_effects(flat, Estimator::Binned);
      FAIL("expected ZeroOutputVariance");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ZeroOutputVariance);
    }
    CHECK_THROWS_AS(gsa::parse_estimator("kernel"), Error);
  }

  TEST_CASE("scheme comparison") {
    const auto matrices = fixtures::adversarial_matrices();
    const auto w = weights::normalize(std::vector<double>{4, 2.5, 1, 1, 3, 2, 1, 1});
    const auto one = gsa::weight_scheme_comparison(matrices, {w}, Estimator::Binned);
    const auto direct = gsa::main_effects(gsa::score_design(matrices, w), Estimator::Binned);
    CHECK(one[0].eta_sq == direct.eta_sq);
    const auto twice = gsa::weight_scheme_comparison(matrices, {w, w}, Estimator::Binned);
    CHECK(twice[0].eta_sq == twice[1].eta_sq);

    const auto least = weights::scenario_weights(8, 3, weights::ScenarioKind::LeastWeighted);
    const auto most = weights::scenario_weights(8, 3, weights::ScenarioKind::MostWeighted);
    const auto cmp = gsa::weight_scheme_comparison(matrices, {least, most}, Estimator::StateSpaceSmoother);
    CHECK(cmp[1].eta_sq[3] > cmp[0].eta_sq[3]);
    CHECK(cmp[0].samples == 8 * 40);
  }

  TEST_CASE("per-year and pooled sample counts differ") {
    const auto matrices = fixtures::adversarial_matrices();
    const auto w = weights::normalize(std::vector<double>(8, 1.0));
    const auto pooled = gsa::main_effects(gsa::score_design(matrices, w), Estimator::Binned);
    const auto year = gsa::main_effects(matrices.begin()->second, w, Estimator::Binned);
    CHECK(pooled.samples == 320);
    CHECK(year.samples == 40);
  }

  TEST_CASE("default smoothing grid") {
    const auto g = gsa::default_snr_grid();
    REQUIRE(g.size() == 13);
    CHECK(g.front() == doctest::Approx(1e-3));
    CHECK(g.back() == doctest::Approx(1e3));
  }
}
