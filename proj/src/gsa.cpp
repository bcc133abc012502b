#include "vetrank/gsa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "vetrank/error.hpp"
#include "vetrank/stats.hpp"
#include "vetrank/topsis.hpp"

namespace vetrank::gsa {

namespace {

constexpr std::size_t kMinSmootherPoints = 10;

std::vector<std::size_t> sorted_order(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  return order;
}

ConditionalMeanFit fit_binned(std::span<const double> x, std::span<const double> r,
                              std::size_t bins) {
  const std::size_t m = x.size();
  const std::size_t k = bins == 0 ? std::max<std::size_t>(1, std::lround(std::sqrt(double(m)))) : bins;
  if (m < 2 * k) {
    throw Error(ErrorKind::TooFewPoints, "binned estimator needs at least 2 points per bin (m=" +
                                             std::to_string(m) + ", bins=" + std::to_string(k) + ")");
  }
  const auto order = sorted_order(x);

  // Equal-count bins by sorted position; a run of tied x values stays in the
  // bin of its first member so the fit is a function of x.
  std::vector<std::size_t> bin_of(m);
  for (std::size_t pos = 0; pos < m; ++pos) {
    const std::size_t idx = order[pos];
    if (pos > 0 && x[idx] == x[order[pos - 1]]) {
      bin_of[idx] = bin_of[order[pos - 1]];
    } else {
      bin_of[idx] = pos * k / m;
    }
  }
  std::vector<double> sum(k, 0.0);
  std::vector<std::size_t> count(k, 0);
  for (std::size_t i = 0; i < m; ++i) {
    sum[bin_of[i]] += r[i];
    ++count[bin_of[i]];
  }
  ConditionalMeanFit out;
  out.bins = k;
  out.fitted.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.fitted[i] = sum[bin_of[i]] / double(count[bin_of[i]]);
  return out;
}

struct LocalLevelRun {
  double log_likelihood = 0.0;
  std::vector<double> smoothed;
};

// Random-walk level observed with noise, indexed by distinct sorted x values.
// Observation t averages counts[t] samples, so its noise variance is 1/counts[t]
// in units of the (profiled-out) noise scale; the level step variance is `snr`.
// The first observation initializes the state diffusely.
LocalLevelRun run_local_level(const std::vector<double>& y, const std::vector<double>& counts,
                              double snr) {
  const std::size_t T = y.size();
  std::vector<double> a_pred(T), p_pred(T), a_filt(T), p_filt(T);
  a_filt[0] = y[0];
  p_filt[0] = 1.0 / counts[0];
  double sum_scaled_sq = 0.0;
  double sum_log_f = 0.0;
  for (std::size_t t = 1; t < T; ++t) {
    a_pred[t] = a_filt[t - 1];
    p_pred[t] = p_filt[t - 1] + snr;
    const double h = 1.0 / counts[t];
    const double v = y[t] - a_pred[t];
    const double f = p_pred[t] + h;
    const double gain = p_pred[t] / f;
    a_filt[t] = a_pred[t] + gain * v;
    p_filt[t] = p_pred[t] * h / f;
    sum_scaled_sq += v * v / f;
    sum_log_f += std::log(f);
  }

  LocalLevelRun out;
  const double n_innov = double(T - 1);
  const double scale = std::max(sum_scaled_sq / n_innov, std::numeric_limits<double>::min());
  out.log_likelihood =
      -0.5 * (n_innov * (std::log(2.0 * std::numbers::pi) + 1.0 + std::log(scale)) + sum_log_f);

  // fixed-interval (Rauch-Tung-Striebel) pass
  out.smoothed.resize(T);
  out.smoothed[T - 1] = a_filt[T - 1];
  for (std::size_t t = T - 1; t-- > 0;) {
    const double j = p_filt[t] / p_pred[t + 1];
    out.smoothed[t] = a_filt[t] + j * (out.smoothed[t + 1] - a_pred[t + 1]);
  }
  return out;
}

ConditionalMeanFit fit_smoother(std::span<const double> x, std::span<const double> r,
                                const std::vector<double>& grid) {
  const std::size_t m = x.size();
  if (m < kMinSmootherPoints) {
    throw Error(ErrorKind::TooFewPoints,
                "state-space smoother needs at least 10 points (m=" + std::to_string(m) + ")");
  }
  const auto order = sorted_order(x);

  std::vector<double> y, counts;
  std::vector<std::size_t> group_of(m);
  for (std::size_t pos = 0; pos < m; ++pos) {
    const std::size_t idx = order[pos];
    if (pos == 0 || x[idx] != x[order[pos - 1]]) {
      y.push_back(0.0);
      counts.push_back(0.0);
    }
    y.back() += r[idx];
    counts.back() += 1.0;
    group_of[idx] = y.size() - 1;
  }
  for (std::size_t t = 0; t < y.size(); ++t) y[t] /= counts[t];

  ConditionalMeanFit out;
  out.fitted.resize(m);
  if (y.size() == 1) {
    std::fill(out.fitted.begin(), out.fitted.end(), y[0]);
    return out;
  }

  LocalLevelRun best;
  best.log_likelihood = -std::numeric_limits<double>::infinity();
  for (double snr : grid) {
    auto run = run_local_level(y, counts, snr);
    if (run.log_likelihood > best.log_likelihood) {
      best = std::move(run);
      out.snr = snr;
    }
  }
  out.log_likelihood = best.log_likelihood;
  for (std::size_t i = 0; i < m; ++i) out.fitted[i] = best.smoothed[group_of[i]];
  return out;
}

}  // namespace

const char* to_string(Estimator estimator) {
  return estimator == Estimator::Binned ? "binned" : "smoother";
}

Estimator parse_estimator(const std::string& text) {
  if (text == "binned") return Estimator::Binned;
  if (text == "smoother") return Estimator::StateSpaceSmoother;
  throw Error(ErrorKind::ParseError, "unknown estimator '" + text + "' (binned|smoother)");
}

std::vector<double> default_snr_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 12; ++k) grid.push_back(std::pow(10.0, -3.0 + 0.5 * k));
  return grid;
}

ConditionalMeanFit conditional_mean(std::span<const double> x, std::span<const double> r,
                                    Estimator estimator, const EstimatorParams& params) {
  if (x.size() != r.size()) throw Error(ErrorKind::LengthMismatch, "x and r differ in length");
  if (estimator == Estimator::Binned) return fit_binned(x, r, params.bins);
  return fit_smoother(x, r, params.snr_grid.empty() ? default_snr_grid() : params.snr_grid);
}

Design score_design(const PerformanceMatrix& matrix, const WeightVector& weights) {
  Design out;
  for (const auto& c : matrix.criteria) out.criterion_ids.push_back(c.id);
  out.inputs = matrix.values;
  out.output = topsis::closeness_scores(matrix, weights).scores;
  return out;
}

Design score_design(const std::map<int, PerformanceMatrix>& matrices, const WeightVector& weights) {
  if (matrices.empty()) throw Error(ErrorKind::TooFewPoints, "no yearly matrices to pool");
  std::vector<Design> parts;
  std::size_t rows = 0;
  for (const auto& [year, matrix] : matrices) {
    parts.push_back(score_design(matrix, weights));
    if (parts.back().criterion_ids != parts.front().criterion_ids) {
      throw Error(ErrorKind::CriteriaMismatch,
                  "criteria of year " + std::to_string(year) + " differ from the first year");
    }
    rows += parts.back().output.size();
  }
  Design out;
  out.criterion_ids = parts.front().criterion_ids;
  const std::size_t n = out.criterion_ids.size();
  out.inputs = Matrix(rows, n);
  std::size_t row = 0;
  for (const auto& part : parts) {
    for (std::size_t i = 0; i < part.output.size(); ++i, ++row) {
      for (std::size_t j = 0; j < n; ++j) out.inputs(row, j) = part.inputs(i, j);
      out.output.push_back(part.output[i]);
    }
  }
  return out;
}

MainEffects main_effects(const Design& design, Estimator estimator, const EstimatorParams& params) {
  const std::size_t n = design.inputs.cols();
  if (design.inputs.rows() != design.output.size() || design.criterion_ids.size() != n) {
    throw Error(ErrorKind::LengthMismatch, "design inputs, ids and output disagree in shape");
  }
  const double total_var = stats::variance(design.output);
  if (total_var == 0.0) {
    throw Error(ErrorKind::ZeroOutputVariance, "scores are constant; main effects undefined");
  }

  MainEffects out;
  out.estimator = estimator;
  out.criterion_ids = design.criterion_ids;
  out.samples = design.output.size();
  for (std::size_t j = 0; j < n; ++j) {
    const auto column = design.inputs.column(j);
    const auto fit = conditional_mean(column, design.output, estimator, params);
    std::vector<double> residual(fit.fitted.size());
    for (std::size_t i = 0; i < residual.size(); ++i) residual[i] = design.output[i] - fit.fitted[i];
    const double raw = stats::variance(fit.fitted) / total_var;
    out.raw_eta_sq.push_back(raw);
    out.eta_sq.push_back(std::clamp(raw, 0.0, 1.0));
    out.residual_var.push_back(stats::variance(residual));
  }
  return out;
}

MainEffects main_effects(const PerformanceMatrix& matrix, const WeightVector& weights,
                         Estimator estimator, const EstimatorParams& params) {
  return main_effects(score_design(matrix, weights), estimator, params);
}

std::vector<MainEffects> weight_scheme_comparison(const PerformanceMatrix& matrix,
                                                  const std::vector<WeightVector>& schemes,
                                                  Estimator estimator,
                                                  const EstimatorParams& params) {
  std::vector<MainEffects> out;
  out.reserve(schemes.size());
  for (const auto& w : schemes) out.push_back(main_effects(matrix, w, estimator, params));
  return out;
}

std::vector<MainEffects> weight_scheme_comparison(const std::map<int, PerformanceMatrix>& matrices,
                                                  const std::vector<WeightVector>& schemes,
                                                  Estimator estimator,
                                                  const EstimatorParams& params) {
  std::vector<MainEffects> out;
  out.reserve(schemes.size());
  for (const auto& w : schemes) {
    out.push_back(main_effects(score_design(matrices, w), estimator, params));
  }
  return out;
}

}  // namespace vetrank::gsa
