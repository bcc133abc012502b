#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vetrank/model.hpp"

namespace vetrank::gsa {

// Variance-based sensitivity of the TOPSIS score to each criterion column,
// measured by the correlation ratio
//   eta^2_j = Var(E[r | x_j]) / Var(r)
// with E[r | x_j] estimated nonparametrically from the observed sample.

enum class Estimator { Binned, StateSpaceSmoother };

const char* to_string(Estimator estimator);
Estimator parse_estimator(const std::string& text);

struct EstimatorParams {
  /// Binned: number of equal-count bins; 0 selects round(sqrt(m)).
  std::size_t bins = 0;
  /// Smoother: candidate signal-to-noise ratios; empty selects the default
  /// grid of 13 log-spaced values from 1e-3 to 1e3.
  std::vector<double> snr_grid;
};

std::vector<double> default_snr_grid();

struct ConditionalMeanFit {
  std::vector<double> fitted;  // same order as the input samples
  std::size_t bins = 0;        // binned only
  double snr = 0.0;            // smoother only: selected signal-to-noise ratio
  double log_likelihood = 0.0; // smoother only: concentrated innovation log-likelihood
};

/// Estimates E[r | x] at every sample point. Throws TooFewPoints when m < 10
/// (smoother) or m < 2 * bins (binned), and LengthMismatch on unequal inputs.
ConditionalMeanFit conditional_mean(std::span<const double> x, std::span<const double> r,
                                    Estimator estimator, const EstimatorParams& params = {});

/// Input columns and the output they produced, one row per sample.
struct Design {
  std::vector<std::string> criterion_ids;
  Matrix inputs;
  std::vector<double> output;
};

/// TOPSIS scores of one matrix under `weights`, paired with its columns.
Design score_design(const PerformanceMatrix& matrix, const WeightVector& weights);

/// Pools alternative-year samples: each year is scored separately and the
/// rows are stacked in ascending year order.
Design score_design(const std::map<int, PerformanceMatrix>& matrices, const WeightVector& weights);

struct MainEffects {
  Estimator estimator = Estimator::Binned;
  std::vector<std::string> criterion_ids;
  std::vector<double> eta_sq;       // clamped to [0, 1]
  std::vector<double> raw_eta_sq;   // as estimated
  std::vector<double> residual_var; // Var(r - fitted) per criterion
  std::size_t samples = 0;
};

/// Throws ZeroOutputVariance when the output is constant.
MainEffects main_effects(const Design& design, Estimator estimator,
                         const EstimatorParams& params = {});

MainEffects main_effects(const PerformanceMatrix& matrix, const WeightVector& weights,
                         Estimator estimator, const EstimatorParams& params = {});

std::vector<MainEffects> weight_scheme_comparison(const PerformanceMatrix& matrix,
                                                  const std::vector<WeightVector>& schemes,
                                                  Estimator estimator,
                                                  const EstimatorParams& params = {});

std::vector<MainEffects> weight_scheme_comparison(const std::map<int, PerformanceMatrix>& matrices,
                                                  const std::vector<WeightVector>& schemes,
                                                  Estimator estimator,
                                                  const EstimatorParams& params = {});

}  // namespace vetrank::gsa
