#pragma once

#include <span>
#include <vector>

#include "vetrank/model.hpp"

namespace vetrank::topsis {

struct Intermediates {
  Matrix normalized;
  std::vector<double> ideal;
  std::vector<double> antiideal;
  std::vector<double> dist_ideal;
  std::vector<double> dist_antiideal;
};

struct Closeness {
  std::vector<double> scores;
  Intermediates intermediates;
};

/// Vector-normalizes each column and multiplies it by its weight:
///   n_ij = w_j * x_ij / sqrt(sum_k x_kj^2)
/// Throws InvalidMatrix when a column has zero norm.
Matrix normalize_and_weight(const Matrix& values, const WeightVector& weights);

/// Ideal takes the column max on benefit criteria and the min on cost
/// criteria; the antiideal the reverse. Returns {ideal, antiideal}.
std::pair<std::vector<double>, std::vector<double>> ideal_solutions(
    const Matrix& normalized, std::span<const Direction> directions);

/// Relative closeness r_i = d_i^w / (d_i^w + d_i^b) with Euclidean distances.
/// Weights must be positive but need not sum to one; scores are invariant to
/// a common scale factor on the weights.
Closeness closeness_scores(const PerformanceMatrix& matrix, const WeightVector& weights);

/// Ranks by descending score. Equal scores are ordered by ascending
/// alternative id so that the result is always a strict permutation.
RankingResult rank_scores(const std::vector<std::string>& alternatives,
                          std::span<const double> scores);

RankingResult rank(const PerformanceMatrix& matrix, const WeightVector& weights);

}  // namespace vetrank::topsis
