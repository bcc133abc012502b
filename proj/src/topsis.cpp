#include "vetrank/topsis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "vetrank/error.hpp"

namespace vetrank::topsis {

namespace {

void check_weights(const WeightVector& weights, std::size_t n) {
  if (weights.size() != n) {
    throw Error(ErrorKind::LengthMismatch, "expected " + std::to_string(n) + " weights, got " +
                                               std::to_string(weights.size()));
  }
  for (double w : weights.absolute) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw Error(ErrorKind::NonPositiveWeight, "weights must be positive and finite");
    }
  }
}

std::vector<double> distances_to(const Matrix& normalized, const std::vector<double>& pole) {
  std::vector<double> out(normalized.rows());
  for (std::size_t i = 0; i < normalized.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < normalized.cols(); ++j) {
      const double d = normalized(i, j) - pole[j];
      sum += d * d;
    }
    out[i] = std::sqrt(sum);
  }
  return out;
}

}  // namespace

Matrix normalize_and_weight(const Matrix& values, const WeightVector& weights) {
  check_weights(weights, values.cols());
  Matrix out(values.rows(), values.cols());
  for (std::size_t j = 0; j < values.cols(); ++j) {
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < values.rows(); ++i) sum_sq += values(i, j) * values(i, j);
    const double norm = std::sqrt(sum_sq);
    if (norm == 0.0) {
      throw Error(ErrorKind::InvalidMatrix, "ZeroColumn{col:" + std::to_string(j + 1) + "}");
    }
    for (std::size_t i = 0; i < values.rows(); ++i) {
      out(i, j) = weights[j] * values(i, j) / norm;
    }
  }
  return out;
}

std::pair<std::vector<double>, std::vector<double>> ideal_solutions(
    const Matrix& normalized, std::span<const Direction> directions) {
  if (directions.size() != normalized.cols()) {
    throw Error(ErrorKind::LengthMismatch, "one direction per criterion required");
  }
  if (normalized.rows() < 2) {
    throw Error(ErrorKind::InvalidMatrix, "TooFewAlternatives: need at least 2 alternatives");
  }
  std::vector<double> ideal(normalized.cols());
  std::vector<double> antiideal(normalized.cols());
  for (std::size_t j = 0; j < normalized.cols(); ++j) {
    double lo = normalized(0, j);
    double hi = normalized(0, j);
    for (std::size_t i = 1; i < normalized.rows(); ++i) {
      lo = std::min(lo, normalized(i, j));
      hi = std::max(hi, normalized(i, j));
    }
    if (directions[j] == Direction::Benefit) {
      ideal[j] = hi;
      antiideal[j] = lo;
    } else {
      ideal[j] = lo;
      antiideal[j] = hi;
    }
  }
  return {std::move(ideal), std::move(antiideal)};
}

Closeness closeness_scores(const PerformanceMatrix& matrix, const WeightVector& weights) {
  require_valid(matrix);
  Closeness out;
  auto& mid = out.intermediates;
  mid.normalized = normalize_and_weight(matrix.values, weights);
  const auto directions = matrix.directions();
  std::tie(mid.ideal, mid.antiideal) = ideal_solutions(mid.normalized, directions);
  mid.dist_ideal = distances_to(mid.normalized, mid.ideal);
  mid.dist_antiideal = distances_to(mid.normalized, mid.antiideal);

  out.scores.resize(matrix.num_alternatives());
  for (std::size_t i = 0; i < out.scores.size(); ++i) {
    const double denom = mid.dist_antiideal[i] + mid.dist_ideal[i];
    if (!(denom > 0.0)) {
      throw Error(ErrorKind::DegenerateGeometry,
                  "alternative '" + matrix.alternatives[i] + "' coincides with ideal and antiideal");
    }
    out.scores[i] = mid.dist_antiideal[i] / denom;
  }
  return out;
}

RankingResult rank_scores(const std::vector<std::string>& alternatives,
                          std::span<const double> scores) {
  const std::size_t m = scores.size();
  if (alternatives.size() != m) {
    throw Error(ErrorKind::LengthMismatch, "one score per alternative required");
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return alternatives[a] < alternatives[b];
  });

  RankingResult out;
  out.alternatives = alternatives;
  out.scores.assign(scores.begin(), scores.end());
  out.ranks.resize(m);
  out.percentiles.resize(m);
  for (std::size_t pos = 0; pos < m; ++pos) {
    const int r = static_cast<int>(pos) + 1;
    out.ranks[order[pos]] = r;
    out.percentiles[order[pos]] = percentile_from_rank(r, m);
  }
  return out;
}

RankingResult rank(const PerformanceMatrix& matrix, const WeightVector& weights) {
  const auto closeness = closeness_scores(matrix, weights);
  return rank_scores(matrix.alternatives, closeness.scores);
}

}  // namespace vetrank::topsis
