#include "vetrank/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vetrank::stats {

double mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean of empty sample");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double variance(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("variance of empty sample");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) return 0.0;
  const double mu = mean(values);
  double sum = 0.0;
  for (double v : values) sum += (v - mu) * (v - mu);
  return sum / static_cast<double>(values.size());
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return values[lo];
  return values[lo] + frac * (values[hi] - values[lo]);
}

FiveNumber five_number(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("summary of empty sample");
  std::sort(values.begin(), values.end());
  FiveNumber out;
  out.min = values.front();
  out.max = values.back();
  out.q1 = quantile(values, 0.25);
  out.median = quantile(values, 0.5);
  out.q3 = quantile(values, 0.75);
  return out;
}

}  // namespace vetrank::stats
