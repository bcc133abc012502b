#pragma once

#include <span>
#include <vector>

namespace vetrank::stats {

double mean(std::span<const double> values);

/// Population variance (divides by the count). Exactly 0 for constant input.
double variance(std::span<const double> values);

/// Median; even counts average the two middle order statistics.
double median(std::vector<double> values);

/// Quantile by linear interpolation between order statistics
/// (position p * (n - 1) in the sorted sample).
double quantile(std::vector<double> values, double p);

struct FiveNumber {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

FiveNumber five_number(std::vector<double> values);

}  // namespace vetrank::stats
