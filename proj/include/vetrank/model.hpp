#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vetrank {

enum class Direction { Benefit, Cost };

const char* to_string(Direction direction);
Direction parse_direction(const std::string& text);

struct CriterionSpec {
  std::string id;
  std::string label;
  Direction direction = Direction::Benefit;
  double relative_weight = 1.0;
};

/// Dense row-major matrix. Rows are alternatives, columns criteria.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const T> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::vector<T> column(std::size_t j) const {
    std::vector<T> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  const std::vector<T>& data() const noexcept { return data_; }

  bool operator==(const Grid&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using Matrix = Grid<double>;
using CountMatrix = Grid<long>;

struct PerformanceMatrix {
  std::vector<std::string> alternatives;
  std::vector<CriterionSpec> criteria;
  Matrix values;
  std::optional<CountMatrix> support_counts;

  std::size_t num_alternatives() const noexcept { return alternatives.size(); }
  std::size_t num_criteria() const noexcept { return criteria.size(); }
  std::vector<Direction> directions() const;
};

/// Normalized absolute weights: all positive, summing to one.
struct WeightVector {
  std::vector<double> absolute;

  std::size_t size() const noexcept { return absolute.size(); }
  double operator[](std::size_t j) const { return absolute[j]; }
};

struct RankingResult {
  std::vector<std::string> alternatives;
  std::vector<double> scores;
  std::vector<int> ranks;  // 1 = best
  std::vector<double> percentiles;
};

/// Percentile of rank `rank` among `m` alternatives: best 1.0, worst 0.0.
double percentile_from_rank(int rank, std::size_t m);

enum class ViolationKind {
  TooFewAlternatives,
  NoCriteria,
  ShapeMismatch,
  NonFiniteValue,
  DuplicateAlternativeId,
  DuplicateCriterionId,
  NonPositiveRelativeWeight,
  NegativeSupportCount,
  ZeroColumn,
  DegenerateColumn,
};

const char* to_string(ViolationKind kind);

// Row and column are 1-based to match what an analyst sees in the CSV; 0 means
// "not applicable".
struct Violation {
  ViolationKind kind;
  std::size_t row = 0;
  std::size_t col = 0;
  std::string detail;

  std::string describe() const;
  bool operator==(const Violation&) const = default;
};

/// Checks every structural and numeric invariant of a performance matrix.
/// Returns an empty list when the matrix is usable by the ranking routines.
std::vector<Violation> validate_matrix(const PerformanceMatrix& matrix);

/// Throws Error(InvalidMatrix) listing all violations, if any.
void require_valid(const PerformanceMatrix& matrix);

}  // namespace vetrank
