#include "vetrank/model.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "vetrank/error.hpp"

namespace vetrank {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidMatrix: return "InvalidMatrix";
    case ErrorKind::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NotAPermutation: return "NotAPermutation";
    case ErrorKind::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorKind::TooFewCriteria: return "TooFewCriteria";
    case ErrorKind::CriteriaMismatch: return "CriteriaMismatch";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::ZeroOutputVariance: return "ZeroOutputVariance";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::EmptyWindow: return "EmptyWindow";
  }
  return "Unknown";
}

const char* to_string(Direction direction) {
  return direction == Direction::Benefit ? "benefit" : "cost";
}

Direction parse_direction(const std::string& text) {
  if (text == "benefit") return Direction::Benefit;
  if (text == "cost") return Direction::Cost;
  throw Error(ErrorKind::ParseError, "unknown criterion direction '" + text + "'");
}

std::vector<Direction> PerformanceMatrix::directions() const {
  std::vector<Direction> out;
  out.reserve(criteria.size());
  for (const auto& c : criteria) out.push_back(c.direction);
  return out;
}

double percentile_from_rank(int rank, std::size_t m) {
  if (m < 2) return 1.0;
  const auto denom = static_cast<double>(m) - 1.0;
  return (static_cast<double>(m) - static_cast<double>(rank)) / denom;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::TooFewAlternatives: return "TooFewAlternatives";
    case ViolationKind::NoCriteria: return "NoCriteria";
    case ViolationKind::ShapeMismatch: return "ShapeMismatch";
    case ViolationKind::NonFiniteValue: return "NonFiniteValue";
    case ViolationKind::DuplicateAlternativeId: return "DuplicateAlternativeId";
    case ViolationKind::DuplicateCriterionId: return "DuplicateCriterionId";
    case ViolationKind::NonPositiveRelativeWeight: return "NonPositiveRelativeWeight";
    case ViolationKind::NegativeSupportCount: return "NegativeSupportCount";
    case ViolationKind::ZeroColumn: return "ZeroColumn";
    case ViolationKind::DegenerateColumn: return "DegenerateColumn";
  }
  return "Unknown";
}

std::string Violation::describe() const {
  std::ostringstream os;
  os << to_string(kind);
  if (row != 0 || col != 0) {
    os << '{';
    if (row != 0) os << "row:" << row;
    if (row != 0 && col != 0) os << ',';
    if (col != 0) os << "col:" << col;
    os << '}';
  }
  if (!detail.empty()) os << ": " << detail;
  return os.str();
}

std::vector<Violation> validate_matrix(const PerformanceMatrix& matrix) {
  std::vector<Violation> out;
  const std::size_t m = matrix.alternatives.size();
  const std::size_t n = matrix.criteria.size();

  if (m < 2) out.push_back({ViolationKind::TooFewAlternatives, 0, 0, "need at least 2 alternatives"});
  if (n < 1) out.push_back({ViolationKind::NoCriteria, 0, 0, "need at least 1 criterion"});
  if (matrix.values.rows() != m || matrix.values.cols() != n) {
    out.push_back({ViolationKind::ShapeMismatch, 0, 0, "values shape does not match ids"});
    return out;
  }
  if (matrix.support_counts &&
      (matrix.support_counts->rows() != m || matrix.support_counts->cols() != n)) {
    out.push_back({ViolationKind::ShapeMismatch, 0, 0, "support counts shape does not match values"});
  }

  std::set<std::string> seen;
  for (std::size_t i = 0; i < m; ++i) {
    if (!seen.insert(matrix.alternatives[i]).second) {
      out.push_back({ViolationKind::DuplicateAlternativeId, i + 1, 0, matrix.alternatives[i]});
    }
  }
  seen.clear();
  for (std::size_t j = 0; j < n; ++j) {
    const auto& c = matrix.criteria[j];
    if (!seen.insert(c.id).second) {
      out.push_back({ViolationKind::DuplicateCriterionId, 0, j + 1, c.id});
    }
    if (!(c.relative_weight > 0.0) || !std::isfinite(c.relative_weight)) {
      out.push_back({ViolationKind::NonPositiveRelativeWeight, 0, j + 1, c.id});
    }
  }

  for (std::size_t j = 0; j < n; ++j) {
    bool column_finite = true;
    for (std::size_t i = 0; i < m; ++i) {
      if (!std::isfinite(matrix.values(i, j))) {
        out.push_back({ViolationKind::NonFiniteValue, i + 1, j + 1, {}});
        column_finite = false;
      }
      if (matrix.support_counts && matrix.support_counts->cols() == n &&
          matrix.support_counts->rows() == m && (*matrix.support_counts)(i, j) < 0) {
        out.push_back({ViolationKind::NegativeSupportCount, i + 1, j + 1, {}});
      }
    }
    if (!column_finite || m == 0) continue;

    double sum_sq = 0.0;
    bool all_equal = true;
    for (std::size_t i = 0; i < m; ++i) {
      sum_sq += matrix.values(i, j) * matrix.values(i, j);
      if (matrix.values(i, j) != matrix.values(0, j)) all_equal = false;
    }
    if (sum_sq == 0.0) {
      out.push_back({ViolationKind::ZeroColumn, 0, j + 1, matrix.criteria[j].id});
    } else if (all_equal && m >= 2) {
      out.push_back({ViolationKind::DegenerateColumn, 0, j + 1, matrix.criteria[j].id});
    }
  }
  return out;
}

void require_valid(const PerformanceMatrix& matrix) {
  const auto violations = validate_matrix(matrix);
  if (violations.empty()) return;
  std::string message = "invalid performance matrix:";
  for (const auto& v : violations) message += " " + v.describe() + ";";
  throw Error(ErrorKind::InvalidMatrix, message);
}

}  // namespace vetrank
