#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vetrank/model.hpp"

namespace vetrank::io {

namespace fs = std::filesystem;

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

double parse_double(std::string_view text, const std::string& where);
long parse_long(std::string_view text, const std::string& where);

struct CsvRow {
  std::size_t line = 0;  // 1-based line in the source file
  std::vector<std::string> fields;
};

struct CsvTable {
  std::string source;
  std::vector<std::string> header;
  std::vector<CsvRow> rows;

  /// Column index of `name`; throws ParseError if missing.
  std::size_t column(const std::string& name) const;
};

/// Minimal RFC 4180 reader: comma separated, optional double-quoted fields,
/// first line is the header. Blank lines are skipped.
CsvTable parse_csv(std::istream& in, const std::string& source);
CsvTable read_csv(const fs::path& path);

/// Quotes the field only when it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);

std::vector<CriterionSpec> read_criteria_json(const fs::path& path);
std::vector<CriterionSpec> parse_criteria_json(const std::string& text, const std::string& source);
std::string criteria_to_json(const std::vector<CriterionSpec>& criteria);

/// `<stem>.support.csv` next to `<stem>.csv`.
fs::path support_path(const fs::path& matrix_path);

/// Reads `alternative,<id>,...` and, if present, the support sidecar. Columns
/// are reordered to follow `criteria`; every criterion id must be present.
PerformanceMatrix read_matrix_csv(const fs::path& path, const std::vector<CriterionSpec>& criteria);
PerformanceMatrix parse_matrix_csv(std::istream& in, const std::string& source,
                                   const std::vector<CriterionSpec>& criteria);

void write_matrix_csv(std::ostream& out, const PerformanceMatrix& matrix);
void write_support_csv(std::ostream& out, const PerformanceMatrix& matrix);
/// Writes the matrix and, when it has support counts, the sidecar.
void write_matrix_files(const fs::path& path, const PerformanceMatrix& matrix);

/// All `matrix_<year>.csv` files in `dir`, keyed by year.
std::map<int, PerformanceMatrix> read_matrix_dir(const fs::path& dir,
                                                 const std::vector<CriterionSpec>& criteria);

/// `alternative,score,rank,percentile`, rows in input order.
void write_ranking_csv(std::ostream& out, const RankingResult& ranking);

/// Comma separated positive numbers, e.g. "4,2.5,1".
std::vector<double> parse_weight_list(const std::string& text);

void write_text_file(const fs::path& path, const std::string& contents);

}  // namespace vetrank::io
