#include "vetrank/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "vetrank/error.hpp"

namespace vetrank::io {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

double parse_double(std::string_view text, const std::string& where) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorKind::ParseError, where + ": not a number: '" + std::string(text) + "'");
  }
  return value;
}

long parse_long(std::string_view text, const std::string& where) {
  text = trim(text);
  long value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorKind::ParseError, where + ": not an integer: '" + std::string(text) + "'");
  }
  return value;
}

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw Error(ErrorKind::ParseError, source + ": missing column '" + name + "'");
  }
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable parse_csv(std::istream& in, const std::string& source) {
  CsvTable table;
  table.source = source;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;

    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          field += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.push_back(std::string(trim(field)));
        field.clear();
      } else {
        field += c;
      }
    }
    if (quoted) {
      throw Error(ErrorKind::ParseError,
                  source + ": row " + std::to_string(line_no) + ": unterminated quoted field");
    }
    fields.push_back(std::string(trim(field)));

    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw Error(ErrorKind::ParseError, source + ": row " + std::to_string(line_no) + ": expected " +
                                             std::to_string(table.header.size()) + " fields, got " +
                                             std::to_string(fields.size()));
    }
    table.rows.push_back({line_no, std::move(fields)});
  }
  if (!have_header) throw Error(ErrorKind::ParseError, source + ": empty file (no header)");
  return table;
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, path.string() + ": cannot open file");
  return parse_csv(in, path.string());
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<CriterionSpec> parse_criteria_json(const std::string& text, const std::string& source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, source + ": " + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorKind::ParseError, source + ": expected a JSON array");
  std::vector<CriterionSpec> out;
  for (std::size_t k = 0; k < doc.size(); ++k) {
    const auto& item = doc[k];
    const std::string where = source + ": criterion " + std::to_string(k + 1);
    try {
      CriterionSpec c;
      c.id = item.at("id").get<std::string>();
      c.label = item.value("label", c.id);
      c.direction = parse_direction(item.at("direction").get<std::string>());
      c.relative_weight = item.value("relative_weight", 1.0);
      if (!(c.relative_weight > 0.0)) {
        throw Error(ErrorKind::NonPositiveWeight, where + ": relative_weight must be > 0");
      }
      out.push_back(std::move(c));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::ParseError, where + ": " + e.what());
    }
  }
  for (std::size_t a = 0; a < out.size(); ++a) {
    for (std::size_t b = a + 1; b < out.size(); ++b) {
      if (out[a].id == out[b].id) {
        throw Error(ErrorKind::ParseError, source + ": duplicate criterion id '" + out[a].id + "'");
      }
    }
  }
  return out;
}

std::vector<CriterionSpec> read_criteria_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, path.string() + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_criteria_json(buf.str(), path.string());
}

std::string criteria_to_json(const std::vector<CriterionSpec>& criteria) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& c : criteria) {
    doc.push_back({{"id", c.id},
                   {"label", c.label},
                   {"direction", to_string(c.direction)},
                   {"relative_weight", c.relative_weight}});
  }
  return doc.dump(2) + "\n";
}

fs::path support_path(const fs::path& matrix_path) {
  auto out = matrix_path;
  out.replace_filename(matrix_path.stem().string() + ".support.csv");
  return out;
}

PerformanceMatrix parse_matrix_csv(std::istream& in, const std::string& source,
                                   const std::vector<CriterionSpec>& criteria) {
  const auto table = parse_csv(in, source);
  if (table.header.empty() || table.header.front() != "alternative") {
    throw Error(ErrorKind::ParseError, source + ": first column must be 'alternative'");
  }
  if (table.header.size() != criteria.size() + 1) {
    throw Error(ErrorKind::ParseError, source + ": expected " + std::to_string(criteria.size()) +
                                           " criterion columns, got " +
                                           std::to_string(table.header.size() - 1));
  }
  std::vector<std::size_t> col_of(criteria.size());
  for (std::size_t j = 0; j < criteria.size(); ++j) col_of[j] = table.column(criteria[j].id);

  PerformanceMatrix out;
  out.criteria = criteria;
  out.values = Matrix(table.rows.size(), criteria.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    out.alternatives.push_back(row.fields[0]);
    for (std::size_t j = 0; j < criteria.size(); ++j) {
      out.values(i, j) = parse_double(row.fields[col_of[j]],
                                      source + ": row " + std::to_string(row.line) + ", column " +
                                          criteria[j].id);
    }
  }
  return out;
}

PerformanceMatrix read_matrix_csv(const fs::path& path, const std::vector<CriterionSpec>& criteria) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, path.string() + ": cannot open file");
  auto out = parse_matrix_csv(in, path.string(), criteria);

  const auto sidecar = support_path(path);
  if (fs::exists(sidecar)) {
    std::ifstream sin(sidecar);
    const auto counts = parse_matrix_csv(sin, sidecar.string(), criteria);
    if (counts.alternatives != out.alternatives) {
      throw Error(ErrorKind::ParseError, sidecar.string() + ": alternatives differ from " + path.string());
    }
    CountMatrix support(counts.values.rows(), counts.values.cols());
    for (std::size_t i = 0; i < support.rows(); ++i) {
      for (std::size_t j = 0; j < support.cols(); ++j) {
        support(i, j) = static_cast<long>(counts.values(i, j));
      }
    }
    out.support_counts = std::move(support);
  }
  return out;
}

namespace {

template <typename Cell>
void write_grid(std::ostream& out, const PerformanceMatrix& matrix, Cell cell) {
  out << "alternative";
  for (const auto& c : matrix.criteria) out << ',' << csv_escape(c.id);
  out << '\n';
  for (std::size_t i = 0; i < matrix.num_alternatives(); ++i) {
    out << csv_escape(matrix.alternatives[i]);
    for (std::size_t j = 0; j < matrix.num_criteria(); ++j) out << ',' << cell(i, j);
    out << '\n';
  }
}

}  // namespace

void write_matrix_csv(std::ostream& out, const PerformanceMatrix& matrix) {
  write_grid(out, matrix, [&](std::size_t i, std::size_t j) { return format_double(matrix.values(i, j)); });
}

void write_support_csv(std::ostream& out, const PerformanceMatrix& matrix) {
  if (!matrix.support_counts) return;
  write_grid(out, matrix,
             [&](std::size_t i, std::size_t j) { return std::to_string((*matrix.support_counts)(i, j)); });
}

void write_matrix_files(const fs::path& path, const PerformanceMatrix& matrix) {
  std::ostringstream body;
  write_matrix_csv(body, matrix);
  write_text_file(path, body.str());
  if (matrix.support_counts) {
    std::ostringstream support;
    write_support_csv(support, matrix);
    write_text_file(support_path(path), support.str());
  }
}

std::map<int, PerformanceMatrix> read_matrix_dir(const fs::path& dir,
                                                 const std::vector<CriterionSpec>& criteria) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorKind::ParseError, dir.string() + ": not a directory");
  }
  static const std::regex pattern(R"(matrix_(-?\d+)\.csv)");
  std::map<int, PerformanceMatrix> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    std::smatch match;
    if (!std::regex_match(name, match, pattern)) continue;
    const int year = static_cast<int>(parse_long(match[1].str(), name));
    out.emplace(year, read_matrix_csv(entry.path(), criteria));
  }
  if (out.empty()) {
    throw Error(ErrorKind::ParseError, dir.string() + ": no matrix_<year>.csv files found");
  }
  return out;
}

void write_ranking_csv(std::ostream& out, const RankingResult& ranking) {
  out << "alternative,score,rank,percentile\n";
  for (std::size_t i = 0; i < ranking.alternatives.size(); ++i) {
    out << csv_escape(ranking.alternatives[i]) << ',' << format_double(ranking.scores[i]) << ','
        << ranking.ranks[i] << ',' << format_double(ranking.percentiles[i]) << '\n';
  }
}

std::vector<double> parse_weight_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, "weights"));
  if (out.empty()) throw Error(ErrorKind::ParseError, "weights: empty list");
  return out;
}

void write_text_file(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::ParseError, path.string() + ": cannot open for writing");
  out << contents;
}

}  // namespace vetrank::io
