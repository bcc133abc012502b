#pragma once

#include <array>
#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vetrank/io.hpp"
#include "vetrank/model.hpp"

namespace vetrank::ingestion {

using Date = std::chrono::sys_days;

/// Parses an ISO-8601 calendar date (YYYY-MM-DD).
Date parse_date(const std::string& text, const std::string& where);
std::string format_date(Date date);
int year_of(Date date);
/// Whole days from `from` to `to` (negative if `to` is earlier).
long days_between(Date from, Date to);

struct GraduateRecord {
  std::string person_id;
  std::string program_id;
  std::string family_id;
  Date graduation_date;
};

enum class ContractType { Temporary, Indefinite };

struct ContractRecord {
  std::string person_id;
  Date start_date;
  std::optional<Date> end_date;  // empty: open-ended
  ContractType type = ContractType::Temporary;
  std::string sector_code;

  bool operator==(const ContractRecord&) const = default;
};

/// Inclusive range of calendar days.
struct DayInterval {
  Date first;
  Date last;

  long days() const { return days_between(first, last) + 1; }
  bool operator==(const DayInterval&) const = default;
};

/// Sector code -> professional families it serves (many-to-many).
using SectorFamilyMap = std::map<std::string, std::set<std::string>>;

struct LinkedPerson {
  std::string person_id;
  std::vector<GraduateRecord> graduations;
  std::vector<ContractRecord> contracts;      // exact duplicates removed, sorted by start
  std::vector<DayInterval> labor_intervals;   // union of all contracts, capped at observation end
};

struct Dataset {
  std::map<std::string, LinkedPerson> persons;
  SectorFamilyMap sector_map;
  std::map<std::string, std::string> program_family;
  Date observation_end;
  std::size_t orphan_contracts = 0;
  std::size_t duplicate_contracts = 0;
  std::set<std::string> unknown_sectors;
};

/// Union of inclusive day intervals; touching intervals are joined.
std::vector<DayInterval> merge_intervals(std::vector<DayInterval> intervals);

/// Joins the three tables on person id. Contracts of persons absent from the
/// graduates table are counted and skipped. `observation_end` defaults to the
/// latest date appearing anywhere in the data.
Dataset build_dataset(const io::CsvTable& graduates, const io::CsvTable& contracts,
                      const io::CsvTable& sector_map, std::optional<Date> observation_end = {});

Dataset load_datasets(const std::filesystem::path& graduates_csv,
                      const std::filesystem::path& contracts_csv,
                      const std::filesystem::path& sector_map_csv,
                      std::optional<Date> observation_end = {});

inline constexpr std::size_t kNumCriteria = 8;

/// C1..C8 with their directions and the expert relative weights
/// (4, 2.5, 1, 1, 3, 2, 1, 1). C3 is the only benefit criterion.
std::vector<CriterionSpec> default_criteria();

struct PersonCriteria {
  std::string person_id;
  std::string program_id;
  std::string family_id;
  int graduation_year = 0;
  std::array<std::optional<double>, kNumCriteria> values;  // empty: undefined
};

// Worked days after graduation, on the merged timeline. A day is in-field if
// any contract covering it is in-field, temporary if any covering contract is
// temporary, and in-field temporary when it is both.
struct LaborDays {
  long window = 0;  // days in (graduation, observation_end]
  long total = 0;
  long in_field = 0;
  long out_of_field = 0;
  long temporary = 0;
  long in_field_temporary = 0;
};

LaborDays labor_days(const LinkedPerson& person, const GraduateRecord& program,
                     const SectorFamilyMap& sector_map, Date observation_end);

/// Criteria of one (person, program) pair. Only contracts starting on or after
/// the graduation date and no later than `observation_end` are considered.
PersonCriteria person_criteria(const LinkedPerson& person, const GraduateRecord& program,
                               const SectorFamilyMap& sector_map, Date observation_end);

/// Criteria for every graduation in the dataset, ordered by person then program.
std::vector<PersonCriteria> all_person_criteria(const Dataset& dataset);

struct DroppedProgram {
  std::string program_id;
  std::array<long, kNumCriteria> support{};
};

struct YearAggregate {
  int year = 0;
  std::size_t total_programs = 0;   // programs with any graduate that year
  PerformanceMatrix matrix;         // surviving programs, sorted by id
  std::vector<DroppedProgram> dropped;
};

struct AggregateOptions {
  long min_support = 6;  // a cell needs more than 5 defined person values
};

/// Median per program and criterion over persons graduating in `year`.
YearAggregate aggregate(const std::vector<PersonCriteria>& persons, int year,
                        const std::vector<CriterionSpec>& criteria,
                        const AggregateOptions& options = {});

YearAggregate aggregate(const Dataset& dataset, int year, const AggregateOptions& options = {});

struct WindowSelection {
  std::vector<int> years;  // retained, ascending
  std::map<int, std::size_t> total_programs;
  std::map<int, std::size_t> surviving_programs;
  std::map<int, std::string> excluded;  // year -> reason
};

/// Keeps years with at least `min_programs` surviving programs and a matrix
/// that passes validation. Throws EmptyWindow when nothing qualifies.
WindowSelection select_window(const std::map<int, YearAggregate>& yearly, std::size_t min_programs = 30);

struct ProgramPercentile {
  std::string program_id;
  std::string family_id;
  double mean_percentile = 0.0;
  std::size_t years = 0;
};

struct FamilyYear {
  std::string family_id;
  int year = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

struct PercentilePanel {
  std::vector<ProgramPercentile> programs;  // descending mean percentile
  std::vector<FamilyYear> families;         // by family, then year
  std::map<std::string, std::map<int, double>> grid;  // program -> year -> percentile
};

/// Programs missing from `program_family` are grouped under an empty family id.
PercentilePanel percentile_panel(const std::map<int, RankingResult>& yearly,
                                 const std::map<std::string, std::string>& program_family);

struct IngestOptions {
  long min_support = 6;
  std::size_t min_programs = 30;
};

struct IngestResult {
  std::vector<CriterionSpec> criteria;
  std::map<int, YearAggregate> yearly;
  WindowSelection window;
  std::map<std::string, std::string> program_family;
};

/// Criteria, aggregation and window selection for every graduation year.
IngestResult ingest(const Dataset& dataset, const IngestOptions& options = {});

/// Retained yearly matrices keyed by year.
std::map<int, PerformanceMatrix> window_matrices(const IngestResult& result);

/// Writes matrix_<year>.csv (+ .support.csv) per retained year, criteria.json,
/// programs.csv, year_counts.csv, filter_report.csv, and percentiles.csv /
/// family_percentiles.csv ranked under the criteria's relative weights.
void write_ingest_outputs(const std::filesystem::path& dir, const IngestResult& result);

/// Program -> family table from `programs.csv` (`program_id,family_id`).
std::map<std::string, std::string> read_program_families(const std::filesystem::path& path);

void write_percentile_panel(const std::filesystem::path& dir, const PercentilePanel& panel);

}  // namespace vetrank::ingestion
