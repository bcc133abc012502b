#include "vetrank/ingestion.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "vetrank/error.hpp"
#include "vetrank/stats.hpp"
#include "vetrank/topsis.hpp"
#include "vetrank/weights.hpp"

namespace vetrank::ingestion {

namespace chr = std::chrono;

Date parse_date(const std::string& text, const std::string& where) {
  int y = 0;
  unsigned m = 0, d = 0;
  char tail = 0;
  if (text.size() != 10 || std::sscanf(text.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3) {
    throw Error(ErrorKind::ParseError, where + ": bad date '" + text + "' (want YYYY-MM-DD)");
  }
  const chr::year_month_day ymd{chr::year{y}, chr::month{m}, chr::day{d}};
  if (!ymd.ok()) throw Error(ErrorKind::ParseError, where + ": invalid calendar date '" + text + "'");
  return Date{ymd};
}

std::string format_date(Date date) {
  const chr::year_month_day ymd{date};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

int year_of(Date date) { return static_cast<int>(chr::year_month_day{date}.year()); }

long days_between(Date from, Date to) { return static_cast<long>((to - from).count()); }

std::vector<DayInterval> merge_intervals(std::vector<DayInterval> intervals) {
  std::sort(intervals.begin(), intervals.end(), [](const DayInterval& a, const DayInterval& b) {
    return a.first < b.first || (a.first == b.first && a.last < b.last);
  });
  std::vector<DayInterval> out;
  for (const auto& iv : intervals) {
    if (!out.empty() && iv.first <= out.back().last + chr::days{1}) {
      out.back().last = std::max(out.back().last, iv.last);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

namespace {

std::string row_where(const io::CsvTable& t, const io::CsvRow& row) {
  return t.source + ": row " + std::to_string(row.line);
}

Date contract_last_day(const ContractRecord& c, Date observation_end) {
  return c.end_date ? std::min(*c.end_date, observation_end) : observation_end;
}

bool is_in_field(const ContractRecord& c, const std::string& family, const SectorFamilyMap& sectors) {
  const auto it = sectors.find(c.sector_code);
  return it != sectors.end() && it->second.count(family) > 0;
}

std::vector<const ContractRecord*> eligible_contracts(const LinkedPerson& person,
                                                      const GraduateRecord& program,
                                                      Date observation_end) {
  std::vector<const ContractRecord*> out;
  for (const auto& c : person.contracts) {
    if (c.start_date >= program.graduation_date && c.start_date <= observation_end) out.push_back(&c);
  }
  std::sort(out.begin(), out.end(), [&](const ContractRecord* a, const ContractRecord* b) {
    if (a->start_date != b->start_date) return a->start_date < b->start_date;
    return contract_last_day(*a, observation_end) < contract_last_day(*b, observation_end);
  });
  return out;
}

// Mean of max(0, next.start - previous.last) over consecutive contracts.
std::optional<double> mean_gap(const std::vector<const ContractRecord*>& contracts, Date observation_end) {
  if (contracts.size() < 2) return std::nullopt;
  double sum = 0.0;
  for (std::size_t k = 1; k < contracts.size(); ++k) {
    const long gap =
        days_between(contract_last_day(*contracts[k - 1], observation_end), contracts[k]->start_date);
    sum += static_cast<double>(std::max(0L, gap));
  }
  return sum / static_cast<double>(contracts.size() - 1);
}

std::optional<double> ratio(long num, long den) {
  if (den <= 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

Dataset build_dataset(const io::CsvTable& graduates, const io::CsvTable& contracts,
                      const io::CsvTable& sector_map, std::optional<Date> observation_end) {
  Dataset ds;
  std::optional<Date> latest;
  auto see = [&](Date d) {
    if (!latest || d > *latest) latest = d;
  };

  {
    const auto c_person = graduates.column("person_id");
    const auto c_program = graduates.column("program_id");
    const auto c_family = graduates.column("family_id");
    const auto c_date = graduates.column("graduation_date");
    for (const auto& row : graduates.rows) {
      const auto where = row_where(graduates, row);
      GraduateRecord g{row.fields[c_person], row.fields[c_program], row.fields[c_family],
                       parse_date(row.fields[c_date], where)};
      if (g.person_id.empty() || g.program_id.empty()) {
        throw Error(ErrorKind::ParseError, where + ": empty person_id or program_id");
      }
      const auto [it, inserted] = ds.program_family.emplace(g.program_id, g.family_id);
      if (!inserted && it->second != g.family_id) {
        throw Error(ErrorKind::ParseError, where + ": program '" + g.program_id +
                                               "' listed under two families");
      }
      see(g.graduation_date);
      auto& person = ds.persons[g.person_id];
      person.person_id = g.person_id;
      person.graduations.push_back(std::move(g));
    }
  }

  {
    const auto c_sector = sector_map.column("sector_code");
    const auto c_family = sector_map.column("family_id");
    for (const auto& row : sector_map.rows) {
      ds.sector_map[row.fields[c_sector]].insert(row.fields[c_family]);
    }
  }

  {
    const auto c_person = contracts.column("person_id");
    const auto c_start = contracts.column("start_date");
    const auto c_end = contracts.column("end_date");
    const auto c_type = contracts.column("contract_type");
    const auto c_sector = contracts.column("sector_code");
    for (const auto& row : contracts.rows) {
      const auto where = row_where(contracts, row);
      ContractRecord c;
      c.person_id = row.fields[c_person];
      c.start_date = parse_date(row.fields[c_start], where);
      if (!row.fields[c_end].empty()) c.end_date = parse_date(row.fields[c_end], where);
      const auto& type = row.fields[c_type];
      if (type == "T") {
        c.type = ContractType::Temporary;
      } else if (type == "I") {
        c.type = ContractType::Indefinite;
      } else {
        throw Error(ErrorKind::ParseError, where + ": contract_type must be T or I, got '" + type + "'");
      }
      c.sector_code = row.fields[c_sector];
      if (c.end_date && *c.end_date < c.start_date) {
        throw Error(ErrorKind::ParseError, where + ": end_date before start_date");
      }
      see(c.start_date);
      if (c.end_date) see(*c.end_date);

      const auto it = ds.persons.find(c.person_id);
      if (it == ds.persons.end()) {
        ++ds.orphan_contracts;
        continue;
      }
      if (!ds.sector_map.count(c.sector_code)) ds.unknown_sectors.insert(c.sector_code);
      it->second.contracts.push_back(std::move(c));
    }
  }

  if (!latest && !observation_end) throw Error(ErrorKind::ParseError, "no dated records found");
  ds.observation_end = observation_end ? *observation_end : *latest;

  for (auto& [id, person] : ds.persons) {
    auto& list = person.contracts;
    std::stable_sort(list.begin(), list.end(), [](const ContractRecord& a, const ContractRecord& b) {
      if (a.start_date != b.start_date) return a.start_date < b.start_date;
      if (a.end_date != b.end_date) return a.end_date < b.end_date;
      if (a.type != b.type) return a.type < b.type;
      return a.sector_code < b.sector_code;
    });
    const auto before = list.size();
    list.erase(std::unique(list.begin(), list.end()), list.end());
    ds.duplicate_contracts += before - list.size();

    std::vector<DayInterval> spans;
    for (const auto& c : list) {
      if (c.start_date > ds.observation_end) continue;
      spans.push_back({c.start_date, contract_last_day(c, ds.observation_end)});
    }
    person.labor_intervals = merge_intervals(std::move(spans));
    std::sort(person.graduations.begin(), person.graduations.end(),
              [](const GraduateRecord& a, const GraduateRecord& b) {
                if (a.program_id != b.program_id) return a.program_id < b.program_id;
                return a.graduation_date < b.graduation_date;
              });
  }
  return ds;
}

Dataset load_datasets(const std::filesystem::path& graduates_csv,
                      const std::filesystem::path& contracts_csv,
                      const std::filesystem::path& sector_map_csv, std::optional<Date> observation_end) {
  return build_dataset(io::read_csv(graduates_csv), io::read_csv(contracts_csv),
                       io::read_csv(sector_map_csv), observation_end);
}

std::vector<CriterionSpec> default_criteria() {
  return {
      {"C1", "Days from graduation to first in-field contract", Direction::Cost, 4.0},
      {"C2", "Mean days between consecutive in-field contracts", Direction::Cost, 2.5},
      {"C3", "Fraction of worked days in-field", Direction::Benefit, 1.0},
      {"C4", "Fraction of in-field worked days under temporary contracts", Direction::Cost, 1.0},
      {"C5", "Days from graduation to first contract", Direction::Cost, 3.0},
      {"C6", "Mean days between consecutive contracts", Direction::Cost, 2.0},
      {"C7", "Fraction of worked days under temporary contracts", Direction::Cost, 1.0},
      {"C8", "Days without contract since graduation", Direction::Cost, 1.0},
  };
}

LaborDays labor_days(const LinkedPerson& person, const GraduateRecord& program,
                     const SectorFamilyMap& sector_map, Date observation_end) {
  LaborDays out;
  out.window = std::max(0L, days_between(program.graduation_date, observation_end));

  struct Clipped {
    Date first;
    Date last;
    bool in_field;
    bool temporary;
  };
  std::vector<Clipped> clipped;
  const Date window_first = program.graduation_date + chr::days{1};
  for (const auto* c : eligible_contracts(person, program, observation_end)) {
    const Date first = std::max(c->start_date, window_first);
    const Date last = contract_last_day(*c, observation_end);
    if (last < first) continue;
    clipped.push_back({first, last, is_in_field(*c, program.family_id, sector_map),
                       c->type == ContractType::Temporary});
  }

  // Elementary segments between interval boundaries carry uniform coverage.
  std::vector<Date> cuts;
  for (const auto& c : clipped) {
    cuts.push_back(c.first);
    cuts.push_back(c.last + chr::days{1});
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const Date seg_first = cuts[k];
    const long length = days_between(cuts[k], cuts[k + 1]);
    bool covered = false, in_field = false, temporary = false;
    for (const auto& c : clipped) {
      if (c.first <= seg_first && seg_first <= c.last) {
        covered = true;
        in_field |= c.in_field;
        temporary |= c.temporary;
      }
    }
    if (!covered) continue;
    out.total += length;
    (in_field ? out.in_field : out.out_of_field) += length;
    if (temporary) out.temporary += length;
    if (in_field && temporary) out.in_field_temporary += length;
  }
  return out;
}

PersonCriteria person_criteria(const LinkedPerson& person, const GraduateRecord& program,
                               const SectorFamilyMap& sector_map, Date observation_end) {
  PersonCriteria out;
  out.person_id = person.person_id;
  out.program_id = program.program_id;
  out.family_id = program.family_id;
  out.graduation_year = year_of(program.graduation_date);

  const auto all = eligible_contracts(person, program, observation_end);
  std::vector<const ContractRecord*> in_field;
  for (const auto* c : all) {
    if (is_in_field(*c, program.family_id, sector_map)) in_field.push_back(c);
  }
  const auto days = labor_days(person, program, sector_map, observation_end);
  const Date grad = program.graduation_date;

  auto& v = out.values;
  if (!in_field.empty()) v[0] = static_cast<double>(days_between(grad, in_field.front()->start_date));
  v[1] = mean_gap(in_field, observation_end);
  v[2] = ratio(days.in_field, days.total);
  v[3] = ratio(days.in_field_temporary, days.in_field);
  if (!all.empty()) v[4] = static_cast<double>(days_between(grad, all.front()->start_date));
  v[5] = mean_gap(all, observation_end);
  v[6] = ratio(days.temporary, days.total);
  v[7] = static_cast<double>(days.window - days.total);
  return out;
}

std::vector<PersonCriteria> all_person_criteria(const Dataset& dataset) {
  std::vector<PersonCriteria> out;
  for (const auto& [id, person] : dataset.persons) {
    for (const auto& g : person.graduations) {
      if (g.graduation_date > dataset.observation_end) continue;
      out.push_back(person_criteria(person, g, dataset.sector_map, dataset.observation_end));
    }
  }
  return out;
}

YearAggregate aggregate(const std::vector<PersonCriteria>& persons, int year,
                        const std::vector<CriterionSpec>& criteria, const AggregateOptions& options) {
  if (criteria.size() != kNumCriteria) {
    throw Error(ErrorKind::CriteriaMismatch, "aggregation expects the 8 labor criteria");
  }
  std::map<std::string, std::array<std::vector<double>, kNumCriteria>> by_program;
  for (const auto& p : persons) {
    if (p.graduation_year != year) continue;
    auto& cells = by_program[p.program_id];
    for (std::size_t j = 0; j < kNumCriteria; ++j) {
      if (p.values[j]) cells[j].push_back(*p.values[j]);
    }
  }

  YearAggregate out;
  out.year = year;
  out.total_programs = by_program.size();
  std::vector<std::pair<std::string, std::array<double, kNumCriteria>>> kept_values;
  std::vector<std::array<long, kNumCriteria>> kept_support;
  for (const auto& [program, cells] : by_program) {
    std::array<long, kNumCriteria> support{};
    bool keep = true;
    for (std::size_t j = 0; j < kNumCriteria; ++j) {
      support[j] = static_cast<long>(cells[j].size());
      if (support[j] < options.min_support) keep = false;
    }
    if (!keep) {
      out.dropped.push_back({program, support});
      continue;
    }
    std::array<double, kNumCriteria> medians{};
    for (std::size_t j = 0; j < kNumCriteria; ++j) medians[j] = stats::median(cells[j]);
    kept_values.emplace_back(program, medians);
    kept_support.push_back(support);
  }

  auto& m = out.matrix;
  m.criteria = criteria;
  m.values = Matrix(kept_values.size(), kNumCriteria);
  CountMatrix support(kept_values.size(), kNumCriteria);
  for (std::size_t i = 0; i < kept_values.size(); ++i) {
    m.alternatives.push_back(kept_values[i].first);
    for (std::size_t j = 0; j < kNumCriteria; ++j) {
      m.values(i, j) = kept_values[i].second[j];
      support(i, j) = kept_support[i][j];
    }
  }
  m.support_counts = std::move(support);
  return out;
}

YearAggregate aggregate(const Dataset& dataset, int year, const AggregateOptions& options) {
  return aggregate(all_person_criteria(dataset), year, default_criteria(), options);
}

WindowSelection select_window(const std::map<int, YearAggregate>& yearly, std::size_t min_programs) {
  WindowSelection out;
  for (const auto& [year, agg] : yearly) {
    const std::size_t surviving = agg.matrix.num_alternatives();
    out.total_programs[year] = agg.total_programs;
    out.surviving_programs[year] = surviving;
    if (surviving < min_programs) {
      out.excluded[year] = "surviving programs " + std::to_string(surviving) + " < " +
                           std::to_string(min_programs);
      continue;
    }
    const auto violations = validate_matrix(agg.matrix);
    if (!violations.empty()) {
      std::string reason = "invalid matrix:";
      for (const auto& v : violations) reason += " " + v.describe();
      out.excluded[year] = reason;
      continue;
    }
    out.years.push_back(year);
  }
  if (out.years.empty()) {
    throw Error(ErrorKind::EmptyWindow, "no year has at least " + std::to_string(min_programs) +
                                            " programs with all criteria supported");
  }
  return out;
}

PercentilePanel percentile_panel(const std::map<int, RankingResult>& yearly,
                                 const std::map<std::string, std::string>& program_family) {
  PercentilePanel out;
  auto family_of = [&](const std::string& program) {
    const auto it = program_family.find(program);
    return it == program_family.end() ? std::string() : it->second;
  };

  std::map<std::pair<std::string, int>, std::vector<double>> family_year;
  for (const auto& [year, ranking] : yearly) {
    for (std::size_t i = 0; i < ranking.alternatives.size(); ++i) {
      const auto& program = ranking.alternatives[i];
      out.grid[program][year] = ranking.percentiles[i];
      family_year[{family_of(program), year}].push_back(ranking.percentiles[i]);
    }
  }

  for (const auto& [program, years] : out.grid) {
    double sum = 0.0;
    for (const auto& [year, p] : years) sum += p;
    out.programs.push_back({program, family_of(program), sum / static_cast<double>(years.size()),
                            years.size()});
  }
  std::stable_sort(out.programs.begin(), out.programs.end(),
                   [](const ProgramPercentile& a, const ProgramPercentile& b) {
                     return a.mean_percentile > b.mean_percentile;
                   });

  for (const auto& [key, values] : family_year) {
    FamilyYear fy;
    fy.family_id = key.first;
    fy.year = key.second;
    fy.mean = stats::mean(values);
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    fy.min = *lo;
    fy.max = *hi;
    fy.count = values.size();
    out.families.push_back(fy);
  }
  return out;
}

IngestResult ingest(const Dataset& dataset, const IngestOptions& options) {
  IngestResult out;
  out.criteria = default_criteria();
  out.program_family = dataset.program_family;
  const auto persons = all_person_criteria(dataset);
  std::set<int> years;
  for (const auto& p : persons) years.insert(p.graduation_year);
  for (int year : years) {
    out.yearly.emplace(year, aggregate(persons, year, out.criteria, {options.min_support}));
  }
  out.window = select_window(out.yearly, options.min_programs);
  return out;
}

std::map<int, PerformanceMatrix> window_matrices(const IngestResult& result) {
  std::map<int, PerformanceMatrix> out;
  for (int year : result.window.years) out.emplace(year, result.yearly.at(year).matrix);
  return out;
}

void write_percentile_panel(const std::filesystem::path& dir, const PercentilePanel& panel) {
  std::ostringstream programs;
  programs << "program_id,family_id,mean_percentile,years\n";
  for (const auto& p : panel.programs) {
    programs << io::csv_escape(p.program_id) << ',' << io::csv_escape(p.family_id) << ','
             << io::format_double(p.mean_percentile) << ',' << p.years << '\n';
  }
  io::write_text_file(dir / "percentiles.csv", programs.str());

  std::ostringstream families;
  families << "family_id,year,mean,min,max,count\n";
  for (const auto& f : panel.families) {
    families << io::csv_escape(f.family_id) << ',' << f.year << ',' << io::format_double(f.mean) << ','
             << io::format_double(f.min) << ',' << io::format_double(f.max) << ',' << f.count << '\n';
  }
  io::write_text_file(dir / "family_percentiles.csv", families.str());

  std::ostringstream grid;
  grid << "program_id,year,percentile\n";
  for (const auto& p : panel.programs) {
    for (const auto& [year, value] : panel.grid.at(p.program_id)) {
      grid << io::csv_escape(p.program_id) << ',' << year << ',' << io::format_double(value) << '\n';
    }
  }
  io::write_text_file(dir / "percentile_grid.csv", grid.str());
}

void write_ingest_outputs(const std::filesystem::path& dir, const IngestResult& result) {
  std::filesystem::create_directories(dir);
  for (int year : result.window.years) {
    io::write_matrix_files(dir / ("matrix_" + std::to_string(year) + ".csv"),
                           result.yearly.at(year).matrix);
  }
  io::write_text_file(dir / "criteria.json", io::criteria_to_json(result.criteria));

  std::ostringstream programs;
  programs << "program_id,family_id\n";
  for (const auto& [program, family] : result.program_family) {
    programs << io::csv_escape(program) << ',' << io::csv_escape(family) << '\n';
  }
  io::write_text_file(dir / "programs.csv", programs.str());

  std::ostringstream counts;
  counts << "year,total_programs,surviving_programs,retained\n";
  for (const auto& [year, total] : result.window.total_programs) {
    const bool retained = std::find(result.window.years.begin(), result.window.years.end(), year) !=
                          result.window.years.end();
    counts << year << ',' << total << ',' << result.window.surviving_programs.at(year) << ','
           << (retained ? 1 : 0) << '\n';
  }
  io::write_text_file(dir / "year_counts.csv", counts.str());

  std::ostringstream report;
  report << "year,program_id,reason,detail\n";
  for (const auto& [year, agg] : result.yearly) {
    for (const auto& d : agg.dropped) {
      std::string detail;
      for (std::size_t j = 0; j < kNumCriteria; ++j) {
        if (!detail.empty()) detail += ';';
        detail += result.criteria[j].id + "=" + std::to_string(d.support[j]);
      }
      report << year << ',' << io::csv_escape(d.program_id) << ",low_support," << io::csv_escape(detail)
             << '\n';
    }
    const auto it = result.window.excluded.find(year);
    if (it != result.window.excluded.end()) {
      report << year << ",,year_excluded," << io::csv_escape(it->second) << '\n';
    }
  }
  io::write_text_file(dir / "filter_report.csv", report.str());

  const auto w = weights::normalize(weights::relative_weights(result.criteria));
  std::map<int, RankingResult> rankings;
  for (const auto& [year, matrix] : window_matrices(result)) rankings.emplace(year, topsis::rank(matrix, w));
  write_percentile_panel(dir, percentile_panel(rankings, result.program_family));
}

std::map<std::string, std::string> read_program_families(const std::filesystem::path& path) {
  const auto table = io::read_csv(path);
  const auto c_program = table.column("program_id");
  const auto c_family = table.column("family_id");
  std::map<std::string, std::string> out;
  for (const auto& row : table.rows) out[row.fields[c_program]] = row.fields[c_family];
  return out;
}

}  // namespace vetrank::ingestion
