#include <doctest.h>

#include <sstream>

#include "../support/handcalc.hpp"
#include "../support/oracles.hpp"
#include "vetrank/error.hpp"
#include "vetrank/fixtures.hpp"
#include "vetrank/ingestion.hpp"
#include "vetrank/io.hpp"

using namespace vetrank;
using namespace vetrank::ingestion;

namespace {

io::CsvTable table(const std::string& text) {
  std::istringstream in(text);
  return io::parse_csv(in, "mem");
}

Date d(const char* s) { return parse_date(s, "test"); }

PersonCriteria person(const std::string& id, const std::string& program, int year,
                      std::optional<double> value = 1.0) {
  PersonCriteria p;
  p.person_id = id;
  p.program_id = program;
  p.graduation_year = year;
  for (auto& v : p.values) v = value;
  return p;
}

// `programs` programs each with six fully defined graduates; values vary by
// program so no column is constant.
std::vector<PersonCriteria> population(int year, int programs) {
  std::vector<PersonCriteria> out;
  for (int p = 0; p < programs; ++p) {
    for (int k = 0; k < 6; ++k) {
      out.push_back(person("n" + std::to_string(p) + "_" + std::to_string(k), "P" + std::to_string(100 + p), year,
                           1.0 + p + k));
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("ingestion") {
  TEST_CASE("dates") {
    CHECK(format_date(d("2016-02-29")) == "2016-02-29");
    CHECK(days_between(d("2015-06-30"), d("2016-12-31")) == 550);
    CHECK(year_of(d("2014-01-01")) == 2014);
    CHECK_THROWS_AS(d("2015-02-30"), Error);
    CHECK_THROWS_AS(d("2015/01/01"), Error);
  }

  TEST_CASE("interval union") {
    const auto merged = merge_intervals({{d("2015-02-01"), d("2015-04-01")}, {d("2015-01-01"), d("2015-03-01")}});
    REQUIRE(merged.size() == 1);
    CHECK(merged[0] == DayInterval{d("2015-01-01"), d("2015-04-01")});
    const auto touching = merge_intervals({{d("2015-01-01"), d("2015-01-31")}, {d("2015-02-01"), d("2015-02-10")}});
    CHECK(touching.size() == 1);
    const auto apart = merge_intervals({{d("2015-01-01"), d("2015-01-30")}, {d("2015-02-01"), d("2015-02-10")}});
    CHECK(apart.size() == 2);
  }

  TEST_CASE("overlapping contracts keep both records") {
    const auto ds = build_dataset(
        table("person_id,program_id,family_id,graduation_date\nA,P,F,2014-06-30\n"),
        table("person_id,start_date,end_date,contract_type,sector_code\n"
              "A,2015-01-01,2015-03-01,T,S\nA,2015-02-01,2015-04-01,I,S\nA,2015-02-01,2015-04-01,I,S\n"),
        table("sector_code,family_id\nS,F\n"), d("2016-12-31"));
    const auto& a = ds.persons.at("A");
    CHECK(a.contracts.size() == 2);
    CHECK(ds.duplicate_contracts == 1);
    REQUIRE(a.labor_intervals.size() == 1);
    CHECK(a.labor_intervals[0] == DayInterval{d("2015-01-01"), d("2015-04-01")});
  }

  TEST_CASE("empty contracts file") {
    const auto ds = build_dataset(
        table("person_id,program_id,family_id,graduation_date\nA,P,F,2014-06-30\nB,P,F,2014-06-30\n"),
        table("person_id,start_date,end_date,contract_type,sector_code\n"),
        table("sector_code,family_id\nS,F\n"), d("2016-12-31"));
    for (const auto& [id, p] : ds.persons) {
      CHECK(p.contracts.empty());
      CHECK(p.labor_intervals.empty());
      const auto c = person_criteria(p, p.graduations[0], ds.sector_map, ds.observation_end);
      for (std::size_t j = 0; j < 7; ++j) CHECK_FALSE(c.values[j].has_value());
      CHECK(*c.values[7] == double(days_between(d("2014-06-30"), d("2016-12-31"))));
    }
  }

  TEST_CASE("malformed rows name the file and line") {
    try {
      build_dataset(table("person_id,program_id,family_id,graduation_date\nA,P,F,2014-06-30\n"),
                    table("person_id,start_date,end_date,contract_type,sector_code\nA,2015-01-01,,X,S\n"),
                    table("sector_code,family_id\n"));
      FAIL("expected ParseError");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ParseError);
      CHECK(std::string(e.what()).find("mem: row 2") != std::string::npos);
    }
  }

  TEST_CASE("hand-calculated fixture") {
    const auto ds = handcalc::load();
    CHECK(ds.orphan_contracts == 1);
    CHECK(ds.duplicate_contracts == 1);
    CHECK(ds.unknown_sectors == std::set<std::string>{"G"});
    const auto want = handcalc::expected();
    const auto got = all_person_criteria(ds);
    CHECK(got.size() == want.size());
    for (const auto& p : got) {
      const auto it = want.find({p.person_id, p.program_id});
      REQUIRE_MESSAGE(it != want.end(), p.person_id);
      for (std::size_t j = 0; j < kNumCriteria; ++j) {
        INFO(p.person_id, " ", p.program_id, " C", j + 1);
        CHECK(p.values[j].has_value() == it->second[j].has_value());
        if (p.values[j] && it->second[j]) CHECK(*p.values[j] == *it->second[j]);
      }
    }
  }

  TEST_CASE("day counts agree with a day-by-day walk") {
    fixtures::RecordOptions opts;
    opts.persons = 150;
    const auto files = fixtures::generate_records(opts);
    const auto ds = build_dataset(table(files.graduates), table(files.contracts), table(files.sector_map));
    for (const auto& [id, p] : ds.persons) {
      for (const auto& g : p.graduations) {
        const auto got = labor_days(p, g, ds.sector_map, ds.observation_end);
        const auto want = oracle::day_by_day(p.contracts, g, ds.sector_map, ds.observation_end);
        CHECK(got.window == want.window);
        CHECK(got.total == want.total);
        CHECK(got.in_field == want.in_field);
        CHECK(got.temporary == want.temporary);
        CHECK(got.in_field_temporary == want.in_field_temporary);
        CHECK(got.in_field + got.out_of_field == got.total);
        const auto c = person_criteria(p, g, ds.sector_map, ds.observation_end);
        CHECK(*c.values[7] + double(got.total) == double(got.window));
        for (std::size_t j : {2, 3, 6}) {
          if (c.values[j]) {
            CHECK(*c.values[j] >= 0.0);
            CHECK(*c.values[j] <= 1.0);
          }
        }
      }
    }
  }

  TEST_CASE("saturated person") {
    const auto ds = build_dataset(
        table("person_id,program_id,family_id,graduation_date\nA,P,F,2015-06-30\n"),
        table("person_id,start_date,end_date,contract_type,sector_code\nA,2015-07-01,,T,S\n"),
        table("sector_code,family_id\nS,F\n"), d("2016-12-31"));
    const auto& a = ds.persons.at("A");
    const auto c = person_criteria(a, a.graduations[0], ds.sector_map, ds.observation_end);
    CHECK(*c.values[0] == 1);
    CHECK_FALSE(c.values[1].has_value());
    CHECK(*c.values[2] == 1);
    CHECK(*c.values[3] == 1);
    CHECK(*c.values[4] == 1);
    CHECK_FALSE(c.values[5].has_value());
    CHECK(*c.values[6] == 1);
    CHECK(*c.values[7] == 0);
  }

  TEST_CASE("median cell and support rule") {
    auto crit = default_criteria();
    std::vector<PersonCriteria> ps;
    for (int k = 1; k <= 6; ++k) {
      auto p = person("a" + std::to_string(k), "SIX", 2015, 1.0);
      p.values[0] = 10.0 * k;
      ps.push_back(p);
    }
    for (int k = 1; k <= 5; ++k) ps.push_back(person("b" + std::to_string(k), "FIVE", 2015));
    for (int k = 1; k <= 7; ++k) {
      auto p = person("c" + std::to_string(k), "SPARSE", 2015);
      if (k > 4) p.values[1].reset();
      ps.push_back(p);
    }
    ps.push_back(person("z", "SIX", 2016));
    const auto agg = aggregate(ps, 2015, crit);
    CHECK(agg.total_programs == 3);
    REQUIRE(agg.matrix.alternatives == std::vector<std::string>{"SIX"});
    CHECK(agg.matrix.values(0, 0) == 35.0);
    CHECK((*agg.matrix.support_counts)(0, 0) == 6);
    REQUIRE(agg.dropped.size() == 2);
    CHECK(agg.dropped[0].program_id == "FIVE");
    CHECK(agg.dropped[1].program_id == "SPARSE");
    CHECK(agg.dropped[1].support[1] == 4);
  }

  TEST_CASE("thirty programs make a year") {
    const auto crit = default_criteria();
    std::map<int, YearAggregate> yearly;
    auto ps = population(2014, 29);
    const auto more = population(2015, 30);
    ps.insert(ps.end(), more.begin(), more.end());
    yearly.emplace(2014, aggregate(ps, 2014, crit));
    yearly.emplace(2015, aggregate(ps, 2015, crit));
    const auto w = select_window(yearly);
    CHECK(w.years == std::vector<int>{2015});
    CHECK(w.excluded.count(2014) == 1);
    CHECK(w.surviving_programs.at(2014) == 29);

    std::map<int, YearAggregate> none{{2014, yearly.at(2014)}};
    CHECK_THROWS_AS(select_window(none), Error);
  }

  TEST_CASE("percentile panel") {
    RankingResult y1{{"A", "B", "C"}, {0.9, 0.5, 0.1}, {1, 2, 3}, {1.0, 0.5, 0.0}};
    RankingResult y2{{"A", "B"}, {0.9, 0.5}, {1, 2}, {0.2, 0.4}};
    const auto panel = percentile_panel({{2015, y1}}, {{"A", "F1"}, {"B", "F2"}, {"C", "F2"}});
    CHECK(panel.programs[0].program_id == "A");
    CHECK(panel.programs[0].mean_percentile == 1.0);
    const auto& f1 = panel.families[0];
    CHECK(f1.family_id == "F1");
    CHECK(f1.min == f1.max);
    CHECK(f1.mean == f1.min);

    const auto two = percentile_panel({{2015, RankingResult{{"A"}, {0.5}, {1}, {0.4}}}, {2016, y2}}, {});
    CHECK(two.programs.back().program_id == "A");
    CHECK(two.programs.back().mean_percentile == doctest::Approx(0.3));
    CHECK(two.grid.at("A").size() == 2);
  }

  TEST_CASE("full-scale synthetic records") {
    fixtures::RecordOptions opts;
    opts.persons = 28300;
    opts.programs = 121;
    opts.first_year = 2009;
    opts.last_year = 2014;
    opts.cohort_growth = 30.0;
    const auto files = fixtures::generate_records(opts);
    const auto ds = build_dataset(table(files.graduates), table(files.contracts), table(files.sector_map));
    const auto result = ingest(ds);
    std::set<std::string> used;
    for (int y : result.window.years) {
      for (const auto& a : result.yearly.at(y).matrix.alternatives) used.insert(a);
    }
    MESSAGE("programs used: ", used.size(), ", years: ", result.window.years.size());
    CHECK(used.size() < 121);
    CHECK(used.size() > 90);
    // The window is a contiguous run ending at the latest year.
    REQUIRE(!result.window.years.empty());
    CHECK(result.window.years.back() == opts.last_year);
    CHECK(result.window.years.back() - result.window.years.front() + 1 == int(result.window.years.size()));
    CHECK(result.window.years.front() > opts.first_year);
  }
}
