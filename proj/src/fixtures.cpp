#include "vetrank/fixtures.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "vetrank/ingestion.hpp"
#include "vetrank/io.hpp"

namespace vetrank::fixtures {

namespace chr = std::chrono;
using ingestion::Date;

Rng::Rng(std::uint64_t seed) : state_(seed) {}

// splitmix64
std::uint64_t Rng::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal(double mean, double sd) {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::exponential(double mean) { return -mean * std::log(1.0 - uniform()); }

long Rng::integer(long lo, long hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<long>(next() % span);
}

namespace {

struct Program {
  std::string id;
  std::string family;
  std::size_t family_index;
  double quality;
  double size;
};

std::string pad(std::size_t value, int width) {
  std::string s = std::to_string(value);
  return std::string(width > int(s.size()) ? width - s.size() : 0, '0') + s;
}

}  // namespace

RecordFiles generate_records(const RecordOptions& options) {
  Rng rng(options.seed);
  const std::size_t n_families = std::max<std::size_t>(1, (options.programs + 2) / 3);

  std::vector<Program> programs;
  for (std::size_t p = 0; p < options.programs; ++p) {
    programs.push_back({"P" + pad(p + 1, 3), "F" + pad(p % n_families + 1, 2), p % n_families,
                        rng.uniform(), rng.uniform(0.2, 1.8)});
  }

  // Two dedicated sectors per family, one sector shared by the first two
  // families, and generic sectors that match no family.
  std::ostringstream sectors;
  sectors << "sector_code,family_id\n";
  std::vector<std::vector<std::string>> family_sectors(n_families);
  for (std::size_t f = 0; f < n_families; ++f) {
    const std::string fam = "F" + pad(f + 1, 2);
    for (const char* suffix : {"A", "B"}) {
      const std::string code = "S" + pad(f + 1, 2) + suffix;
      sectors << code << ',' << fam << '\n';
      family_sectors[f].push_back(code);
    }
  }
  if (n_families >= 2) {
    sectors << "SX01,F01\nSX01,F02\n";
    family_sectors[0].push_back("SX01");
    family_sectors[1].push_back("SX01");
  }
  const std::vector<std::string> generic = {"G001", "G002", "G003"};

  double size_total = 0.0;
  for (const auto& p : programs) size_total += p.size;
  std::vector<double> year_weight;
  double year_total = 0.0;
  const int n_years = options.last_year - options.first_year + 1;
  for (int y = 0; y < n_years; ++y) {
    const double t = n_years > 1 ? double(y) / double(n_years - 1) : 1.0;
    year_weight.push_back(1.0 + (options.cohort_growth - 1.0) * t);
    year_total += year_weight.back();
  }
  auto pick_program = [&]() -> const Program& {
    double u = rng.uniform() * size_total;
    for (const auto& p : programs) {
      if ((u -= p.size) < 0.0) return p;
    }
    return programs.back();
  };
  auto pick_year = [&]() {
    double u = rng.uniform() * year_total;
    for (int y = 0; y < n_years; ++y) {
      if ((u -= year_weight[y]) < 0.0) return options.first_year + y;
    }
    return options.last_year;
  };

  const Date observation_end{chr::year{std::max(options.observation_year, options.last_year)} / chr::December / 31};
  std::ostringstream grads;
  std::ostringstream contracts;
  grads << "person_id,program_id,family_id,graduation_date\n";
  contracts << "person_id,start_date,end_date,contract_type,sector_code\n";

  for (std::size_t k = 0; k < options.persons; ++k) {
    const std::string person = "N" + pad(k + 1, 6);
    const Program& program = pick_program();
    const int year = pick_year();
    const Date graduated = Date{chr::year{year} / chr::June / 15} + chr::days{rng.integer(0, 15)};
    grads << person << ',' << program.id << ',' << program.family << ','
          << ingestion::format_date(graduated) << '\n';

    // A few graduates return for a second degree in a later year.
    if (year < options.last_year && rng.chance(0.04)) {
      const Program& second = pick_program();
      if (second.id != program.id) {
        const int later = static_cast<int>(rng.integer(year + 1, options.last_year));
        const Date d2 = Date{chr::year{later} / chr::June / 20};
        grads << person << ',' << second.id << ',' << second.family << ','
              << ingestion::format_date(d2) << '\n';
      }
    }

    const double q = program.quality;

    // A job held before graduation; ignored by the criteria but present in the data.
    if (rng.chance(0.1)) {
      const Date s = graduated - chr::days{rng.integer(200, 600)};
      contracts << person << ',' << ingestion::format_date(s) << ','
                << ingestion::format_date(s + chr::days{rng.integer(20, 150)}) << ",T,"
                << generic[rng.integer(0, 2)] << '\n';
    }

    const long n_contracts = rng.chance(0.05 + 0.1 * (1.0 - q)) ? 0 : rng.integer(2, 4 + long(4 * q));
    Date cursor = graduated + chr::days{1 + long(rng.exponential(60.0 + 300.0 * (1.0 - q)))};
    for (long c = 0; c < n_contracts && cursor <= observation_end; ++c) {
      const bool in_field = rng.chance(0.3 + 0.6 * q);
      const bool temporary = rng.chance(0.9 - 0.6 * q);
      const long length = rng.integer(20, temporary ? 240 : 900);
      Date end = cursor + chr::days{length};
      const bool open = !temporary && rng.chance(0.3);
      const auto& pool = in_field ? family_sectors[program.family_index] : generic;
      const std::string sector = pool[rng.integer(0, long(pool.size()) - 1)];
      const std::string end_text = open ? std::string() : ingestion::format_date(std::min(end, observation_end));
      contracts << person << ',' << ingestion::format_date(cursor) << ',' << end_text << ','
                << (temporary ? 'T' : 'I') << ',' << sector << '\n';
      // Second labor source repeats some contracts verbatim.
      if (rng.chance(0.03)) {
        contracts << person << ',' << ingestion::format_date(cursor) << ',' << end_text << ','
                  << (temporary ? 'T' : 'I') << ',' << sector << '\n';
      }
      if (open) break;
      // Occasional overlap with the next contract.
      const long gap = rng.chance(0.1) ? -rng.integer(1, std::max(1L, length / 2))
                                        : 1 + long(rng.exponential(20.0 + 200.0 * (1.0 - q)));
      cursor = end + chr::days{gap};
    }
  }
  return {grads.str(), contracts.str(), sectors.str()};
}

void write_records(const std::filesystem::path& dir, const RecordFiles& files) {
  io::write_text_file(dir / "graduates.csv", files.graduates);
  io::write_text_file(dir / "contracts.csv", files.contracts);
  io::write_text_file(dir / "sector_map.csv", files.sector_map);
}

std::map<int, PerformanceMatrix> adversarial_matrices(const AdversarialOptions& options) {
  Rng rng(options.seed);
  const auto criteria = ingestion::default_criteria();
  const std::size_t n = criteria.size();
  std::map<int, PerformanceMatrix> out;
  for (int year = options.first_year; year <= options.last_year; ++year) {
    PerformanceMatrix m;
    m.criteria = criteria;
    m.values = Matrix(options.alternatives, n);
    for (std::size_t i = 0; i < options.alternatives; ++i) {
      m.alternatives.push_back("A" + pad(i + 1, 3));
      const double q = rng.uniform();
      for (std::size_t j = 0; j < n; ++j) {
        const bool benefit = criteria[j].direction == Direction::Benefit;
        // increases with quality in the preferred direction of the criterion
        const double good = benefit ? q : 1.0 - q;
        double x;
        if (j == options.high_leverage) {
          x = 0.05 + 0.9 * (1.0 - good) + rng.normal(0.0, 0.05);
          x = std::clamp(x, 0.01, 1.2);
        } else if (j == options.redundant) {
          x = 1000.0 + 10.0 * good + rng.normal(0.0, 0.5);
        } else {
          x = 1.0 + good + rng.normal(0.0, 0.3);
          x = std::max(x, 0.05);
        }
        m.values(i, j) = x;
      }
    }
    out.emplace(year, std::move(m));
  }
  return out;
}

}  // namespace vetrank::fixtures
