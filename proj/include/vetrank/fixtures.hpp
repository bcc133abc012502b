#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "vetrank/model.hpp"

namespace vetrank::fixtures {

/// Seeded generator with platform-independent output (the standard
/// distributions are implementation-defined, so they are not used here).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  double uniform();                          // [0, 1)
  double uniform(double lo, double hi);
  double normal(double mean, double sd);
  double exponential(double mean);
  long integer(long lo, long hi);            // inclusive
  bool chance(double p) { return uniform() < p; }

 private:
  std::uint64_t state_;
  std::uint64_t next();
};

struct RecordOptions {
  std::uint64_t seed = 20210301;
  std::size_t persons = 283;
  std::size_t programs = 12;
  int first_year = 2012;  // graduation years
  int last_year = 2014;
  int observation_year = 2016;  // labor data end on Dec 31 of this year
  /// Relative cohort size multiplier for the last year versus the first.
  double cohort_growth = 1.0;
};

struct RecordFiles {
  std::string graduates;   // graduates.csv contents
  std::string contracts;   // contracts.csv contents
  std::string sector_map;  // sector_map.csv contents
};

/// Graduate/contract/sector tables shaped like the administrative sources.
/// Programs differ in a latent quality that drives every labor outcome, and
/// in size, so small programs fail the support rule more often.
RecordFiles generate_records(const RecordOptions& options = {});

void write_records(const std::filesystem::path& dir, const RecordFiles& files);

struct AdversarialOptions {
  std::uint64_t seed = 7;
  std::size_t alternatives = 40;
  int first_year = 2009;
  int last_year = 2016;
  std::size_t high_leverage = 3;  // 0-based: C4
  std::size_t redundant = 7;      // 0-based: C8
};

/// Yearly matrices over the eight default criteria. All criteria but one
/// follow a shared latent quality; the high-leverage criterion opposes it
/// with a wide spread, and the redundant one tracks it with a tiny relative
/// spread (a large common offset).
std::map<int, PerformanceMatrix> adversarial_matrices(const AdversarialOptions& options = {});

}  // namespace vetrank::fixtures
