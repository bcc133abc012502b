#pragma once

// Reference implementations used only by the tests. They are written
// directly from the definitions, favoring obviousness over speed, and share
// no code with the library beyond its data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "vetrank/fixtures.hpp"
#include "vetrank/ingestion.hpp"
#include "vetrank/model.hpp"

namespace oracle {

using vetrank::Direction;

// Five-step closeness written as a single loop nest over plain vectors.
inline std::vector<double> topsis_scores(const std::vector<std::vector<double>>& x,
                                         const std::vector<double>& w,
                                         const std::vector<Direction>& dir) {
  const std::size_t m = x.size(), n = w.size();
  std::vector<std::vector<double>> v(m, std::vector<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) ss += x[i][j] * x[i][j];
    const double norm = std::sqrt(ss);
    for (std::size_t i = 0; i < m; ++i) v[i][j] = w[j] * x[i][j] / norm;
  }
  std::vector<double> best(n), worst(n);
  for (std::size_t j = 0; j < n; ++j) {
    double hi = v[0][j], lo = v[0][j];
    for (std::size_t i = 1; i < m; ++i) {
      hi = std::max(hi, v[i][j]);
      lo = std::min(lo, v[i][j]);
    }
    best[j] = dir[j] == Direction::Benefit ? hi : lo;
    worst[j] = dir[j] == Direction::Benefit ? lo : hi;
  }
  std::vector<double> r(m);
  for (std::size_t i = 0; i < m; ++i) {
    double db = 0.0, dw = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      db += (v[i][j] - best[j]) * (v[i][j] - best[j]);
      dw += (v[i][j] - worst[j]) * (v[i][j] - worst[j]);
    }
    r[i] = std::sqrt(dw) / (std::sqrt(dw) + std::sqrt(db));
  }
  return r;
}

// Counts every pair.
inline std::uint64_t discordant_brute(const std::vector<std::size_t>& a,
                                      const std::vector<std::size_t>& b) {
  const std::size_t m = a.size();
  std::vector<std::size_t> pos_a(m), pos_b(m);
  for (std::size_t k = 0; k < m; ++k) {
    pos_a[a[k]] = k;
    pos_b[b[k]] = k;
  }
  std::uint64_t count = 0;
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t v = u + 1; v < m; ++v) {
      if ((pos_a[u] < pos_a[v]) != (pos_b[u] < pos_b[v])) ++count;
    }
  }
  return count;
}

// Worked-day tallies by walking the window one day at a time.
struct DayCounts {
  long window = 0, total = 0, in_field = 0, temporary = 0, in_field_temporary = 0;
};

inline DayCounts day_by_day(const std::vector<vetrank::ingestion::ContractRecord>& contracts,
                            const vetrank::ingestion::GraduateRecord& program,
                            const vetrank::ingestion::SectorFamilyMap& sectors,
                            vetrank::ingestion::Date end) {
  using namespace std::chrono;
  DayCounts out;
  for (auto day = program.graduation_date + days{1}; day <= end; day += days{1}) {
    ++out.window;
    bool covered = false, in_field = false, temporary = false;
    for (const auto& c : contracts) {
      if (c.start_date < program.graduation_date) continue;
      const auto last = c.end_date ? std::min(*c.end_date, end) : end;
      if (day < c.start_date || day > last) continue;
      covered = true;
      const auto it = sectors.find(c.sector_code);
      if (it != sectors.end() && it->second.count(program.family_id)) in_field = true;
      if (c.type == vetrank::ingestion::ContractType::Temporary) temporary = true;
    }
    out.total += covered;
    out.in_field += in_field;
    out.temporary += temporary;
    out.in_field_temporary += in_field && temporary;
  }
  return out;
}

// Random matrix with entries in [lo, hi] and random directions.
struct Instance {
  vetrank::PerformanceMatrix matrix;
  vetrank::WeightVector weights;
  std::vector<std::vector<double>> rows;
};

inline Instance random_instance(vetrank::fixtures::Rng& rng, std::size_t m, std::size_t n) {
  Instance inst;
  auto& pm = inst.matrix;
  pm.values = vetrank::Matrix(m, n);
  for (std::size_t j = 0; j < n; ++j) {
    pm.criteria.push_back({"K" + std::to_string(j + 1), "",
                           rng.chance(0.5) ? Direction::Benefit : Direction::Cost,
                           rng.uniform(0.5, 5.0)});
  }
  double total = 0.0;
  for (const auto& c : pm.criteria) total += c.relative_weight;
  for (const auto& c : pm.criteria) inst.weights.absolute.push_back(c.relative_weight / total);
  for (std::size_t i = 0; i < m; ++i) {
    pm.alternatives.push_back("a" + std::to_string(i + 1));
    std::vector<double> row;
    for (std::size_t j = 0; j < n; ++j) {
      const double x = rng.uniform(0.1, 10.0);
      pm.values(i, j) = x;
      row.push_back(x);
    }
    inst.rows.push_back(row);
  }
  // Keep every column non-constant so the instance validates.
  for (std::size_t j = 0; j < n; ++j) {
    if (m >= 2 && pm.values(0, j) == pm.values(1, j)) pm.values(1, j) += 1.0, inst.rows[1][j] += 1.0;
  }
  return inst;
}

inline std::vector<std::size_t> random_permutation(vetrank::fixtures::Rng& rng, std::size_t m) {
  std::vector<std::size_t> p(m);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t k = m; k > 1; --k) std::swap(p[k - 1], p[rng.integer(0, long(k) - 1)]);
  return p;
}

}  // namespace oracle
