#include "vetrank/reports.hpp"

#include <sstream>

#include "vetrank/io.hpp"

namespace vetrank::reports {

using io::csv_escape;
using io::format_double;

std::string scenario_distances_csv(const std::vector<scenario::CriterionDistribution>& panel) {
  std::ostringstream out;
  out << "criterion,year,distance\n";
  for (const auto& c : panel) {
    for (const auto& [year, d] : c.by_year) {
      out << csv_escape(c.criterion_id) << ',' << year << ',' << format_double(d) << '\n';
    }
  }
  return out.str();
}

std::string scenario_summary_csv(const std::vector<scenario::CriterionDistribution>& panel) {
  std::ostringstream out;
  out << "criterion,min,q1,median,q3,max\n";
  for (const auto& c : panel) {
    const auto& s = c.summary;
    out << csv_escape(c.criterion_id) << ',' << format_double(s.min) << ',' << format_double(s.q1)
        << ',' << format_double(s.median) << ',' << format_double(s.q3) << ','
        << format_double(s.max) << '\n';
  }
  return out.str();
}

std::string main_effects_csv(const std::vector<NamedEffects>& results) {
  std::ostringstream out;
  out << "criterion,scheme,eta_sq,raw_eta_sq,residual_var\n";
  for (const auto& r : results) {
    const auto& e = r.effects;
    for (std::size_t j = 0; j < e.criterion_ids.size(); ++j) {
      out << csv_escape(e.criterion_ids[j]) << ',' << csv_escape(r.scheme) << ','
          << format_double(e.eta_sq[j]) << ',' << format_double(e.raw_eta_sq[j]) << ','
          << format_double(e.residual_var[j]) << '\n';
    }
  }
  return out.str();
}

std::string ranking_csv(const RankingResult& ranking) {
  std::ostringstream out;
  io::write_ranking_csv(out, ranking);
  return out.str();
}

}  // namespace vetrank::reports
