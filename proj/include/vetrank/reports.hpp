#pragma once

#include <string>
#include <vector>

#include "vetrank/gsa.hpp"
#include "vetrank/scenario.hpp"

namespace vetrank::reports {

// CSV renderings shared by the CLI and the service, so both emit identical
// bytes for the same computation.

/// `criterion,year,distance`, criteria in column order, years ascending.
std::string scenario_distances_csv(const std::vector<scenario::CriterionDistribution>& panel);

/// `criterion,min,q1,median,q3,max`
std::string scenario_summary_csv(const std::vector<scenario::CriterionDistribution>& panel);

struct NamedEffects {
  std::string scheme;
  gsa::MainEffects effects;
};

/// `criterion,scheme,eta_sq,raw_eta_sq,residual_var`
std::string main_effects_csv(const std::vector<NamedEffects>& results);

std::string ranking_csv(const RankingResult& ranking);

}  // namespace vetrank::reports
