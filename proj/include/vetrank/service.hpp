#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "vetrank/model.hpp"
#include "vetrank/scenario.hpp"

namespace vetrank::service {

struct Request {
  std::string method;  // "GET", "POST"
  std::string path;    // without query string
  std::map<std::string, std::string> query;
  std::string body;
};

struct Response {
  int status = 200;
  std::string body;  // JSON
};

// Immutable view of the dataset the service answers from. Scenario results
// do not depend on weights and are computed once when the snapshot is built.
struct Snapshot {
  std::vector<CriterionSpec> criteria;
  std::map<int, PerformanceMatrix> matrices;
  std::map<std::string, std::string> program_family;
  WeightVector default_weights;
  std::map<int, RankingResult> default_rankings;
  std::vector<scenario::CriterionDistribution> scenarios;
};

std::shared_ptr<const Snapshot> build_snapshot(std::map<int, PerformanceMatrix> matrices,
                                               std::vector<CriterionSpec> criteria,
                                               std::map<std::string, std::string> program_family);

/// JSON-over-HTTP facade, independent of the transport. Every route answers
/// 503 until a snapshot is installed; installing one is allowed once.
class Service {
 public:
  void install(std::shared_ptr<const Snapshot> snapshot);
  bool loaded() const;

  Response handle(const Request& request) const;

 private:
  std::shared_ptr<const Snapshot> snapshot() const;

  Response meta(const Snapshot& s) const;
  Response rank(const Snapshot& s, const Request& r) const;
  Response scenarios(const Snapshot& s, const Request& r) const;
  Response scenario_summary(const Snapshot& s) const;
  Response gsa(const Snapshot& s, const Request& r) const;

  mutable std::mutex mutex_;
  std::shared_ptr<const Snapshot> snapshot_;
};

}  // namespace vetrank::service
