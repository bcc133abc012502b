#include "vetrank/service.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include <json.hpp>

#include "vetrank/error.hpp"
#include "vetrank/gsa.hpp"
#include "vetrank/rankcompare.hpp"
#include "vetrank/topsis.hpp"
#include "vetrank/weights.hpp"

namespace vetrank::service {

using json = nlohmann::ordered_json;

namespace {

Response reply(int status, const json& body) { return {status, body.dump()}; }

Response error(int status, const std::string& message) {
  return reply(status, json{{"error", message}});
}

// Thrown inside handlers to short-circuit with an HTTP status.
struct HttpError {
  int status;
  std::string message;
};

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  try {
    auto j = json::parse(body);
    if (!j.is_object()) throw HttpError{400, "request body must be a JSON object"};
    return j;
  } catch (const json::parse_error& e) {
    throw HttpError{400, std::string("malformed JSON: ") + e.what()};
  }
}

int year_field(const json& body, const Snapshot& s) {
  if (!body.contains("year")) throw HttpError{400, "missing 'year'"};
  if (!body["year"].is_number_integer()) throw HttpError{400, "'year' must be an integer"};
  const int year = body["year"].get<int>();
  if (!s.matrices.count(year)) throw HttpError{404, "year " + std::to_string(year) + " not in window"};
  return year;
}

WeightVector weights_field(const json& body, const Snapshot& s) {
  if (!body.contains("relative_weights")) return s.default_weights;
  const auto& w = body["relative_weights"];
  if (!w.is_array()) throw HttpError{400, "'relative_weights' must be an array"};
  if (w.size() != s.criteria.size()) {
    throw HttpError{400, "expected " + std::to_string(s.criteria.size()) + " relative weights, got " +
                             std::to_string(w.size())};
  }
  std::vector<double> rel;
  for (const auto& v : w) {
    if (!v.is_number()) throw HttpError{400, "relative weights must be numbers"};
    rel.push_back(v.get<double>());
  }
  try {
    return weights::normalize(rel);
  } catch (const Error& e) {
    throw HttpError{400, e.what()};
  }
}

json effects_json(const std::string& scheme, const WeightVector& w, const gsa::MainEffects& e) {
  json rows = json::array();
  double sum = 0.0;
  for (std::size_t j = 0; j < e.criterion_ids.size(); ++j) {
    rows.push_back({{"criterion", e.criterion_ids[j]},
                    {"eta_sq", e.eta_sq[j]},
                    {"raw_eta_sq", e.raw_eta_sq[j]},
                    {"residual_var", e.residual_var[j]}});
    sum += e.eta_sq[j];
  }
  return {{"scheme", scheme},
          {"weights", w.absolute},
          {"samples", e.samples},
          {"eta_sq_sum", sum},
          {"effects", rows}};
}

}  // namespace

std::shared_ptr<const Snapshot> build_snapshot(std::map<int, PerformanceMatrix> matrices,
                                               std::vector<CriterionSpec> criteria,
                                               std::map<std::string, std::string> program_family) {
  if (matrices.empty()) throw Error(ErrorKind::EmptyWindow, "no yearly matrices to serve");
  scenario::require_same_criteria(matrices);
  auto s = std::make_shared<Snapshot>();
  s->default_weights = weights::normalize(weights::relative_weights(criteria));
  for (const auto& [year, m] : matrices) {
    s->default_rankings.emplace(year, topsis::rank(m, s->default_weights));
  }
  s->scenarios = scenario::scenario_panel(matrices);
  s->criteria = std::move(criteria);
  s->matrices = std::move(matrices);
  s->program_family = std::move(program_family);
  return s;
}

void Service::install(std::shared_ptr<const Snapshot> snapshot) {
  std::lock_guard lock(mutex_);
  if (snapshot_) throw std::logic_error("dataset already installed");
  snapshot_ = std::move(snapshot);
}

bool Service::loaded() const { return snapshot() != nullptr; }

std::shared_ptr<const Snapshot> Service::snapshot() const {
  std::lock_guard lock(mutex_);
  return snapshot_;
}

Response Service::handle(const Request& request) const {
  const auto s = snapshot();
  if (!s) return error(503, "dataset not loaded yet");
  try {
    const auto& p = request.path;
    const bool get = request.method == "GET";
    const bool post = request.method == "POST";
    if (p == "/api/meta") return get ? meta(*s) : error(405, "use GET");
    if (p == "/api/rank") return post ? rank(*s, request) : error(405, "use POST");
    if (p == "/api/scenarios") return get ? scenarios(*s, request) : error(405, "use GET");
    if (p == "/api/scenarios/summary") return get ? scenario_summary(*s) : error(405, "use GET");
    if (p == "/api/gsa") return post ? gsa(*s, request) : error(405, "use POST");
    return error(404, "no route " + p);
  } catch (const HttpError& e) {
    return error(e.status, e.message);
  } catch (const Error& e) {
    return error(e.kind() == ErrorKind::TooFewPoints || e.kind() == ErrorKind::ParseError ||
                         e.kind() == ErrorKind::NonPositiveWeight ||
                         e.kind() == ErrorKind::IndexOutOfRange ||
                         e.kind() == ErrorKind::ZeroOutputVariance
                     ? 400
                     : 500,
                 e.what());
  }
}

Response Service::meta(const Snapshot& s) const {
  json criteria = json::array();
  for (const auto& c : s.criteria) {
    criteria.push_back({{"id", c.id},
                        {"label", c.label},
                        {"direction", to_string(c.direction)},
                        {"relative_weight", c.relative_weight}});
  }
  std::set<std::string> ids;
  json years = json::array();
  json counts = json::object();
  for (const auto& [year, m] : s.matrices) {
    years.push_back(year);
    counts[std::to_string(year)] = m.alternatives.size();
    ids.insert(m.alternatives.begin(), m.alternatives.end());
  }
  json programs = json::array();
  std::set<std::string> families;
  for (const auto& id : ids) {
    const auto it = s.program_family.find(id);
    const std::string family = it == s.program_family.end() ? std::string() : it->second;
    if (!family.empty()) families.insert(family);
    programs.push_back({{"program_id", id}, {"family_id", family}});
  }
  return reply(200, json{{"years", years},
                         {"criteria", criteria},
                         {"default_weights", s.default_weights.absolute},
                         {"programs", programs},
                         {"families", families},
                         {"program_counts", counts}});
}

Response Service::rank(const Snapshot& s, const Request& r) const {
  const auto body = parse_body(r.body);
  const int year = year_field(body, s);
  const auto w = weights_field(body, s);
  const auto ranking = topsis::rank(s.matrices.at(year), w);
  const double distance = rankcompare::kendall_tau_distance(ranking, s.default_rankings.at(year));

  std::vector<std::size_t> order(ranking.alternatives.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return ranking.ranks[a] < ranking.ranks[b]; });
  json rows = json::array();
  for (std::size_t i : order) {
    const auto it = s.program_family.find(ranking.alternatives[i]);
    rows.push_back({{"program_id", ranking.alternatives[i]},
                    {"family_id", it == s.program_family.end() ? std::string() : it->second},
                    {"score", ranking.scores[i]},
                    {"rank", ranking.ranks[i]},
                    {"percentile", ranking.percentiles[i]}});
  }
  return reply(200, json{{"year", year},
                         {"weights", w.absolute},
                         {"ranking", rows},
                         {"distance_to_default", distance}});
}

Response Service::scenarios(const Snapshot& s, const Request& r) const {
  const auto it = r.query.find("year");
  if (it == r.query.end()) return error(400, "missing query parameter 'year'");
  int year = 0;
  try {
    std::size_t used = 0;
    year = std::stoi(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    return error(400, "'year' must be an integer");
  }
  if (!s.matrices.count(year)) return error(404, "year " + std::to_string(year) + " not in window");
  json rows = json::array();
  for (const auto& c : s.scenarios) {
    for (const auto& [y, d] : c.by_year) {
      if (y == year) rows.push_back({{"criterion", c.criterion_id}, {"distance", d}});
    }
  }
  return reply(200, json{{"year", year}, {"distances", rows}});
}

Response Service::scenario_summary(const Snapshot& s) const {
  json rows = json::array();
  for (const auto& c : s.scenarios) {
    const auto& q = c.summary;
    rows.push_back({{"criterion", c.criterion_id},
                    {"min", q.min},
                    {"q1", q.q1},
                    {"median", q.median},
                    {"q3", q.q3},
                    {"max", q.max},
                    {"years", c.by_year.size()}});
  }
  return reply(200, json{{"summary", rows}});
}

Response Service::gsa(const Snapshot& s, const Request& r) const {
  const auto body = parse_body(r.body);
  const auto w = weights_field(body, s);
  const std::string est_text = body.value("estimator", std::string("smoother"));
  const auto estimator = gsa::parse_estimator(est_text);
  const bool pooled = body.value("pooled", true);
  const bool compare = body.value("compare", false);

  gsa::EstimatorParams params;
  if (body.contains("bins")) {
    if (!body["bins"].is_number_unsigned()) throw HttpError{400, "'bins' must be a non-negative integer"};
    params.bins = body["bins"].get<std::size_t>();
  }

  std::vector<std::pair<std::string, WeightVector>> schemes;
  if (compare) {
    std::size_t focus = 0;
    if (body.contains("focus")) {
      const auto& f = body["focus"];
      if (!f.is_string()) throw HttpError{400, "'focus' must be a criterion id"};
      const auto hit = std::find_if(s.criteria.begin(), s.criteria.end(),
                                    [&](const CriterionSpec& c) { return c.id == f.get<std::string>(); });
      if (hit == s.criteria.end()) throw HttpError{400, "unknown focus criterion " + f.get<std::string>()};
      focus = std::size_t(hit - s.criteria.begin());
    }
    const std::size_t n = s.criteria.size();
    schemes.emplace_back("least", weights::scenario_weights(n, focus, weights::ScenarioKind::LeastWeighted));
    schemes.emplace_back("most", weights::scenario_weights(n, focus, weights::ScenarioKind::MostWeighted));
  }
  schemes.emplace_back("posted", w);

  json out = {{"estimator", gsa::to_string(estimator)}, {"pooled", pooled}};
  if (pooled) {
    json list = json::array();
    for (const auto& [name, scheme] : schemes) {
      list.push_back(effects_json(name, scheme, gsa::main_effects(gsa::score_design(s.matrices, scheme),
                                                                  estimator, params)));
    }
    out["schemes"] = list;
  } else {
    const int year = year_field(body, s);
    out["year"] = year;
    json list = json::array();
    for (const auto& [name, scheme] : schemes) {
      list.push_back(effects_json(name, scheme,
                                  gsa::main_effects(s.matrices.at(year), scheme, estimator, params)));
    }
    out["schemes"] = list;
  }
  return reply(200, out);
}

}  // namespace vetrank::service
