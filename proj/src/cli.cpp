#include "vetrank/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "vetrank/error.hpp"
#include "vetrank/fixtures.hpp"
#include "vetrank/gsa.hpp"
#include "vetrank/http.hpp"
#include "vetrank/ingestion.hpp"
#include "vetrank/io.hpp"
#include "vetrank/reports.hpp"
#include "vetrank/scenario.hpp"
#include "vetrank/service.hpp"
#include "vetrank/topsis.hpp"
#include "vetrank/weights.hpp"

namespace vetrank::cli {

namespace fs = std::filesystem;

namespace {

// Resolves --weights against the criteria file: explicit list if given,
// otherwise the relative weights stored with the criteria.
WeightVector resolve_weights(const std::vector<CriterionSpec>& criteria, const std::string& flag) {
  if (flag.empty()) return weights::normalize(weights::relative_weights(criteria));
  const auto rel = io::parse_weight_list(flag);
  if (rel.size() != criteria.size()) {
    throw Error(ErrorKind::LengthMismatch, "--weights has " + std::to_string(rel.size()) +
                                               " entries but the criteria file defines " +
                                               std::to_string(criteria.size()));
  }
  return weights::normalize(rel);
}

void emit(const std::string& path, const std::string& contents, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << contents;
  } else {
    io::write_text_file(path, contents);
  }
}

std::map<std::string, std::string> program_families(const std::string& flag, const fs::path& matrices) {
  if (!flag.empty()) return ingestion::read_program_families(flag);
  const auto fallback = matrices / "programs.csv";
  if (fs::exists(fallback)) return ingestion::read_program_families(fallback);
  return {};
}

std::map<int, PerformanceMatrix> load_matrices(const fs::path& dir,
                                               const std::vector<CriterionSpec>& criteria) {
  auto matrices = io::read_matrix_dir(dir, criteria);
  if (matrices.empty()) {
    throw Error(ErrorKind::EmptyWindow, "no matrix_<year>.csv files in " + dir.string());
  }
  return matrices;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ranks training programs by labor-market outcomes and analyzes weight sensitivity."};
  app.require_subcommand(1);

  // ingest
  struct {
    std::string graduates, contracts, sector_map, out, observation_end;
    long min_support = 6;
    std::size_t min_programs = 30;
  } ing;
  auto* ingest = app.add_subcommand("ingest", "Build yearly performance matrices from raw records");
  ingest->add_option("--graduates", ing.graduates, "Graduates CSV")->required()->check(CLI::ExistingFile);
  ingest->add_option("--contracts", ing.contracts, "Contracts CSV")->required()->check(CLI::ExistingFile);
  ingest->add_option("--sector-map", ing.sector_map, "Sector to family CSV")->required()->check(CLI::ExistingFile);
  ingest->add_option("--out", ing.out, "Output directory")->required();
  ingest->add_option("--min-support", ing.min_support, "Minimum persons per program-criterion cell")
      ->capture_default_str();
  ingest->add_option("--min-programs", ing.min_programs, "Minimum surviving programs for a year")
      ->capture_default_str();
  ingest->add_option("--observation-end", ing.observation_end,
                     "Last observed day, YYYY-MM-DD (default: latest date in the data)");

  // rank
  struct {
    std::string matrix, criteria, weights, out;
  } rk;
  auto* rank = app.add_subcommand("rank", "Rank the alternatives of one matrix");
  rank->add_option("--matrix", rk.matrix, "Matrix CSV")->required()->check(CLI::ExistingFile);
  rank->add_option("--criteria", rk.criteria, "Criteria JSON")->required()->check(CLI::ExistingFile);
  rank->add_option("--weights", rk.weights, "Relative weights w1,...,wn (default: from criteria)");
  rank->add_option("--out", rk.out, "Output CSV (default: stdout)");

  // scenarios
  struct {
    std::string matrices, criteria, out;
    double ratio = 2.0;
  } sc;
  auto* scen = app.add_subcommand("scenarios", "Most/least weighted scenario distances per criterion");
  scen->add_option("--matrices", sc.matrices, "Directory of matrix_<year>.csv")->required()->check(CLI::ExistingDirectory);
  scen->add_option("--criteria", sc.criteria, "Criteria JSON")->required()->check(CLI::ExistingFile);
  scen->add_option("--ratio", sc.ratio, "Weight ratio of the focus criterion")->capture_default_str()
      ->check(CLI::PositiveNumber);
  scen->add_option("--out", sc.out, "Output directory for scenarios.csv and scenarios_summary.csv")->required();

  // gsa
  struct {
    std::string matrices, criteria, weights, estimator = "smoother", compare, out;
    std::size_t bins = 0;
    bool per_year = false;
  } gs;
  auto* gsa_cmd = app.add_subcommand("gsa", "Main effects of each criterion on the closeness score");
  gsa_cmd->add_option("--matrices", gs.matrices, "Directory of matrix_<year>.csv")->required()->check(CLI::ExistingDirectory);
  gsa_cmd->add_option("--criteria", gs.criteria, "Criteria JSON")->required()->check(CLI::ExistingFile);
  gsa_cmd->add_option("--weights", gs.weights, "Relative weights w1,...,wn (default: from criteria)");
  gsa_cmd->add_option("--estimator", gs.estimator, "Conditional mean estimator")
      ->check(CLI::IsMember({"binned", "smoother"}))->capture_default_str();
  gsa_cmd->add_option("--bins", gs.bins, "Bins for the binned estimator (0: round(sqrt(m)))")->capture_default_str();
  auto* pooled = gsa_cmd->add_flag("--pooled", "Pool all years into one sample (default)");
  gsa_cmd->add_flag("--per-year", gs.per_year, "Estimate each year separately")->excludes(pooled);
  gsa_cmd->add_option("--compare", gs.compare,
                      "Criterion id; adds its least and most weighted schemes to the output");
  gsa_cmd->add_option("--out", gs.out, "Output CSV (default: stdout)");

  // panel
  struct {
    std::string matrices, criteria, weights, programs, out;
  } pn;
  auto* panel = app.add_subcommand("panel", "Percentile panel and family summaries across years");
  panel->add_option("--matrices", pn.matrices, "Directory of matrix_<year>.csv")->required()->check(CLI::ExistingDirectory);
  panel->add_option("--criteria", pn.criteria, "Criteria JSON")->required()->check(CLI::ExistingFile);
  panel->add_option("--weights", pn.weights, "Relative weights w1,...,wn (default: from criteria)");
  panel->add_option("--programs", pn.programs, "program_id,family_id CSV (default: <matrices>/programs.csv)");
  panel->add_option("--out", pn.out, "Output directory")->required();

  // serve
  struct {
    std::string matrices, criteria, programs, host = "127.0.0.1", static_dir;
    int port = 8080;
  } sv;
  auto* serve = app.add_subcommand("serve", "Serve the JSON API over HTTP");
  serve->add_option("--matrices", sv.matrices, "Directory of matrix_<year>.csv")->required()->check(CLI::ExistingDirectory);
  serve->add_option("--criteria", sv.criteria, "Criteria JSON")->required()->check(CLI::ExistingFile);
  serve->add_option("--programs", sv.programs, "program_id,family_id CSV (default: <matrices>/programs.csv)");
  serve->add_option("--port", sv.port, "TCP port (0: any free port)")->capture_default_str();
  serve->add_option("--host", sv.host, "Listen address")->capture_default_str();
  serve->add_option("--static", sv.static_dir, "Directory of UI assets mounted at /")->check(CLI::ExistingDirectory);

  // fixture
  struct {
    std::string kind = "records", out;
    std::uint64_t seed = 0;
    std::size_t persons = fixtures::RecordOptions{}.persons;
    std::size_t programs = fixtures::RecordOptions{}.programs;
    double cohort_growth = 1.0;
  } fx;
  auto* fixture = app.add_subcommand("fixture", "Write a seeded synthetic dataset");
  fixture->add_option("--kind", fx.kind, "records: raw CSV tables; adversarial: yearly matrices")
      ->check(CLI::IsMember({"records", "adversarial"}))->capture_default_str();
  fixture->add_option("--out", fx.out, "Output directory")->required();
  auto* seed_opt = fixture->add_option("--seed", fx.seed, "Generator seed");
  fixture->add_option("--persons", fx.persons, "Graduates to generate (records)")->capture_default_str();
  fixture->add_option("--programs", fx.programs, "Programs to generate (records)")->capture_default_str();
  fixture->add_option("--cohort-growth", fx.cohort_growth, "Last/first cohort size ratio (records)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (ingest->parsed()) {
      std::optional<ingestion::Date> end;
      if (!ing.observation_end.empty()) end = ingestion::parse_date(ing.observation_end, "--observation-end");
      const auto dataset = ingestion::load_datasets(ing.graduates, ing.contracts, ing.sector_map, end);
      const auto result = ingestion::ingest(dataset, {ing.min_support, ing.min_programs});
      ingestion::write_ingest_outputs(ing.out, result);
      out << "retained years:";
      for (int y : result.window.years) out << ' ' << y;
      out << "\n";
      if (dataset.orphan_contracts || dataset.duplicate_contracts || !dataset.unknown_sectors.empty()) {
        out << "skipped " << dataset.orphan_contracts << " contracts without a graduate, "
            << dataset.duplicate_contracts << " duplicates; " << dataset.unknown_sectors.size()
            << " sector codes map to no family\n";
      }
    } else if (rank->parsed()) {
      const auto criteria = io::read_criteria_json(rk.criteria);
      const auto matrix = io::read_matrix_csv(rk.matrix, criteria);
      const auto ranking = topsis::rank(matrix, resolve_weights(criteria, rk.weights));
      emit(rk.out, reports::ranking_csv(ranking), out);
    } else if (scen->parsed()) {
      const auto criteria = io::read_criteria_json(sc.criteria);
      const auto matrices = load_matrices(sc.matrices, criteria);
      const auto results = scenario::scenario_panel(matrices, {sc.ratio, true});
      io::write_text_file(fs::path(sc.out) / "scenarios.csv", reports::scenario_distances_csv(results));
      io::write_text_file(fs::path(sc.out) / "scenarios_summary.csv", reports::scenario_summary_csv(results));
    } else if (gsa_cmd->parsed()) {
      const auto criteria = io::read_criteria_json(gs.criteria);
      const auto matrices = load_matrices(gs.matrices, criteria);
      const auto estimator = gsa::parse_estimator(gs.estimator);
      gsa::EstimatorParams params;
      params.bins = gs.bins;

      std::vector<std::pair<std::string, WeightVector>> schemes;
      if (!gs.compare.empty()) {
        std::size_t focus = criteria.size();
        for (std::size_t j = 0; j < criteria.size(); ++j) {
          if (criteria[j].id == gs.compare) focus = j;
        }
        if (focus == criteria.size()) {
          throw Error(ErrorKind::IndexOutOfRange, "--compare names unknown criterion '" + gs.compare + "'");
        }
        schemes.emplace_back("least", weights::scenario_weights(criteria.size(), focus,
                                                                weights::ScenarioKind::LeastWeighted));
        schemes.emplace_back("most", weights::scenario_weights(criteria.size(), focus,
                                                               weights::ScenarioKind::MostWeighted));
      }
      schemes.emplace_back("posted", resolve_weights(criteria, gs.weights));

      std::vector<reports::NamedEffects> results;
      for (const auto& [name, w] : schemes) {
        if (gs.per_year) {
          for (const auto& [year, m] : matrices) {
            results.push_back({name + ":" + std::to_string(year), gsa::main_effects(m, w, estimator, params)});
          }
        } else {
          results.push_back({name, gsa::main_effects(gsa::score_design(matrices, w), estimator, params)});
        }
      }
      emit(gs.out, reports::main_effects_csv(results), out);
    } else if (panel->parsed()) {
      const auto criteria = io::read_criteria_json(pn.criteria);
      const auto matrices = load_matrices(pn.matrices, criteria);
      const auto w = resolve_weights(criteria, pn.weights);
      std::map<int, RankingResult> yearly;
      for (const auto& [year, m] : matrices) yearly.emplace(year, topsis::rank(m, w));
      const auto families = program_families(pn.programs, pn.matrices);
      ingestion::write_percentile_panel(pn.out, ingestion::percentile_panel(yearly, families));
    } else if (serve->parsed()) {
      service::Service svc;
      http::Server server(svc, sv.static_dir);
      const int port = server.bind(sv.host, sv.port);
      if (port < 0) {
        err << "error: cannot bind " << sv.host << ':' << sv.port << '\n';
        return 1;
      }
      // Requests are answered with 503 until the dataset has been loaded.
      std::thread loader([&] {
        try {
          const auto criteria = io::read_criteria_json(sv.criteria);
          auto matrices = load_matrices(sv.matrices, criteria);
          svc.install(service::build_snapshot(std::move(matrices), criteria,
                                              program_families(sv.programs, sv.matrices)));
          err << "dataset loaded\n";
        } catch (const std::exception& e) {
          err << "error: " << e.what() << '\n';
          server.stop();
        }
      });
      out << "listening on http://" << sv.host << ':' << port << '\n';
      out.flush();
      server.listen_after_bind();
      loader.join();
      if (!svc.loaded()) return 1;
    } else if (fixture->parsed()) {
      if (fx.kind == "records") {
        fixtures::RecordOptions opts;
        if (seed_opt->count()) opts.seed = fx.seed;
        opts.persons = fx.persons;
        opts.programs = fx.programs;
        opts.cohort_growth = fx.cohort_growth;
        fs::create_directories(fx.out);
        fixtures::write_records(fx.out, fixtures::generate_records(opts));
      } else {
        fixtures::AdversarialOptions opts;
        if (seed_opt->count()) opts.seed = fx.seed;
        const auto matrices = fixtures::adversarial_matrices(opts);
        fs::create_directories(fx.out);
        for (const auto& [year, m] : matrices) {
          io::write_matrix_files(fs::path(fx.out) / ("matrix_" + std::to_string(year) + ".csv"), m);
        }
        io::write_text_file(fs::path(fx.out) / "criteria.json", io::criteria_to_json(matrices.begin()->second.criteria));
      }
    }
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace vetrank::cli
