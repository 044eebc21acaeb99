#include <doctest.h>

#include "fixtures.hpp"
#include "tsarm/datagen.hpp"
#include "tsarm/miner.hpp"

using namespace tsarm;
using namespace tsarm::testing;

namespace {

const TransactionDatabase& db14() {
  static const TransactionDatabase db = [] {
    GenConfig g;
    g.days = 14;
    g.seed = 2022;
    return build_database(generate(g), PreprocessConfig{});
  }();
  return db;
}

MinerConfig quick(Algorithm algo, long long fes, int runs = 2) {
  MinerConfig c;
  c.optimizer.algorithm = algo;
  c.optimizer.max_fes = fes;
  c.optimizer.seed = 3;
  c.runs = runs;
  return c;
}

ArchivedRule entry(int ant, int con, TimeWindow w, RuleMetrics m) {
  ArchivedRule e;
  for (int k = 0; k < ant; ++k) e.rule.antecedent.push_back({k, 0.0, 1.0});
  for (int k = 0; k < con; ++k) e.rule.consequent.push_back({10 + k, 0.0, 1.0});
  e.rule.window = w;
  e.metrics = m;
  return e;
}

}  // namespace

TEST_SUITE("miner") {
  TEST_CASE("interval coverage") {
    const std::vector<TimeWindow> halves = {{1, 12}, {13, 24}};
    CHECK(interval_coverage(halves, 24) == 1.0);
    const std::vector<TimeWindow> one = {{12, 14}};
    CHECK(interval_coverage(one, 24) == 0.125);
    const std::vector<TimeWindow> overlap = {{2, 5}, {4, 7}};
    CHECK(interval_coverage(overlap, 24) == 6.0 / 24.0);
    CHECK(interval_coverage({}, 24) == 0.0);
  }

  TEST_CASE("report") {
    const RuleMetrics m{0.4, 0.8, 3.0 / 18.0, 17.0 / 18.0, 0.5};
    const std::vector<ArchivedRule> single = {entry(2, 1, {12, 14}, m)};
    const auto r = report(single, 24, 4);
    CHECK(r.mean_support == 0.4);
    CHECK(r.mean_confidence == 0.8);
    CHECK(r.mean_inclusion == 3.0 / 18.0);
    CHECK(r.mean_amplitude == 17.0 / 18.0);
    CHECK(r.mean_antlen == 2.0);
    CHECK(r.mean_conlen == 1.0);
    CHECK(r.numrules == 1.0);
    CHECK(r.interval_coverage == 0.125);

    const auto empty = report(std::vector<ArchivedRule>{}, 24, 4);
    CHECK(empty.numrules == 0.0);
    CHECK(empty.mean_support == 0.0);
    CHECK(empty.interval_coverage == 0.0);

    const std::vector<ArchivedRule> two = {entry(1, 1, {1, 1}, {0.2, 0.4, 0.1, 0.6, 0}),
                                           entry(3, 1, {24, 24}, {0.6, 1.0, 0.3, 0.8, 0})};
    const auto mid = report(two, 24, 4);
    CHECK(mid.mean_support == doctest::Approx(0.4));
    CHECK(mid.mean_confidence == doctest::Approx(0.7));
    CHECK(mid.mean_inclusion == doctest::Approx(0.2));
    CHECK(mid.mean_amplitude == doctest::Approx(0.7));
    CHECK(mid.mean_antlen == 2.0);
    CHECK(mid.mean_conlen == 1.0);
    CHECK(mid.interval_coverage == doctest::Approx(2.0 / 24.0));

    const std::vector<ArchivedRule> too_long = {entry(3, 2, {1, 1}, m)};
    CHECK_THROWS_AS(report(too_long, 24, 4), std::invalid_argument);
  }

  TEST_CASE("canonical identity") {
    Rule a;
    a.antecedent = {{0, 1.0, 2.0}, {3, 5.0, 6.0}};
    a.consequent = {{7, 0.5, 0.75}};
    a.window = {3, 9};
    Rule b = a;
    std::swap(b.antecedent[0], b.antecedent[1]);
    CHECK(canonical_identity(a) == canonical_identity(b));

    Rule c = a;
    c.antecedent[0].lo += 2e-5;
    CHECK(canonical_identity(a) == canonical_identity(c));
    c.antecedent[0].lo += 1e-3;
    CHECK(canonical_identity(a) != canonical_identity(c));

    Rule moved = a;
    moved.consequent.push_back(moved.antecedent.back());
    moved.antecedent.pop_back();
    CHECK(canonical_identity(a) != canonical_identity(moved));

    Rule window = a;
    window.window = {3, 10};
    CHECK(canonical_identity(a) != canonical_identity(window));

    RuleArchive archive;
    CHECK(archive.insert(a, {}));
    CHECK_FALSE(archive.insert(b, {}));
    CHECK(archive.insert(window, {}));
    CHECK(archive.size() == 2);
  }

  TEST_CASE("archive soundness and thresholds") {
    const auto& db = db14();
    auto cfg = quick(Algorithm::kDE, 2000, 1);
    cfg.s_min = 0.2;
    cfg.c_min = 0.5;
    const auto result = mine(db, cfg);
    REQUIRE(result.runs.size() == 1);
    const auto& archive = result.runs[0].archive;
    CHECK(archive.size() > 0);
    for (const auto& [key, e] : archive.by_key()) {
      REQUIRE_NOTHROW(validate_rule(e.rule, db));
      const auto again = score(e.rule, db, cfg.weights, cfg.counting);
      REQUIRE(again.support == e.metrics.support);
      REQUIRE(again.confidence == e.metrics.confidence);
      REQUIRE(again.inclusion == e.metrics.inclusion);
      REQUIRE(again.amplitude == e.metrics.amplitude);
      REQUIRE(again.fitness == e.metrics.fitness);
      REQUIRE(e.metrics.support > 0.2);
      REQUIRE(e.metrics.confidence > 0.5);
    }
  }

  TEST_CASE("impossible thresholds give an empty archive and an all-zero report") {
    auto cfg = quick(Algorithm::kPSO, 500, 1);
    cfg.s_min = 1.0;
    const auto result = mine(db14(), cfg);
    CHECK(result.runs[0].archive.empty());
    CHECK(result.runs[0].report.numrules == 0.0);
    CHECK(result.mean_over_runs.mean_support == 0.0);
    CHECK(result.merged.interval_coverage == 0.0);
  }

  TEST_CASE("numrules grows with the budget for budget-independent schedules") {
    for (const auto algo : {Algorithm::kDE, Algorithm::kGA, Algorithm::kPSO, Algorithm::kJDE}) {
      std::size_t prev = 0;
      for (const long long fes : {500LL, 1500LL, 4000LL}) {
        const auto n = mine_run(db14(), quick(algo, fes, 1), 0).archive.size();
        CHECK(n >= prev);
        prev = n;
      }
    }
  }

  TEST_CASE("the miner scores genotypes exactly like the encoding module") {
    const auto& db = db14();
    for (const auto algo : kAllAlgorithms) {
      auto cfg = quick(algo, 1000, 1);
      cfg.optimizer.params.lshade.np_init = 100;
      const auto run = mine_run(db, cfg, 0);
      const Decoder decoder(db, cfg.decode);
      CHECK(fitness(run.trace.best_genotype, db, cfg.weights, decoder) == run.trace.best_fitness);
    }
  }

  TEST_CASE("runs use derived seeds, are ordered, and threads do not change results") {
    auto cfg = quick(Algorithm::kJDE, 800, 3);
    const auto serial = mine(db14(), cfg);
    cfg.threads = 3;
    const auto parallel = mine(db14(), cfg);
    REQUIRE(serial.runs.size() == 3);
    for (int r = 0; r < 3; ++r) {
      const auto& a = serial.runs[static_cast<std::size_t>(r)];
      const auto& b = parallel.runs[static_cast<std::size_t>(r)];
      CHECK(a.run == r);
      CHECK(a.seed == 3u + static_cast<unsigned>(r));
      CHECK(a.trace.best_history == b.trace.best_history);
      CHECK(a.archive.size() == b.archive.size());
    }
    CHECK(serial.mean_over_runs.numrules == parallel.mean_over_runs.numrules);
    CHECK(serial.merged.numrules >= serial.runs[0].report.numrules);
  }

  TEST_CASE("report invariants on a real run") {
    const auto result = mine(db14(), quick(Algorithm::kLSHADE, 3000, 2));
    for (const auto& run : result.runs) {
      const auto& r = run.report;
      CHECK(r.mean_antlen + r.mean_conlen <= 4.0);
      CHECK(r.interval_coverage >= 0.0);
      CHECK(r.interval_coverage <= 1.0);
      bool any_full = false;
      for (const auto& [key, e] : run.archive.by_key()) any_full = any_full || e.rule.window == TimeWindow{1, 24};
      if (any_full) CHECK(r.interval_coverage == 1.0);
    }
  }

  TEST_CASE("rules CSV round trip and text form") {
    const auto& db = db14();
    const auto result = mine(db, quick(Algorithm::kDE, 600, 1));
    const auto rows = rule_rows(result);
    REQUIRE_FALSE(rows.empty());
    TempDir dir;
    write_rules_csv(rows, db.feature_names(), dir / "rules.csv");
    const auto back = read_rules_csv(dir / "rules.csv", db.feature_names());
    REQUIRE(back.size() == rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      CHECK(back[k].algorithm == "DE");
      CHECK(back[k].entry.rule == rows[k].entry.rule);
      CHECK(back[k].entry.metrics.fitness == rows[k].entry.metrics.fitness);
    }

    const auto& e = rows.front().entry;
    const auto text = format_rule(e.rule, e.metrics, db.feature_names());
    CHECK(text.rfind("IF ", 0) == 0);
    CHECK(text.find(" THEN ") != std::string::npos);
    CHECK(text.find("@ Δt=[") != std::string::npos);
    CHECK(text.find("| supp=") != std::string::npos);

    std::ofstream(dir / "bad.csv") << kRulesCsvHeader << "\nDE,0,AVG_TEMPERATURE[1;2],NOPE[1;2],1,2,0,0,0,0,0\n";
    CHECK_THROWS_WITH_AS(read_rules_csv(dir / "bad.csv", db.feature_names()), doctest::Contains("bad.csv:2"),
                         std::runtime_error);
  }

  TEST_CASE("report table layout") {
    const std::vector<LabeledReport> rows = {{"DE", {0.69, 0.87, 0.2, 0.54, 1.72, 1.51, 2707, 1.0}}};
    const auto table = format_report_table(rows);
    CHECK(table.find("Algorithm") == 0);
    CHECK(table.find("Numrules") != std::string::npos);
    CHECK(table.find("0.69") != std::string::npos);
    CHECK(table.find("2707.0") != std::string::npos);
    CHECK(table.find("100%") != std::string::npos);
    CHECK(format_report_csv(rows).find("DE,0.69,0.87,0.2,0.54,1.72,1.51,2707,1\n") != std::string::npos);
  }
}
