#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include "tsarm/datagen.hpp"
#include "tsarm/miner.hpp"
#include "tsarm/preprocess.hpp"

namespace tsarm::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSeedEnv = "TSARM_SEED";

struct GenerateArgs {
  GenConfig config;
  std::string start = "2022-09-15";
  std::string out;
};

struct PreprocessArgs {
  PreprocessConfig config;
  std::string in, out, meta;
};

struct MineArgs {
  MinerConfig config;
  std::string algo = "all";
  std::string threshold = "deterministic";
  std::string counting = "days";
  std::string db, meta;
  std::string out_rules = "rules.csv";
  std::string out_report = "report.txt";
  std::string out_report_csv;
};

struct ReportArgs {
  std::string rules, out, csv;
  int K = 24;
  int L = 4;
  int runs = 0;
};

void add_generate_options(CLI::App* app, GenerateArgs& a, bool with_io) {
  app->add_option("--days", a.config.days, "Number of days to simulate");
  app->add_option("--cadence", a.config.cadence_seconds, "Seconds between records");
  app->add_option("--start", a.start, "First calendar date (YYYY-MM-DD)");
  app->add_option("--drop-rate", a.config.drop_rate, "Fraction of records randomly omitted, in [0, 1)");
  app->add_option("--mp", a.config.measuring_point, "Measuring point identifier");
  if (with_io) {
    app->add_option("--seed", a.config.seed, "Random seed")->envname(kSeedEnv);
    app->add_option("--out", a.out, "Output sensor CSV")->required();
  }
}

void add_preprocess_options(CLI::App* app, PreprocessArgs& a, bool with_io) {
  app->add_option("--frame", a.config.frame_duration_seconds, "Time frame length in seconds (divides 86400)");
  app->add_option("--classes", a.config.K, "Number of time-of-day classes K");
  app->add_option("--min-records", a.config.min_records_per_frame, "Frames with fewer records are dropped");
  if (with_io) {
    app->add_option("--in", a.in, "Input sensor CSV")->required();
    app->add_option("--out", a.out, "Output transactions CSV")->required();
    app->add_option("--meta", a.meta, "Metadata sidecar (default: <out>.meta.json)");
  }
}

void add_mine_options(CLI::App* app, MineArgs& a, bool with_io) {
  auto& c = a.config;
  auto& p = c.optimizer.params;
  app->add_option("--algo", a.algo, "Algorithm: de, ga, pso, jde, lshade or all")
      ->check(CLI::IsMember({"de", "ga", "pso", "jde", "lshade", "all"}, CLI::ignore_case));
  app->add_option("--fes", c.optimizer.max_fes, "Objective evaluations per run (MaxFEs)");
  app->add_option("--np", c.optimizer.population, "Population size (LSHADE uses --lshade-np-init)");
  app->add_option("--runs", c.runs, "Independent runs per algorithm; run r uses seed + r");
  app->add_option("--threads", c.threads, "Worker threads across runs");
  app->add_option("--max-len", c.decode.L, "Maximum number of conditions per rule (L)");
  app->add_option("--threshold", a.threshold, "Condition presence test: deterministic (gene >= 0.5) or stochastic")
      ->check(CLI::IsMember({"deterministic", "stochastic"}));
  app->add_option("--counting", a.counting, "Support/confidence counting unit: days or transactions")
      ->check(CLI::IsMember({"days", "transactions"}));
  app->add_option("--alpha", c.weights.alpha, "Fitness weight of support");
  app->add_option("--beta", c.weights.beta, "Fitness weight of confidence");
  app->add_option("--gamma", c.weights.gamma, "Fitness weight of inclusion");
  app->add_option("--delta", c.weights.delta, "Fitness weight of amplitude");
  app->add_option("--smin", c.s_min, "Archive rules with support above this");
  app->add_option("--cmin", c.c_min, "Archive rules with confidence above this");
  app->add_option("--identity-decimals", c.identity_decimals, "Decimal places used to deduplicate rules");
  app->add_option("--de-f", p.de.F, "DE scale factor F");
  app->add_option("--de-cr", p.de.CR, "DE crossover rate CR");
  app->add_option("--ga-pm", p.ga.pm, "GA mutation probability pm");
  app->add_option("--ga-pc", p.ga.pc, "GA crossover probability pc");
  app->add_option("--pso-c1", p.pso.c1, "PSO cognitive coefficient c1");
  app->add_option("--pso-c2", p.pso.c2, "PSO social coefficient c2");
  app->add_option("--pso-w", p.pso.w, "PSO inertia weight w");
  app->add_option("--lshade-h", p.lshade.H, "LSHADE history size H");
  app->add_option("--lshade-p", p.lshade.p, "LSHADE pbest fraction p");
  app->add_option("--lshade-arc", p.lshade.arc_rate, "LSHADE archive rate r_arc");
  app->add_option("--lshade-np-init", p.lshade.np_init, "LSHADE initial population (0 = 18 * D)");
  app->add_option("--lshade-np-min", p.lshade.np_min, "LSHADE final population");
  app->add_option("--jde-f0", p.jde.F0, "jDE initial F");
  app->add_option("--jde-cr0", p.jde.CR0, "jDE initial CR");
  app->add_option("--jde-tau", p.jde.tau, "jDE self-adaptation probability tau");
  if (with_io) {
    app->add_option("--seed", c.optimizer.seed, "Base random seed")->envname(kSeedEnv);
    app->add_option("--db", a.db, "Transactions CSV")->required();
    app->add_option("--meta", a.meta, "Metadata sidecar (default: <db>.meta.json)");
  }
  app->add_option("--out-rules", a.out_rules, "Rules CSV");
  app->add_option("--out-report", a.out_report, "Report tables (text)");
  app->add_option("--out-report-csv", a.out_report_csv, "Report tables (CSV, default: <out-report>.csv)");
}

void add_report_options(CLI::App* app, ReportArgs& a) {
  app->add_option("--rules", a.rules, "Rules CSV written by mine")->required();
  app->add_option("--classes", a.K, "Number of time-of-day classes K");
  app->add_option("--max-len", a.L, "Maximum rule length L");
  app->add_option("--runs", a.runs, "Runs per algorithm, counting runs without rules (0 = runs present)");
  app->add_option("--out", a.out, "Write the table here instead of stdout");
  app->add_option("--csv", a.csv, "Also write a CSV twin of the table");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

int do_generate(GenerateArgs& a, std::ostream& out) {
  a.config.start_date = parse_date(a.start);
  const auto records = generate(a.config);
  write_csv(records, a.out);
  out << "wrote " << records.size() << " records to " << a.out << '\n';
  return 0;
}

int do_preprocess(PreprocessArgs& a, std::ostream& out) {
  a.config.validate();
  if (!fs::exists(a.in)) throw std::runtime_error("input file '" + a.in + "' does not exist");
  const auto records = parse_sensor_csv(a.in);
  const auto db = build_database(records, a.config);
  write_transactions_csv(db, a.out);
  const fs::path meta = a.meta.empty() ? metadata_path_for(a.out) : fs::path(a.meta);
  write_metadata(db, meta);
  out << "wrote " << db.rows() << " transactions x " << db.cols() << " features to " << a.out << '\n';
  return 0;
}

int do_mine(MineArgs& a, std::ostream& out) {
  auto& c = a.config;
  c.decode.threshold_mode = a.threshold == "stochastic" ? ThresholdMode::kStochastic : ThresholdMode::kDeterministic;
  c.counting = a.counting == "transactions" ? CountingMode::kTransactions : CountingMode::kDays;
  c.validate();
  c.optimizer.dimension = genotype_length(c.decode.L);

  std::vector<Algorithm> algorithms;
  if (CLI::detail::to_lower(a.algo) == "all")
    algorithms.assign(std::begin(kAllAlgorithms), std::end(kAllAlgorithms));
  else
    algorithms.push_back(*parse_algorithm(a.algo));
  for (const auto algo : algorithms) {
    auto check = c.optimizer;
    check.algorithm = algo;
    check.validate();
  }

  if (!fs::exists(a.db)) throw std::runtime_error("database file '" + a.db + "' does not exist");
  const fs::path meta = a.meta.empty() ? metadata_path_for(a.db) : fs::path(a.meta);
  const auto db = read_database(a.db, meta);

  std::vector<RuleRow> rows;
  std::string text, csv;
  std::vector<LabeledReport> summary;
  for (const auto algo : algorithms) {
    MinerConfig cfg = c;
    cfg.optimizer.algorithm = algo;
    const auto result = mine(db, cfg);
    const std::string name(algorithm_name(algo));

    std::vector<LabeledReport> table;
    for (const auto& run : result.runs) {
      out << name << " run " << run.run << ": seed=" << run.seed << " evaluations=" << run.trace.evaluations_used
          << " best_fitness=" << run.trace.best_fitness << " numrules=" << run.archive.size() << '\n';
      table.push_back({"run " + std::to_string(run.run), run.report});
    }
    table.push_back({"mean", result.mean_over_runs});
    table.push_back({"merged", result.merged});
    text += name + " (per run; 'mean' averages the runs, 'merged' reports the union of run archives)\n" +
            format_report_table(table) + '\n';
    for (auto& row : table) row.label = name + "/" + row.label;
    const auto block = format_report_csv(table);
    csv += csv.empty() ? block : block.substr(block.find('\n') + 1);

    summary.push_back({name, result.mean_over_runs});
    const auto r = rule_rows(result);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  text += "Comparison (mean over runs)\n" + format_report_table(summary);

  write_rules_csv(rows, db.feature_names(), a.out_rules);
  write_text(a.out_report, text);
  write_text(a.out_report_csv.empty() ? a.out_report + ".csv" : a.out_report_csv, csv);
  out << text;
  return 0;
}

int do_report(const ReportArgs& a, std::ostream& out) {
  if (a.K < 1) throw std::invalid_argument("classes: must be >= 1");
  if (a.runs < 0) throw std::invalid_argument("runs: must be >= 0");
  const std::vector<std::string> names(kFeatureNames.begin(), kFeatureNames.end());
  const auto rows = read_rules_csv(a.rules, names);

  // algorithm -> run -> rules, algorithms in first-seen order.
  std::vector<std::string> order;
  std::map<std::string, std::map<int, std::vector<ArchivedRule>>> grouped;
  for (const auto& row : rows) {
    if (!grouped.count(row.algorithm)) order.push_back(row.algorithm);
    grouped[row.algorithm][row.run].push_back(row.entry);
  }
  if (order.empty())
    for (const auto algo : kAllAlgorithms) order.emplace_back(algorithm_name(algo));

  std::vector<LabeledReport> table;
  for (const auto& name : order) {
    std::vector<RunReport> reports;
    for (const auto& [run, rules] : grouped[name]) reports.push_back(report(rules, a.K, a.L));
    while (static_cast<int>(reports.size()) < a.runs) reports.emplace_back();
    table.push_back({name, mean_report(reports)});
  }
  const auto text = format_report_table(table);
  if (a.out.empty())
    out << text;
  else
    write_text(a.out, text);
  if (!a.csv.empty()) write_text(a.csv, format_report_csv(table));
  return 0;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-series numerical association rule mining with population-based metaheuristics", "tsarm"};
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "Config file (TOML/INI, one [section] per subcommand); flags override it");
  app.require_subcommand(1);
  app.footer("Precedence: command-line flags > " + std::string(kSeedEnv) +
             " (seed only) > config file > built-in defaults.");

  GenerateArgs gen;
  auto* generate_cmd = app.add_subcommand("generate", "Write synthetic sensor telemetry as CSV");
  add_generate_options(generate_cmd, gen, true);

  PreprocessArgs pre;
  auto* preprocess_cmd = app.add_subcommand("preprocess", "Reduce sensor CSV to a time-frame transaction database");
  add_preprocess_options(preprocess_cmd, pre, true);

  MineArgs mine_args;
  auto* mine_cmd = app.add_subcommand("mine", "Mine time-windowed numerical association rules");
  add_mine_options(mine_cmd, mine_args, true);

  ReportArgs rep;
  auto* report_cmd = app.add_subcommand("report", "Summarize a rules CSV as a comparison table");
  add_report_options(report_cmd, rep);

  GenerateArgs pgen;
  PreprocessArgs ppre;
  MineArgs pmine;
  std::string workdir = ".";
  auto* pipeline_cmd = app.add_subcommand("pipeline", "generate, preprocess, mine and report in one go");
  pipeline_cmd->add_option("--workdir", workdir, "Directory for raw.csv, transactions.csv, rules.csv, report.txt");
  pipeline_cmd->add_option("--seed", pmine.config.optimizer.seed, "Seed for data generation and mining")
      ->envname(kSeedEnv);
  add_generate_options(pipeline_cmd, pgen, false);
  add_preprocess_options(pipeline_cmd, ppre, false);
  add_mine_options(pipeline_cmd, pmine, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*generate_cmd) return do_generate(gen, out);
    if (*preprocess_cmd) return do_preprocess(pre, out);
    if (*mine_cmd) return do_mine(mine_args, out);
    if (*report_cmd) return do_report(rep, out);
    if (*pipeline_cmd) {
      const fs::path dir(workdir);
      fs::create_directories(dir);
      pgen.config.seed = pmine.config.optimizer.seed;
      pgen.out = (dir / "raw.csv").string();
      ppre.in = pgen.out;
      ppre.out = (dir / "transactions.csv").string();
      pmine.db = ppre.out;
      if (pmine.out_rules == "rules.csv") pmine.out_rules = (dir / "rules.csv").string();
      if (pmine.out_report == "report.txt") pmine.out_report = (dir / "report.txt").string();
      do_generate(pgen, out);
      do_preprocess(ppre, out);
      return do_mine(pmine, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("tsarm");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace tsarm::cli
