#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tsarm/encoding.hpp"
#include "tsarm/measures.hpp"
#include "tsarm/optimizers.hpp"

namespace tsarm {

struct MinerConfig {
  FitnessWeights weights;
  double s_min = 0.0;  // archive only rules with support > s_min
  double c_min = 0.0;  // ... and confidence > c_min
  int runs = 10;
  OptimizerConfig optimizer;  // dimension is overwritten from decode.L
  DecodeConfig decode;
  CountingMode counting = CountingMode::kDays;
  int identity_decimals = 4;
  int threads = 1;

  void validate() const;
};

struct ArchivedRule {
  Rule rule;
  RuleMetrics metrics;
};

/// Key under which two rules count as the same: conditions sorted within each
/// side, endpoints quantized to `decimals` places, plus the window.
std::string canonical_identity(const Rule& rule, int decimals = 4);

/// Distinct rules in canonical-key order; the first insertion of a key wins.
class RuleArchive {
 public:
  explicit RuleArchive(int decimals = 4) : decimals_(decimals) {}

  bool insert(const Rule& rule, const RuleMetrics& metrics);
  void merge(const RuleArchive& other);

  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }
  std::vector<ArchivedRule> entries() const;
  const std::map<std::string, ArchivedRule>& by_key() const { return rules_; }

 private:
  int decimals_;
  std::map<std::string, ArchivedRule> rules_;
};

/// Per-archive summary. For a single run `numrules` is the archive size;
/// for a mean over runs it is the mean archive size.
struct RunReport {
  double mean_support = 0.0;
  double mean_confidence = 0.0;
  double mean_inclusion = 0.0;
  double mean_amplitude = 0.0;
  double mean_antlen = 0.0;
  double mean_conlen = 0.0;
  double numrules = 0.0;
  double interval_coverage = 0.0;  // |union of windows| / K
};

/// |union of windows| / K
double interval_coverage(std::span<const TimeWindow> windows, int K);

/// All-zero for an empty archive.
RunReport report(std::span<const ArchivedRule> rules, int K, int L);
RunReport report(const RuleArchive& archive, int K, int L);

/// Field-wise arithmetic mean; all-zero for no reports.
RunReport mean_report(std::span<const RunReport> reports);

struct RunResult {
  int run = 0;
  std::uint64_t seed = 0;
  RuleArchive archive;
  RunReport report;
  RunTrace<double> trace;
};

struct MiningResult {
  Algorithm algorithm = Algorithm::kDE;
  std::vector<RunResult> runs;  // ordered by run index
  RunReport mean_over_runs;
  RunReport merged;  // report of the union of all run archives
};

/// One independent optimization per run with seed optimizer.seed + run index.
/// Every evaluated genotype that decodes to a rule passing the thresholds is
/// archived.
MiningResult mine(const TransactionDatabase& db, const MinerConfig& config);

/// Single run; exposed so callers can schedule runs themselves.
RunResult mine_run(const TransactionDatabase& db, const MinerConfig& config, int run);

// Text and CSV forms.

std::string format_rule(const Rule& rule, const RuleMetrics& metrics, const std::vector<std::string>& names);

/// "NAME[lo;hi]&NAME[lo;hi]"
std::string format_conditions(std::span<const AttributeCondition> conditions,
                              const std::vector<std::string>& names);

inline constexpr const char* kRulesCsvHeader =
    "algorithm,run,antecedent,consequent,t1,t2,support,confidence,inclusion,amplitude,fitness";

struct RuleRow {
  std::string algorithm;
  int run = 0;
  ArchivedRule entry;
};

void write_rules_csv(std::span<const RuleRow> rows, const std::vector<std::string>& names,
                     const std::filesystem::path& path);
/// Feature names are resolved against `names`; unknown names, bad numbers or
/// wrong field counts raise std::runtime_error with the line number.
std::vector<RuleRow> read_rules_csv(const std::filesystem::path& path, const std::vector<std::string>& names);

std::vector<RuleRow> rule_rows(const MiningResult& result);

struct LabeledReport {
  std::string label;
  RunReport report;
};

/// Aligned table with columns Algorithm, supp, conf, incl, ampl, antlen,
/// conlen, Numrules, Intervals.
std::string format_report_table(std::span<const LabeledReport> rows);
std::string format_report_csv(std::span<const LabeledReport> rows);

}  // namespace tsarm
