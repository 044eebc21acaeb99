#include "tsarm/miner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace tsarm {

void MinerConfig::validate() const {
  weights.validate();
  if (runs < 1) throw std::invalid_argument("runs: must be >= 1");
  if (!(s_min >= 0.0 && s_min <= 1.0)) throw std::invalid_argument("s_min: must lie in [0, 1]");
  if (!(c_min >= 0.0 && c_min <= 1.0)) throw std::invalid_argument("c_min: must lie in [0, 1]");
  if (identity_decimals < 0 || identity_decimals > 12)
    throw std::invalid_argument("identity_decimals: must lie in [0, 12]");
  if (threads < 1) throw std::invalid_argument("threads: must be >= 1");
}

std::string canonical_identity(const Rule& rule, int decimals) {
  const double scale = std::pow(10.0, decimals);
  using Quantized = std::tuple<int, long long, long long>;
  auto side = [&](const std::vector<AttributeCondition>& conditions) {
    std::vector<Quantized> q;
    q.reserve(conditions.size());
    for (const auto& c : conditions) q.emplace_back(c.feature, std::llround(c.lo * scale), std::llround(c.hi * scale));
    std::sort(q.begin(), q.end());
    std::string out;
    for (const auto& [f, lo, hi] : q)
      out += std::to_string(f) + '[' + std::to_string(lo) + ',' + std::to_string(hi) + ']';
    return out;
  };
  return side(rule.antecedent) + "=>" + side(rule.consequent) + '@' + std::to_string(rule.window.t1) + '-' +
         std::to_string(rule.window.t2);
}

bool RuleArchive::insert(const Rule& rule, const RuleMetrics& metrics) {
  return rules_.try_emplace(canonical_identity(rule, decimals_), ArchivedRule{rule, metrics}).second;
}

void RuleArchive::merge(const RuleArchive& other) {
  for (const auto& [key, entry] : other.rules_) rules_.try_emplace(key, entry);
}

std::vector<ArchivedRule> RuleArchive::entries() const {
  std::vector<ArchivedRule> out;
  out.reserve(rules_.size());
  for (const auto& [key, entry] : rules_) out.push_back(entry);
  return out;
}

double interval_coverage(std::span<const TimeWindow> windows, int K) {
  if (K < 1) throw std::invalid_argument("interval_coverage: K must be >= 1");
  std::vector<bool> covered(static_cast<std::size_t>(K), false);
  for (const auto& w : windows)
    for (int t = std::max(w.t1, 1); t <= std::min(w.t2, K); ++t) covered[static_cast<std::size_t>(t - 1)] = true;
  return static_cast<double>(std::count(covered.begin(), covered.end(), true)) / K;
}

RunReport report(std::span<const ArchivedRule> rules, int K, int L) {
  RunReport r;
  if (rules.empty()) return r;
  std::vector<TimeWindow> windows;
  windows.reserve(rules.size());
  for (const auto& e : rules) {
    if (static_cast<int>(e.rule.size()) > L) throw std::invalid_argument("report: rule longer than L");
    r.mean_support += e.metrics.support;
    r.mean_confidence += e.metrics.confidence;
    r.mean_inclusion += e.metrics.inclusion;
    r.mean_amplitude += e.metrics.amplitude;
    r.mean_antlen += static_cast<double>(e.rule.antecedent.size());
    r.mean_conlen += static_cast<double>(e.rule.consequent.size());
    windows.push_back(e.rule.window);
  }
  const auto n = static_cast<double>(rules.size());
  r.mean_support /= n;
  r.mean_confidence /= n;
  r.mean_inclusion /= n;
  r.mean_amplitude /= n;
  r.mean_antlen /= n;
  r.mean_conlen /= n;
  r.numrules = n;
  r.interval_coverage = interval_coverage(windows, K);
  return r;
}

RunReport report(const RuleArchive& archive, int K, int L) {
  const auto entries = archive.entries();
  return report(entries, K, L);
}

RunReport mean_report(std::span<const RunReport> reports) {
  RunReport m;
  if (reports.empty()) return m;
  for (const auto& r : reports) {
    m.mean_support += r.mean_support;
    m.mean_confidence += r.mean_confidence;
    m.mean_inclusion += r.mean_inclusion;
    m.mean_amplitude += r.mean_amplitude;
    m.mean_antlen += r.mean_antlen;
    m.mean_conlen += r.mean_conlen;
    m.numrules += r.numrules;
    m.interval_coverage += r.interval_coverage;
  }
  const auto n = static_cast<double>(reports.size());
  m.mean_support /= n;
  m.mean_confidence /= n;
  m.mean_inclusion /= n;
  m.mean_amplitude /= n;
  m.mean_antlen /= n;
  m.mean_conlen /= n;
  m.numrules /= n;
  m.interval_coverage /= n;
  return m;
}

RunResult mine_run(const TransactionDatabase& db, const MinerConfig& config, int run) {
  config.validate();
  const Decoder decoder(db, config.decode);

  OptimizerConfig opt = config.optimizer;
  opt.dimension = decoder.dimension();
  opt.seed = config.optimizer.seed + static_cast<std::uint64_t>(run);

  RunResult result;
  result.run = run;
  result.seed = opt.seed;
  result.archive = RuleArchive(config.identity_decimals);

  // Threshold draws get their own stream so they do not perturb the optimizer's.
  Rng threshold_rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
  std::optional<ArchivedRule> last;

  Objective<double> objective = [&](const Eigen::Ref<const Genotype>& x) {
    last.reset();
    const auto rule = decoder.decode(x, &threshold_rng);
    if (!rule) return 0.0;
    const RuleMetrics metrics = score(*rule, db, config.weights, config.counting);
    last = ArchivedRule{*rule, metrics};
    return metrics.fitness;
  };
  EvaluationHook<double> hook = [&](const Eigen::Ref<const Genotype>&, double) {
    if (last && last->metrics.support > config.s_min && last->metrics.confidence > config.c_min)
      result.archive.insert(last->rule, last->metrics);
  };

  result.trace = optimize<double>(opt, objective, hook);
  result.report = report(result.archive, db.K(), config.decode.L);
  return result;
}

MiningResult mine(const TransactionDatabase& db, const MinerConfig& config) {
  config.validate();
  MiningResult out;
  out.algorithm = config.optimizer.algorithm;
  out.runs.resize(static_cast<std::size_t>(config.runs));

  const int workers = std::min(config.threads, config.runs);
  if (workers <= 1) {
    for (int r = 0; r < config.runs; ++r) out.runs[static_cast<std::size_t>(r)] = mine_run(db, config, r);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int r = next++; r < config.runs; r = next++) {
          try {
            out.runs[static_cast<std::size_t>(r)] = mine_run(db, config, r);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  std::vector<RunReport> reports;
  RuleArchive merged(config.identity_decimals);
  for (const auto& run : out.runs) {
    reports.push_back(run.report);
    merged.merge(run.archive);
  }
  out.mean_over_runs = mean_report(reports);
  out.merged = report(merged, db.K(), config.decode.L);
  return out;
}

}  // namespace tsarm
