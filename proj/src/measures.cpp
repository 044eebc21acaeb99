#include "tsarm/measures.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tsarm {

bool matches(const TransactionDatabase& db, Eigen::Index row, std::span<const AttributeCondition> conditions) {
  for (const auto& c : conditions) {
    const double v = db.value(row, c.feature);
    if (!(c.lo <= v && v <= c.hi)) return false;
  }
  return true;
}

void validate_rule(const Rule& rule, const TransactionDatabase& db) {
  if (rule.antecedent.empty() || rule.consequent.empty())
    throw std::invalid_argument("rule: antecedent and consequent must be non-empty");
  auto check = [&](const AttributeCondition& c) {
    if (c.feature < 0 || c.feature >= db.num_features())
      throw std::invalid_argument("rule: feature index " + std::to_string(c.feature) + " out of range");
    if (!(c.lo <= c.hi)) throw std::invalid_argument("rule: condition has lo > hi");
    if (c.lo < db.domain_lo()(c.feature) || c.hi > db.domain_hi()(c.feature))
      throw std::invalid_argument("rule: condition interval leaves the feature domain");
  };
  for (const auto& c : rule.antecedent) check(c);
  for (const auto& c : rule.consequent) check(c);
  for (const auto& a : rule.antecedent)
    for (const auto& c : rule.consequent)
      if (a.feature == c.feature) throw std::invalid_argument("rule: antecedent and consequent share a feature");
  if (rule.window.t1 < 1 || rule.window.t1 > rule.window.t2 || rule.window.t2 > db.K())
    throw std::invalid_argument("rule: window outside [1, K]");
}

RuleCounts count(const Rule& rule, const TransactionDatabase& db, CountingMode mode) {
  RuleCounts counts;
  if (mode == CountingMode::kDays) {
    // Per-day flags: bit 0 = antecedent matched, bit 1 = whole rule matched.
    std::vector<unsigned char> seen(static_cast<std::size_t>(db.n_sequences()), 0);
    for (Eigen::Index i = 0; i < db.rows(); ++i) {
      if (!rule.window.contains(db.klass(i))) continue;
      auto& flag = seen[static_cast<std::size_t>(db.day(i))];
      if (flag & 2u) continue;
      if (!matches(db, i, rule.antecedent)) continue;
      flag |= 1u;
      if (matches(db, i, rule.consequent)) flag |= 2u;
    }
    for (const auto flag : seen) {
      counts.antecedent += (flag & 1u) ? 1 : 0;
      counts.both += (flag & 2u) ? 1 : 0;
    }
    counts.total = db.n_sequences();
  } else {
    for (Eigen::Index i = 0; i < db.rows(); ++i) {
      if (!rule.window.contains(db.klass(i))) continue;
      ++counts.total;
      if (!matches(db, i, rule.antecedent)) continue;
      ++counts.antecedent;
      if (matches(db, i, rule.consequent)) ++counts.both;
    }
  }
  return counts;
}

double support_t(const Rule& rule, const TransactionDatabase& db, CountingMode mode) {
  const auto c = count(rule, db, mode);
  return c.total == 0 ? 0.0 : static_cast<double>(c.both) / static_cast<double>(c.total);
}

double confidence_t(const Rule& rule, const TransactionDatabase& db, CountingMode mode) {
  const auto c = count(rule, db, mode);
  return c.antecedent == 0 ? 0.0 : static_cast<double>(c.both) / static_cast<double>(c.antecedent);
}

double inclusion(const Rule& rule, int M) {
  if (M <= 0) throw std::invalid_argument("inclusion: M must be positive");
  return static_cast<double>(rule.size()) / M;
}

double amplitude(const Rule& rule, const TransactionDatabase& db) {
  double sum = 0.0;
  auto add = [&](const AttributeCondition& c) {
    const double span = db.domain_hi()(c.feature) - db.domain_lo()(c.feature);
    if (span > 0.0) sum += (c.hi - c.lo) / span;
  };
  std::for_each(rule.antecedent.begin(), rule.antecedent.end(), add);
  std::for_each(rule.consequent.begin(), rule.consequent.end(), add);
  return 1.0 - sum / db.num_features();
}

RuleMetrics evaluate(const Rule& rule, const TransactionDatabase& db, CountingMode mode) {
  const auto c = count(rule, db, mode);
  RuleMetrics m;
  m.support = c.total == 0 ? 0.0 : static_cast<double>(c.both) / static_cast<double>(c.total);
  m.confidence = c.antecedent == 0 ? 0.0 : static_cast<double>(c.both) / static_cast<double>(c.antecedent);
  m.inclusion = inclusion(rule, db.num_features());
  m.amplitude = amplitude(rule, db);
  return m;
}

}  // namespace tsarm
