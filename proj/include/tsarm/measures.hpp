#pragma once

#include <span>
#include <vector>

#include "tsarm/preprocess.hpp"

namespace tsarm {

/// feature in [lo, hi], both ends inclusive.
struct AttributeCondition {
  int feature = 0;
  double lo = 0.0;
  double hi = 0.0;

  bool operator==(const AttributeCondition&) const = default;
};

/// Inclusive range [t1, t2] of CLASS values.
struct TimeWindow {
  int t1 = 1;
  int t2 = 1;

  bool contains(int klass) const { return t1 <= klass && klass <= t2; }
  int length() const { return t2 - t1 + 1; }
  bool operator==(const TimeWindow&) const = default;
};

struct Rule {
  std::vector<AttributeCondition> antecedent;
  std::vector<AttributeCondition> consequent;
  TimeWindow window;

  std::size_t size() const { return antecedent.size() + consequent.size(); }
  bool operator==(const Rule&) const = default;
};

struct RuleMetrics {
  double support = 0.0;
  double confidence = 0.0;
  double inclusion = 0.0;
  double amplitude = 0.0;
  double fitness = 0.0;
};

/// Unit at which support and confidence are counted. `kDays` counts distinct
/// SEQUENCE values having at least one matching transaction inside the window;
/// `kTransactions` counts the matching transactions themselves.
enum class CountingMode { kDays, kTransactions };

/// Raw numerators and denominators behind support_t and confidence_t.
struct RuleCounts {
  long long both = 0;        // X and Y matched inside the window
  long long antecedent = 0;  // X matched inside the window
  long long total = 0;       // support denominator
};

template <typename Derived>
bool matches(const Eigen::DenseBase<Derived>& row, std::span<const AttributeCondition> conditions) {
  for (const auto& c : conditions) {
    const double v = row(c.feature);
    if (!(c.lo <= v && v <= c.hi)) return false;
  }
  return true;
}

bool matches(const TransactionDatabase& db, Eigen::Index row, std::span<const AttributeCondition> conditions);

/// Throws std::invalid_argument if the rule is not well formed against `db`:
/// empty side, shared feature between sides, lo > hi, interval outside the
/// feature domain, or window outside [1, K].
void validate_rule(const Rule& rule, const TransactionDatabase& db);

RuleCounts count(const Rule& rule, const TransactionDatabase& db, CountingMode mode = CountingMode::kDays);

double support_t(const Rule& rule, const TransactionDatabase& db, CountingMode mode = CountingMode::kDays);

/// 0 when the antecedent never matches inside the window.
double confidence_t(const Rule& rule, const TransactionDatabase& db, CountingMode mode = CountingMode::kDays);

/// (|X| + |Y|) / M
double inclusion(const Rule& rule, int M);

/// 1 - (1/M) * sum over conditions of (hi - lo) / (domain_hi - domain_lo).
/// Constant features contribute zero width.
double amplitude(const Rule& rule, const TransactionDatabase& db);

/// All four measures; `fitness` is left at 0.
RuleMetrics evaluate(const Rule& rule, const TransactionDatabase& db, CountingMode mode = CountingMode::kDays);

}  // namespace tsarm
