#include "tsarm/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tsarm {

void FitnessWeights::validate() const {
  if (alpha < 0 || beta < 0 || gamma < 0 || delta < 0)
    throw std::invalid_argument("fitness weights must be non-negative");
  if (!(sum() > 0)) throw std::invalid_argument("fitness weights must not all be zero");
}

Decoder::Decoder(const TransactionDatabase& db, DecodeConfig config) : db_(&db), config_(std::move(config)) {
  if (config_.L < 2) throw std::invalid_argument("L (max rule length): must be >= 2");
  std::vector<int> excluded;
  if (config_.excluded_features) {
    excluded = *config_.excluded_features;
  } else {
    for (const char* name : {"SEQUENCE", "CLASS"})
      if (const int idx = db.find_feature(name); idx >= 0) excluded.push_back(idx);
  }
  for (const int idx : excluded)
    if (idx < 0 || idx >= db.num_features())
      throw std::invalid_argument("excluded feature index " + std::to_string(idx) + " out of range");
  for (int f = 0; f < db.num_features(); ++f)
    if (std::find(excluded.begin(), excluded.end(), f) == excluded.end()) selectable_.push_back(f);
  if (selectable_.size() < 2) throw std::invalid_argument("fewer than two selectable features");
}

int Decoder::select_feature(double gene) const {
  const auto n = static_cast<int>(selectable_.size());
  const int cell = std::clamp(static_cast<int>(std::floor(gene * n)), 0, n - 1);
  return selectable_[static_cast<std::size_t>(cell)];
}

TimeWindow decode_window(double g1, double g2, int K) {
  auto endpoint = [K](double g) { return std::clamp(static_cast<int>(std::floor(K * g)) + 1, 1, K); };
  const int a = endpoint(g1), b = endpoint(g2);
  return {std::min(a, b), std::max(a, b)};
}

int decode_cutting_point(double gene, int L) {
  return std::clamp(static_cast<int>(std::floor(gene * (L - 1))) + 1, 1, L - 1);
}

std::optional<Rule> Decoder::decode(const Eigen::Ref<const Genotype>& genotype, Rng* rng) const {
  const int L = config_.L;
  if (genotype.size() != genotype_length(L))
    throw std::invalid_argument("genotype length " + std::to_string(genotype.size()) + ", expected " +
                                std::to_string(genotype_length(L)));
  if (!((genotype.array() >= 0.0).all() && (genotype.array() <= 1.0).all()))
    throw std::invalid_argument("genotype elements must lie in [0, 1]");
  const bool stochastic = config_.threshold_mode == ThresholdMode::kStochastic;
  if (stochastic && rng == nullptr) throw std::invalid_argument("stochastic threshold mode needs an rng");

  std::vector<bool> enabled(static_cast<std::size_t>(L));
  for (int j = 0; j < L; ++j) {
    const double threshold = genotype(4 * j + 3);
    enabled[static_cast<std::size_t>(j)] = stochastic ? rng->uniform() < threshold : threshold >= 0.5;
  }

  std::vector<int> order(static_cast<std::size_t>(L));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return genotype(4 * a) < genotype(4 * b); });

  std::vector<AttributeCondition> conditions;
  conditions.reserve(static_cast<std::size_t>(L));
  for (const int j : order) {
    if (!enabled[static_cast<std::size_t>(j)]) continue;
    const int feature = select_feature(genotype(4 * j));
    if (std::any_of(conditions.begin(), conditions.end(),
                    [feature](const AttributeCondition& c) { return c.feature == feature; }))
      continue;
    const double lb = db_->domain_lo()(feature), ub = db_->domain_hi()(feature);
    const double u = genotype(4 * j + 1), v = genotype(4 * j + 2);
    const double lo = std::clamp(lb + (ub - lb) * std::min(u, v), lb, ub);
    const double hi = std::clamp(lb + (ub - lb) * std::max(u, v), lo, ub);
    conditions.push_back({feature, lo, hi});
  }

  const auto enabled_count = static_cast<int>(conditions.size());
  if (enabled_count < 2) return std::nullopt;

  const int split = std::min(decode_cutting_point(genotype(4 * L + 2), L), enabled_count - 1);
  Rule rule;
  rule.antecedent.assign(conditions.begin(), conditions.begin() + split);
  rule.consequent.assign(conditions.begin() + split, conditions.end());
  rule.window = decode_window(genotype(4 * L), genotype(4 * L + 1), db_->K());
  return rule;
}

double weighted_fitness(const RuleMetrics& m, const FitnessWeights& w) {
  return (w.alpha * m.support + w.beta * m.confidence + w.gamma * m.inclusion + w.delta * m.amplitude) / w.sum();
}

RuleMetrics score(const Rule& rule, const TransactionDatabase& db, const FitnessWeights& weights, CountingMode mode) {
  RuleMetrics m = evaluate(rule, db, mode);
  m.fitness = weighted_fitness(m, weights);
  return m;
}

double fitness(const Eigen::Ref<const Genotype>& genotype, const TransactionDatabase& db,
               const FitnessWeights& weights, const Decoder& decoder, Rng* rng, CountingMode mode) {
  const auto rule = decoder.decode(genotype, rng);
  return rule ? score(*rule, db, weights, mode).fitness : 0.0;
}

}  // namespace tsarm
