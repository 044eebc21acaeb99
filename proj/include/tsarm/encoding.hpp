#pragma once

#include <optional>
#include <vector>

#include "tsarm/measures.hpp"
#include "tsarm/random.hpp"
#include "tsarm/types.hpp"

namespace tsarm {

enum class ThresholdMode {
  kDeterministic,  // condition present iff its threshold gene >= 0.5
  kStochastic,     // condition present iff rand(0,1) < threshold gene
};

struct DecodeConfig {
  ThresholdMode threshold_mode = ThresholdMode::kDeterministic;
  int L = 4;  // maximum rule length
  /// Features that can never enter a rule. Unset means "the columns named
  /// SEQUENCE and CLASS, if present".
  std::optional<std::vector<int>> excluded_features;
};

struct FitnessWeights {
  double alpha = 1.0;  // support
  double beta = 1.0;   // confidence
  double gamma = 1.0;  // inclusion
  double delta = 1.0;  // amplitude

  void validate() const;
  double sum() const { return alpha + beta + gamma + delta; }
};

/// Genotype length for rules of at most `L` conditions: L quadruples
/// (selector, bound, bound, threshold), two window genes, one cutting point.
constexpr int genotype_length(int L) { return 4 * L + 3; }

/// Precomputed decoding context for one database.
class Decoder {
 public:
  Decoder(const TransactionDatabase& db, DecodeConfig config);

  const DecodeConfig& config() const { return config_; }
  const std::vector<int>& selectable_features() const { return selectable_; }
  int dimension() const { return genotype_length(config_.L); }

  /// The decoded rule, or nullopt when fewer than two distinct conditions are
  /// enabled. `rng` is consulted only in stochastic threshold mode and must be
  /// non-null there. Throws on a genotype of the wrong length.
  std::optional<Rule> decode(const Eigen::Ref<const Genotype>& genotype, Rng* rng = nullptr) const;

  /// Feature picked by a selector gene in [0, 1].
  int select_feature(double gene) const;

 private:
  const TransactionDatabase* db_;
  DecodeConfig config_;
  std::vector<int> selectable_;
};

/// Window [t1, t2] from two genes: each maps to floor(K * g) + 1 clamped to
/// [1, K], then the pair is ordered.
TimeWindow decode_window(double g1, double g2, int K);

/// floor(g * (L - 1)) + 1 clamped to [1, L - 1].
int decode_cutting_point(double gene, int L);

/// (alpha*supp + beta*conf + gamma*incl + delta*ampl) / (alpha+beta+gamma+delta)
double weighted_fitness(const RuleMetrics& metrics, const FitnessWeights& weights);

/// Metrics of a decoded rule including its weighted fitness.
RuleMetrics score(const Rule& rule, const TransactionDatabase& db, const FitnessWeights& weights,
                  CountingMode mode = CountingMode::kDays);

/// Fitness of a genotype; 0 for genotypes that decode to no valid rule.
double fitness(const Eigen::Ref<const Genotype>& genotype, const TransactionDatabase& db,
               const FitnessWeights& weights, const Decoder& decoder, Rng* rng = nullptr,
               CountingMode mode = CountingMode::kDays);

}  // namespace tsarm
