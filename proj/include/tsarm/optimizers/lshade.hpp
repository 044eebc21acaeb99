#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "tsarm/optimizers/config.hpp"
#include "tsarm/optimizers/evaluator.hpp"

namespace tsarm {

/// Linear population size reduction: round(np_init + (np_min - np_init) * used / max_fes).
inline int lshade_population_size(int np_init, int np_min, long long used, long long max_fes) {
  const double progress = static_cast<double>(used) / static_cast<double>(max_fes);
  return static_cast<int>(std::lround(np_init + (np_min - np_init) * progress));
}

/// Success-history adaptive DE with linear population size reduction.
///
/// current-to-pbest/1/bin mutation, an external archive of replaced parents,
/// and an H-slot memory of successful (F, CR) pairs updated with
/// improvement-weighted Lehmer means. A CR memory slot that records only
/// zero-CR successes becomes terminal and yields CR = 0 from then on.
template <typename Scalar>
class LSHADE {
 public:
  static constexpr double kTerminal = -1.0;

  LSHADE(int dimension, LSHADEParams params, long long max_fes, Rng& rng)
      : dimension_(dimension), params_(params), max_fes_(max_fes), rng_(&rng) {
    np_init_ = params_.np_init > 0 ? params_.np_init : 18 * dimension;
  }

  void initialize(Evaluator<Scalar>& ev) {
    pop_ = random_population(dimension_, np_init_, *rng_, ev);
    memory_F_.assign(static_cast<std::size_t>(params_.H), 0.5);
    memory_CR_.assign(static_cast<std::size_t>(params_.H), 0.5);
    slot_ = 0;
    archive_.clear();
  }

  void step(Evaluator<Scalar>& ev) {
    const Eigen::Index np = pop_.size();
    std::vector<Eigen::Index> ranked(static_cast<std::size_t>(np));
    std::iota(ranked.begin(), ranked.end(), Eigen::Index{0});
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return pop_.fitness(a) > pop_.fitness(b); });
    const auto top = std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(params_.p * np)));

    std::vector<double> success_F, success_CR, gain;
    Population<Scalar> next = pop_;
    for (Eigen::Index i = 0; i < np && !ev.exhausted(); ++i) {
      const auto r = rng_->index(memory_F_.size());
      const double CR = memory_CR_[r] == kTerminal ? 0.0 : std::clamp(rng_->normal(memory_CR_[r], 0.1), 0.0, 1.0);
      double F = 0.0;
      do F = rng_->cauchy(memory_F_[r], 0.1);
      while (F <= 0.0);
      F = std::min(F, 1.0);

      const Eigen::Index pbest = ranked[rng_->index(std::min<std::size_t>(top, ranked.size()))];
      const Eigen::Index r1 = pick_distinct(*rng_, np, 1, {i})[0];
      const auto pool = np + static_cast<Eigen::Index>(archive_.size());
      const Eigen::Index r2 = pick_distinct(*rng_, pool, 1, {i, r1})[0];
      const auto x2 = r2 < np ? VectorX<Scalar>(pop_.x.col(r2)) : archive_[static_cast<std::size_t>(r2 - np)];

      const auto Fs = static_cast<Scalar>(F);
      const VectorX<Scalar> mutant = pop_.x.col(i) + Fs * (pop_.x.col(pbest) - pop_.x.col(i)) +
                                     Fs * (pop_.x.col(r1) - x2);
      VectorX<Scalar> trial = pop_.x.col(i);
      const auto forced = static_cast<Eigen::Index>(rng_->index(static_cast<std::size_t>(dimension_)));
      for (Eigen::Index d = 0; d < dimension_; ++d)
        if (d == forced || rng_->uniform() < CR) trial(d) = mutant(d);
      clamp_unit(trial);

      const Scalar f = ev(trial);
      if (f >= pop_.fitness(i)) {
        if (f > pop_.fitness(i)) {
          add_to_archive(pop_.x.col(i), np);
          success_F.push_back(F);
          success_CR.push_back(CR);
          gain.push_back(static_cast<double>(f - pop_.fitness(i)));
        }
        next.x.col(i) = trial;
        next.fitness(i) = f;
      }
    }
    pop_ = std::move(next);

    if (!success_F.empty()) update_memory(success_F, success_CR, gain);
    reduce_population(ev.used());
  }

  const Population<Scalar>& population() const { return pop_; }
  const std::vector<double>& memory_F() const { return memory_F_; }
  const std::vector<double>& memory_CR() const { return memory_CR_; }
  std::size_t archive_size() const { return archive_.size(); }
  std::size_t archive_capacity() const { return capacity(pop_.size()); }

 private:
  std::size_t capacity(Eigen::Index np) const {
    return static_cast<std::size_t>(std::lround(params_.arc_rate * static_cast<double>(np)));
  }

  void add_to_archive(const Eigen::Ref<const VectorX<Scalar>>& x, Eigen::Index np) {
    const auto cap = capacity(np);
    if (cap == 0) return;
    if (archive_.size() < cap)
      archive_.emplace_back(x);
    else
      archive_[rng_->index(archive_.size())] = x;
  }

  void update_memory(const std::vector<double>& S_F, const std::vector<double>& S_CR,
                     const std::vector<double>& gain) {
    const double total = std::accumulate(gain.begin(), gain.end(), 0.0);
    double f_num = 0, f_den = 0, cr_num = 0, cr_den = 0;
    for (std::size_t k = 0; k < gain.size(); ++k) {
      const double w = total > 0 ? gain[k] / total : 1.0 / static_cast<double>(gain.size());
      f_num += w * S_F[k] * S_F[k];
      f_den += w * S_F[k];
      cr_num += w * S_CR[k] * S_CR[k];
      cr_den += w * S_CR[k];
    }
    const double max_cr = *std::max_element(S_CR.begin(), S_CR.end());
    if (memory_CR_[slot_] == kTerminal || max_cr == 0.0)
      memory_CR_[slot_] = kTerminal;
    else
      memory_CR_[slot_] = cr_num / cr_den;
    memory_F_[slot_] = f_num / f_den;
    slot_ = (slot_ + 1) % memory_F_.size();
  }

  void reduce_population(long long used) {
    const int target = std::max(params_.np_min, lshade_population_size(np_init_, params_.np_min, used, max_fes_));
    if (target >= pop_.size()) return;
    std::vector<Eigen::Index> keep(static_cast<std::size_t>(pop_.size()));
    std::iota(keep.begin(), keep.end(), Eigen::Index{0});
    std::stable_sort(keep.begin(), keep.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return pop_.fitness(a) > pop_.fitness(b); });
    keep.resize(static_cast<std::size_t>(target));
    std::sort(keep.begin(), keep.end());
    pop_.x = MatrixX<Scalar>(pop_.x(Eigen::all, keep));
    pop_.fitness = VectorX<Scalar>(pop_.fitness(keep));
    const auto cap = capacity(target);
    while (archive_.size() > cap) archive_.erase(archive_.begin() + static_cast<long>(rng_->index(archive_.size())));
  }

  int dimension_;
  LSHADEParams params_;
  long long max_fes_;
  Rng* rng_;
  int np_init_;
  Population<Scalar> pop_;
  std::vector<double> memory_F_, memory_CR_;
  std::size_t slot_ = 0;
  std::vector<VectorX<Scalar>> archive_;
};

}  // namespace tsarm
