#pragma once

#include <algorithm>
#include <utility>

#include "tsarm/optimizers/config.hpp"
#include "tsarm/optimizers/evaluator.hpp"

namespace tsarm {

/// Real-coded generational GA: tournament selection, uniform crossover with
/// probability pc per pair, per-gene uniform-reset mutation with probability
/// pm, and the best member carried over unchanged.
template <typename Scalar>
class GeneticAlgorithm {
 public:
  GeneticAlgorithm(int dimension, int population, GAParams params, Rng& rng)
      : dimension_(dimension), size_(population), params_(params), rng_(&rng) {}

  void initialize(Evaluator<Scalar>& ev) { pop_ = random_population(dimension_, size_, *rng_, ev); }

  void step(Evaluator<Scalar>& ev) {
    const Eigen::Index n = pop_.size();
    MatrixX<Scalar> children(dimension_, n - 1);
    for (Eigen::Index c = 0; c < n - 1; c += 2) {
      VectorX<Scalar> a = pop_.x.col(tournament());
      VectorX<Scalar> b = pop_.x.col(tournament());
      if (rng_->uniform() < params_.pc)
        for (int d = 0; d < dimension_; ++d)
          if (rng_->uniform() < 0.5) std::swap(a(d), b(d));
      mutate(a);
      mutate(b);
      children.col(c) = a;
      if (c + 1 < n - 1) children.col(c + 1) = b;
    }

    Population<Scalar> next = pop_;
    const Eigen::Index elite = pop_.best_index();
    next.x.col(0) = pop_.x.col(elite);
    next.fitness(0) = pop_.fitness(elite);
    // Slots whose child cannot be evaluated keep the previous occupant.
    for (Eigen::Index c = 0; c < n - 1 && !ev.exhausted(); ++c) {
      next.x.col(c + 1) = children.col(c);
      next.fitness(c + 1) = ev(children.col(c));
    }
    pop_ = std::move(next);
  }

  const Population<Scalar>& population() const { return pop_; }

 private:
  Eigen::Index tournament() {
    auto best = static_cast<Eigen::Index>(rng_->index(static_cast<std::size_t>(pop_.size())));
    for (int k = 1; k < params_.tournament; ++k) {
      const auto other = static_cast<Eigen::Index>(rng_->index(static_cast<std::size_t>(pop_.size())));
      if (pop_.fitness(other) > pop_.fitness(best)) best = other;
    }
    return best;
  }

  void mutate(VectorX<Scalar>& v) {
    for (int d = 0; d < dimension_; ++d)
      if (rng_->uniform() < params_.pm) v(d) = static_cast<Scalar>(rng_->uniform());
  }

  int dimension_, size_;
  GAParams params_;
  Rng* rng_;
  Population<Scalar> pop_;
};

}  // namespace tsarm
