#pragma once

#include "tsarm/optimizers/config.hpp"
#include "tsarm/optimizers/evaluator.hpp"

namespace tsarm {

/// rand/1/bin trial for member `target`: v = x_r1 + F (x_r2 - x_r3), binomial
/// crossover with one forced gene, clamped to [0, 1].
template <typename Scalar>
VectorX<Scalar> de_rand1_bin(const Population<Scalar>& pop, Eigen::Index target, double F, double CR, Rng& rng) {
  const auto r = pick_distinct(rng, pop.size(), 3, {target});
  const auto D = pop.dimension();
  const VectorX<Scalar> mutant =
      pop.x.col(r[0]) + static_cast<Scalar>(F) * (pop.x.col(r[1]) - pop.x.col(r[2]));
  VectorX<Scalar> trial = pop.x.col(target);
  const auto forced = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(D)));
  for (Eigen::Index d = 0; d < D; ++d)
    if (d == forced || rng.uniform() < CR) trial(d) = mutant(d);
  clamp_unit(trial);
  return trial;
}

/// Classic DE with greedy one-to-one selection. Trials of a generation are
/// built from the previous generation.
template <typename Scalar>
class DifferentialEvolution {
 public:
  DifferentialEvolution(int dimension, int population, DEParams params, Rng& rng)
      : dimension_(dimension), size_(population), params_(params), rng_(&rng) {}

  void initialize(Evaluator<Scalar>& ev) { pop_ = random_population(dimension_, size_, *rng_, ev); }

  void step(Evaluator<Scalar>& ev) {
    Population<Scalar> next = pop_;
    for (Eigen::Index i = 0; i < pop_.size() && !ev.exhausted(); ++i) {
      const VectorX<Scalar> trial = de_rand1_bin(pop_, i, params_.F, params_.CR, *rng_);
      const Scalar f = ev(trial);
      if (f >= pop_.fitness(i)) {
        next.x.col(i) = trial;
        next.fitness(i) = f;
      }
    }
    pop_ = std::move(next);
  }

  const Population<Scalar>& population() const { return pop_; }

 private:
  int dimension_, size_;
  DEParams params_;
  Rng* rng_;
  Population<Scalar> pop_;
};

/// Self-adaptive DE: each member carries its own F and CR, regenerated with
/// probability tau before building its trial and kept only if the trial wins.
template <typename Scalar>
class JDE {
 public:
  JDE(int dimension, int population, JDEParams params, Rng& rng)
      : dimension_(dimension), size_(population), params_(params), rng_(&rng) {}

  void initialize(Evaluator<Scalar>& ev) {
    pop_ = random_population(dimension_, size_, *rng_, ev);
    F_ = Eigen::VectorXd::Constant(size_, params_.F0);
    CR_ = Eigen::VectorXd::Constant(size_, params_.CR0);
  }

  void step(Evaluator<Scalar>& ev) {
    Population<Scalar> next = pop_;
    for (Eigen::Index i = 0; i < pop_.size() && !ev.exhausted(); ++i) {
      double F = F_(i), CR = CR_(i);
      if (rng_->uniform() < params_.tau) F = params_.F_lower + rng_->uniform() * params_.F_upper;
      if (rng_->uniform() < params_.tau) CR = rng_->uniform();
      const VectorX<Scalar> trial = de_rand1_bin(pop_, i, F, CR, *rng_);
      const Scalar f = ev(trial);
      if (f >= pop_.fitness(i)) {
        next.x.col(i) = trial;
        next.fitness(i) = f;
        F_(i) = F;
        CR_(i) = CR;
      }
    }
    pop_ = std::move(next);
  }

  const Population<Scalar>& population() const { return pop_; }
  const Eigen::VectorXd& F() const { return F_; }
  const Eigen::VectorXd& CR() const { return CR_; }

 private:
  int dimension_, size_;
  JDEParams params_;
  Rng* rng_;
  Population<Scalar> pop_;
  Eigen::VectorXd F_, CR_;
};

}  // namespace tsarm
