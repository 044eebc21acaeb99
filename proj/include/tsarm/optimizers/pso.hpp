#pragma once

#include <algorithm>
#include <utility>

#include "tsarm/optimizers/config.hpp"
#include "tsarm/optimizers/evaluator.hpp"

namespace tsarm {

/// Global-best PSO. Velocities start at zero and are clamped per component;
/// positions leaving [0, 1] are reflected back and the offending velocity
/// component reversed.
template <typename Scalar>
class ParticleSwarm {
 public:
  ParticleSwarm(int dimension, int population, PSOParams params, Rng& rng)
      : dimension_(dimension), size_(population), params_(params), rng_(&rng) {}

  void initialize(Evaluator<Scalar>& ev) {
    pop_ = random_population(dimension_, size_, *rng_, ev);
    velocity_ = MatrixX<Scalar>::Zero(dimension_, size_);
    personal_ = pop_;
    global_ = personal_.best_index();
  }

  void step(Evaluator<Scalar>& ev) {
    const auto vmax = static_cast<Scalar>(params_.velocity_clamp);
    const VectorX<Scalar> gbest = personal_.x.col(global_);
    for (Eigen::Index i = 0; i < pop_.size() && !ev.exhausted(); ++i) {
      for (int d = 0; d < dimension_; ++d) {
        const auto r1 = static_cast<Scalar>(rng_->uniform());
        const auto r2 = static_cast<Scalar>(rng_->uniform());
        Scalar v = static_cast<Scalar>(params_.w) * velocity_(d, i) +
                   static_cast<Scalar>(params_.c1) * r1 * (personal_.x(d, i) - pop_.x(d, i)) +
                   static_cast<Scalar>(params_.c2) * r2 * (gbest(d) - pop_.x(d, i));
        v = std::clamp(v, -vmax, vmax);
        Scalar x = pop_.x(d, i) + v;
        if (x < Scalar(0)) {
          x = -x;
          v = -v;
        } else if (x > Scalar(1)) {
          x = Scalar(2) - x;
          v = -v;
        }
        velocity_(d, i) = v;
        pop_.x(d, i) = std::clamp(x, Scalar(0), Scalar(1));
      }
      pop_.fitness(i) = ev(pop_.x.col(i));
      if (pop_.fitness(i) > personal_.fitness(i)) {
        personal_.x.col(i) = pop_.x.col(i);
        personal_.fitness(i) = pop_.fitness(i);
        if (personal_.fitness(i) > personal_.fitness(global_)) global_ = i;
      }
    }
  }

  const Population<Scalar>& population() const { return pop_; }
  const Population<Scalar>& personal_best() const { return personal_; }
  const MatrixX<Scalar>& velocity() const { return velocity_; }

 private:
  int dimension_, size_;
  PSOParams params_;
  Rng* rng_;
  Population<Scalar> pop_, personal_;
  MatrixX<Scalar> velocity_;
  Eigen::Index global_ = 0;
};

}  // namespace tsarm
