#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tsarm/random.hpp"
#include "tsarm/types.hpp"

namespace tsarm {

template <typename Scalar>
using Objective = std::function<Scalar(const Eigen::Ref<const VectorX<Scalar>>&)>;

/// Called once per objective evaluation with the evaluated point and its value.
template <typename Scalar>
using EvaluationHook = std::function<void(const Eigen::Ref<const VectorX<Scalar>>&, Scalar)>;

/// Wraps an objective (maximized) with a hard evaluation budget, best-so-far
/// tracking and the per-evaluation hook.
template <typename Scalar>
class Evaluator {
 public:
  using Vector = VectorX<Scalar>;

  Evaluator(Objective<Scalar> objective, long long budget, EvaluationHook<Scalar> hook = {})
      : objective_(std::move(objective)), hook_(std::move(hook)), budget_(budget) {
    history_.reserve(static_cast<std::size_t>(budget));
  }

  bool exhausted() const { return used_ >= budget_; }
  long long used() const { return used_; }
  long long budget() const { return budget_; }

  Scalar operator()(const Eigen::Ref<const Vector>& x) {
    if (exhausted()) throw std::logic_error("evaluation budget exhausted");
    if (!((x.array() >= Scalar(0)).all() && (x.array() <= Scalar(1)).all()))
      throw std::logic_error("candidate outside the unit hypercube");
    const Scalar f = objective_(x);
    ++used_;
    if (used_ == 1 || f > best_fitness_) {
      best_fitness_ = f;
      best_ = x;
    }
    history_.push_back(best_fitness_);
    if (hook_) hook_(x, f);
    return f;
  }

  const Vector& best() const { return best_; }
  Scalar best_fitness() const { return best_fitness_; }
  /// Best-so-far value after each evaluation.
  const std::vector<Scalar>& history() const { return history_; }

 private:
  Objective<Scalar> objective_;
  EvaluationHook<Scalar> hook_;
  long long budget_;
  long long used_ = 0;
  Vector best_;
  Scalar best_fitness_ = -std::numeric_limits<Scalar>::infinity();
  std::vector<Scalar> history_;
};

/// Individuals are columns.
template <typename Scalar>
struct Population {
  MatrixX<Scalar> x;
  VectorX<Scalar> fitness;

  Eigen::Index size() const { return x.cols(); }
  Eigen::Index dimension() const { return x.rows(); }

  Eigen::Index best_index() const {
    Eigen::Index i = 0;
    fitness.maxCoeff(&i);
    return i;
  }
};

/// Uniform random population in [0,1]^D, evaluated in column order while
/// budget remains. Unevaluated members get fitness -inf.
template <typename Scalar>
Population<Scalar> random_population(int dimension, int size, Rng& rng, Evaluator<Scalar>& ev) {
  Population<Scalar> pop;
  pop.x.resize(dimension, size);
  for (int i = 0; i < size; ++i)
    for (int d = 0; d < dimension; ++d) pop.x(d, i) = static_cast<Scalar>(rng.uniform());
  pop.fitness = VectorX<Scalar>::Constant(size, -std::numeric_limits<Scalar>::infinity());
  for (int i = 0; i < size && !ev.exhausted(); ++i) pop.fitness(i) = ev(pop.x.col(i));
  return pop;
}

template <typename Derived>
void clamp_unit(Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  v = v.cwiseMax(Scalar(0)).cwiseMin(Scalar(1));
}

/// Up to `count` distinct indices from [0, n) other than those in `exclude`.
inline std::vector<Eigen::Index> pick_distinct(Rng& rng, Eigen::Index n, int count,
                                               std::initializer_list<Eigen::Index> exclude) {
  std::vector<Eigen::Index> out;
  while (static_cast<int>(out.size()) < count) {
    const auto r = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(n)));
    bool taken = false;
    for (const auto e : exclude) taken = taken || r == e;
    for (const auto o : out) taken = taken || r == o;
    if (!taken) out.push_back(r);
  }
  return out;
}

}  // namespace tsarm
