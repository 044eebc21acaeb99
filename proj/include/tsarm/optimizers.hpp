#pragma once

#include <vector>

#include "tsarm/optimizers/config.hpp"
#include "tsarm/optimizers/de.hpp"
#include "tsarm/optimizers/evaluator.hpp"
#include "tsarm/optimizers/ga.hpp"
#include "tsarm/optimizers/lshade.hpp"
#include "tsarm/optimizers/pso.hpp"

namespace tsarm {

template <typename Scalar>
struct RunTrace {
  VectorX<Scalar> best_genotype;
  Scalar best_fitness{};
  long long evaluations_used = 0;
  std::vector<Scalar> best_history;  // best-so-far after each evaluation
};

namespace detail {

template <typename Scalar, typename Algo>
void drive(Algo& algo, Evaluator<Scalar>& ev) {
  algo.initialize(ev);
  while (!ev.exhausted()) algo.step(ev);
}

}  // namespace detail

/// Maximizes `objective` over [0,1]^D with the configured algorithm, stopping
/// as soon as `config.max_fes` evaluations have been spent. `hook` sees every
/// evaluation in order.
template <typename Scalar = double>
RunTrace<Scalar> optimize(const OptimizerConfig& config, Objective<Scalar> objective,
                          EvaluationHook<Scalar> hook = {}) {
  config.validate();
  Rng rng(config.seed);
  Evaluator<Scalar> ev(std::move(objective), config.max_fes, std::move(hook));
  const int D = config.dimension, NP = config.population;
  const auto& p = config.params;
  switch (config.algorithm) {
    case Algorithm::kDE: {
      DifferentialEvolution<Scalar> a(D, NP, p.de, rng);
      detail::drive(a, ev);
      break;
    }
    case Algorithm::kGA: {
      GeneticAlgorithm<Scalar> a(D, NP, p.ga, rng);
      detail::drive(a, ev);
      break;
    }
    case Algorithm::kPSO: {
      ParticleSwarm<Scalar> a(D, NP, p.pso, rng);
      detail::drive(a, ev);
      break;
    }
    case Algorithm::kJDE: {
      JDE<Scalar> a(D, NP, p.jde, rng);
      detail::drive(a, ev);
      break;
    }
    case Algorithm::kLSHADE: {
      LSHADE<Scalar> a(D, p.lshade, config.max_fes, rng);
      detail::drive(a, ev);
      break;
    }
  }
  return {ev.best(), ev.best_fitness(), ev.used(), ev.history()};
}

}  // namespace tsarm
