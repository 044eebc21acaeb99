#include <doctest.h>

#include "tsarm/optimizers.hpp"

using namespace tsarm;

namespace {

// Negated so that maximizing finds the minimum of sum (x - 0.5)^2.
template <typename Scalar>
Objective<Scalar> negated_sphere() {
  return [](const Eigen::Ref<const VectorX<Scalar>>& x) {
    return -(x.array() - Scalar(0.5)).square().sum();
  };
}

OptimizerConfig config_for(Algorithm algo, int D, long long fes, std::uint64_t seed) {
  OptimizerConfig c;
  c.algorithm = algo;
  c.dimension = D;
  c.max_fes = fes;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_SUITE("optimizers") {
  TEST_CASE("algorithm names round-trip") {
    for (const auto a : kAllAlgorithms) CHECK(parse_algorithm(algorithm_name(a)) == a);
    CHECK(parse_algorithm("lshade") == Algorithm::kLSHADE);
    CHECK(parse_algorithm("JDE") == Algorithm::kJDE);
    CHECK_FALSE(parse_algorithm("cmaes").has_value());
  }

  TEST_CASE("default parameters") {
    const AlgorithmParams p;
    CHECK(p.de.F == 0.5);
    CHECK(p.de.CR == 0.9);
    CHECK(p.ga.pm == 0.01);
    CHECK(p.ga.pc == 0.8);
    CHECK(p.pso.c1 == 0.1);
    CHECK(p.pso.c2 == 0.1);
    CHECK(p.pso.w == 0.8);
    CHECK(p.lshade.H == 5);
    CHECK(p.lshade.p == 0.1);
    CHECK(p.lshade.arc_rate == 2.0);
    CHECK(p.lshade.np_min == 4);
    CHECK(p.jde.F0 == 0.5);
    CHECK(p.jde.CR0 == 0.9);
    CHECK(p.jde.tau == 0.1);
    const OptimizerConfig c;
    CHECK(c.population == 50);
    CHECK(c.max_fes == 10000);
    CHECK(config_for(Algorithm::kLSHADE, 5, 1000, 0).initial_population() == 90);
  }

  TEST_CASE("budget is spent exactly, candidates stay feasible, best never drops") {
    for (const auto algo : kAllAlgorithms) {
      for (const long long fes : {1234LL, 5000LL}) {
        CAPTURE(algorithm_name(algo));
        long long calls = 0, infeasible = 0;
        Objective<double> f = [&](const Eigen::Ref<const Eigen::VectorXd>& x) {
          ++calls;
          infeasible += ((x.array() < 0.0) || (x.array() > 1.0)).any();
          return -(x.array() - 0.3).abs().sum();
        };
        const auto trace = optimize<double>(config_for(algo, 19, fes, 4), f);
        CHECK(calls == fes);
        CHECK(trace.evaluations_used == fes);
        CHECK(infeasible == 0);
        REQUIRE(trace.best_history.size() == static_cast<std::size_t>(fes));
        for (std::size_t k = 1; k < trace.best_history.size(); ++k)
          REQUIRE(trace.best_history[k] >= trace.best_history[k - 1]);
        CHECK(trace.best_fitness == trace.best_history.back());
      }
    }
  }

  TEST_CASE("max_fes equal to the population evaluates only the initial population") {
    for (const auto algo : kAllAlgorithms) {
      auto c = config_for(algo, 19, 50, 1);
      c.params.lshade.np_init = 50;
      long long calls = 0;
      const auto trace = optimize<double>(c, [&](const Eigen::Ref<const Eigen::VectorXd>&) { return double(++calls); });
      CHECK(trace.evaluations_used == 50);
      CHECK(calls == 50);
    }
  }

  TEST_CASE("same seed, same evaluation stream") {
    for (const auto algo : kAllAlgorithms) {
      auto stream = [&](std::uint64_t seed) {
        std::vector<double> values;
        EvaluationHook<double> hook = [&](const Eigen::Ref<const Eigen::VectorXd>& x, double f) {
          values.push_back(f);
          values.push_back(x.sum());
        };
        const auto trace = optimize<double>(config_for(algo, 8, 2000, seed), negated_sphere<double>(), hook);
        return std::pair(values, trace.best_genotype);
      };
      const auto a = stream(17), b = stream(17), c = stream(18);
      CHECK(a.first == b.first);
      CHECK(a.second == b.second);
      CHECK(a.first != c.first);
    }
  }

  TEST_CASE("DE minimizes the sphere in five dimensions") {
    auto c = config_for(Algorithm::kDE, 5, 5000, 2);
    const auto trace = optimize<double>(c, negated_sphere<double>());
    CHECK(-trace.best_fitness < 1e-4);
  }

  TEST_CASE("every algorithm improves on its initial population") {
    for (const auto algo : kAllAlgorithms) {
      const auto c = config_for(algo, 10, 10000, 5);
      const auto trace = optimize<double>(c, negated_sphere<double>());
      const auto initial = static_cast<std::size_t>(c.initial_population());
      CHECK(trace.best_fitness >= trace.best_history[initial - 1]);
    }
  }

  TEST_CASE("float instantiation") {
    const auto trace = optimize<float>(config_for(Algorithm::kJDE, 6, 3000, 1), negated_sphere<float>());
    CHECK(trace.best_genotype.size() == 6);
    CHECK(-trace.best_fitness < 1e-2f);
  }

  TEST_CASE("config validation") {
    auto c = config_for(Algorithm::kDE, 19, 10000, 0);
    c.population = 3;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = config_for(Algorithm::kDE, 19, 10, 0);
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = config_for(Algorithm::kLSHADE, 19, 300, 0);  // np_init = 342
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = config_for(Algorithm::kDE, 19, 10000, 0);
    c.params.de.CR = 1.5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }

  TEST_CASE("DE with F = 0 and CR = 1 copies the base vector") {
    Rng rng(3);
    Evaluator<double> ev(negated_sphere<double>(), 100);
    const auto pop = random_population<double>(6, 10, rng, ev);
    for (int i = 0; i < 10; ++i) {
      const Eigen::VectorXd trial = de_rand1_bin(pop, i, 0.0, 1.0, rng);
      bool equals_other_member = false;
      for (int j = 0; j < 10; ++j) equals_other_member = equals_other_member || (j != i && trial == pop.x.col(j));
      CHECK(equals_other_member);
    }
  }

  TEST_CASE("PSO with zero coefficients freezes the swarm") {
    Rng rng(4);
    PSOParams p;
    p.w = 0.0;
    p.c1 = 0.0;
    p.c2 = 0.0;
    ParticleSwarm<double> pso(5, 8, p, rng);
    Evaluator<double> ev(negated_sphere<double>(), 100);
    pso.initialize(ev);
    const Eigen::MatrixXd before = pso.population().x;
    pso.step(ev);
    CHECK(pso.velocity().isZero(0.0));
    CHECK(pso.population().x == before);
  }

  TEST_CASE("LSHADE linear population reduction") {
    CHECK(lshade_population_size(90, 4, 5000, 10000) == 47);
    CHECK(lshade_population_size(90, 4, 0, 10000) == 90);
    CHECK(lshade_population_size(90, 4, 10000, 10000) == 4);

    Rng rng(6);
    LSHADEParams p;
    LSHADE<double> lshade(5, p, 10000, rng);
    Evaluator<double> ev(negated_sphere<double>(), 10000);
    lshade.initialize(ev);
    CHECK(lshade.population().size() == 90);
    Eigen::Index prev = 90;
    while (!ev.exhausted()) {
      lshade.step(ev);
      const auto np = lshade.population().size();
      REQUIRE(np <= prev);
      REQUIRE(np >= 4);
      REQUIRE(np == std::max<Eigen::Index>(4, std::min<Eigen::Index>(prev, lshade_population_size(90, 4, ev.used(), 10000))));
      REQUIRE(lshade.archive_size() <= lshade.archive_capacity());
      for (const double m : lshade.memory_CR()) REQUIRE((m == LSHADE<double>::kTerminal || (m >= 0.0 && m <= 1.0)));
      for (const double m : lshade.memory_F()) REQUIRE((m > 0.0 && m <= 1.0));
      prev = np;
    }
    CHECK(prev == 4);
  }

  TEST_CASE("jDE control parameters stay in range") {
    Rng rng(8);
    JDE<double> jde(5, 20, JDEParams{}, rng);
    Evaluator<double> ev(negated_sphere<double>(), 4000);
    jde.initialize(ev);
    while (!ev.exhausted()) jde.step(ev);
    CHECK((jde.F().array() >= 0.1).all());
    CHECK((jde.F().array() <= 1.0).all());
    CHECK((jde.CR().array() >= 0.0).all());
    CHECK((jde.CR().array() <= 1.0).all());
    CHECK((jde.F().array() != 0.5).any());  // some members adapted
  }

  TEST_CASE("GA keeps its elite") {
    Rng rng(10);
    GeneticAlgorithm<double> ga(5, 20, GAParams{}, rng);
    Evaluator<double> ev(negated_sphere<double>(), 2000);
    ga.initialize(ev);
    double best = ga.population().fitness.maxCoeff();
    while (!ev.exhausted()) {
      ga.step(ev);
      const double now = ga.population().fitness.maxCoeff();
      REQUIRE(now >= best);
      best = now;
    }
  }
}
