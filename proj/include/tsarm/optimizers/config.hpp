#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tsarm {

enum class Algorithm { kDE, kGA, kPSO, kJDE, kLSHADE };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::kDE, Algorithm::kGA, Algorithm::kPSO,
                                               Algorithm::kJDE, Algorithm::kLSHADE};

inline std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kDE: return "DE";
    case Algorithm::kGA: return "GA";
    case Algorithm::kPSO: return "PSO";
    case Algorithm::kJDE: return "jDE";
    case Algorithm::kLSHADE: return "LSHADE";
  }
  return "?";
}

/// Case-insensitive name lookup.
inline std::optional<Algorithm> parse_algorithm(std::string_view name) {
  auto lower = [](std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
    return out;
  };
  const std::string key = lower(name);
  for (const auto a : kAllAlgorithms)
    if (lower(algorithm_name(a)) == key) return a;
  return std::nullopt;
}

struct DEParams {
  double F = 0.5;
  double CR = 0.9;
};

struct GAParams {
  double pm = 0.01;  // per-gene mutation probability
  double pc = 0.8;   // crossover probability per parent pair
  int tournament = 2;
};

struct PSOParams {
  double c1 = 0.1;
  double c2 = 0.1;
  double w = 0.8;
  double velocity_clamp = 0.2;  // fraction of the [0, 1] range
};

struct JDEParams {
  double F0 = 0.5;
  double CR0 = 0.9;
  double tau = 0.1;  // used for both F and CR
  double F_lower = 0.1;
  double F_upper = 0.9;  // F is regenerated in [F_lower, F_lower + F_upper]
};

struct LSHADEParams {
  int H = 5;             // success-history memory size
  double p = 0.1;        // top fraction for current-to-pbest
  double arc_rate = 2.0; // archive size relative to population
  int np_init = 0;       // 0 selects 18 * D
  int np_min = 4;
};

struct AlgorithmParams {
  DEParams de;
  GAParams ga;
  PSOParams pso;
  JDEParams jde;
  LSHADEParams lshade;
};

struct OptimizerConfig {
  Algorithm algorithm = Algorithm::kDE;
  int dimension = 19;
  int population = 50;
  long long max_fes = 10000;
  std::uint64_t seed = 0;
  AlgorithmParams params;

  /// Size of the population the chosen algorithm starts from.
  int initial_population() const {
    if (algorithm == Algorithm::kLSHADE)
      return params.lshade.np_init > 0 ? params.lshade.np_init : 18 * dimension;
    return population;
  }

  void validate() const {
    if (dimension < 1) throw std::invalid_argument("dimension: must be >= 1");
    const bool de_family = algorithm == Algorithm::kDE || algorithm == Algorithm::kJDE;
    if (algorithm != Algorithm::kLSHADE && population < (de_family ? 4 : 2))
      throw std::invalid_argument(de_family ? "population: must be >= 4" : "population: must be >= 2");
    if (max_fes < 1) throw std::invalid_argument("max_fes: must be >= 1");
    if (max_fes < initial_population())
      throw std::invalid_argument("max_fes: must cover the initial population");
    const auto& p = params;
    auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!(p.de.F > 0.0 && p.de.F <= 1.0) && algorithm == Algorithm::kDE)
      throw std::invalid_argument("DE F: must lie in (0, 1]");
    if (!unit(p.de.CR)) throw std::invalid_argument("DE CR: must lie in [0, 1]");
    if (!unit(p.ga.pm) || !unit(p.ga.pc)) throw std::invalid_argument("GA pm, pc: must lie in [0, 1]");
    if (p.ga.tournament < 1) throw std::invalid_argument("GA tournament: must be >= 1");
    if (p.pso.w < 0.0 || p.pso.c1 < 0.0 || p.pso.c2 < 0.0 || !(p.pso.velocity_clamp > 0.0))
      throw std::invalid_argument("PSO c1, c2, w: must be non-negative");
    if (!unit(p.jde.CR0) || !unit(p.jde.tau) || !(p.jde.F0 > 0.0 && p.jde.F0 <= 1.0))
      throw std::invalid_argument("jDE F0, CR0, tau out of range");
    if (p.lshade.H < 1) throw std::invalid_argument("LSHADE H: must be >= 1");
    if (!(p.lshade.p > 0.0 && p.lshade.p <= 1.0)) throw std::invalid_argument("LSHADE p: must lie in (0, 1]");
    if (p.lshade.arc_rate < 0.0) throw std::invalid_argument("LSHADE arc_rate: must be >= 0");
    if (algorithm == Algorithm::kLSHADE && (p.lshade.np_min < 4 || p.lshade.np_min > initial_population()))
      throw std::invalid_argument("LSHADE np_min: must lie in [4, np_init]");
  }
};

}  // namespace tsarm
