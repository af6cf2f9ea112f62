#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hypop/matrix.hpp"
#include "hypop/problems.hpp"

namespace hypop {

struct SaConfig {
  int restarts = 3;
  double t0 = 0.0;        // <= 0: auto-calibrate from mean |delta| of 100 flips
  double cooling = 0.99;  // per sweep
  int sweeps = 200;       // one sweep = N proposed single-variable flips
  std::uint64_t seed = 0;
  bool incremental = true;  // use adapter delta-evaluators
};

// Per-node probability weights over the domain values; rows sum to 1.
struct OutputDistribution {
  std::vector<int> domain;
  Matrix weights;  // N x |domain|
};

// Binary domains take Pr(1) = p directly; wider domains weight each value
// inversely to its distance from p (epsilon 1e-6).
OutputDistribution to_distribution(std::span<const double> p,
                                   std::span<const int> domain);

std::vector<int> sample(const OutputDistribution& dist, std::uint64_t seed);

// Metropolis single-flip annealing of the penalized discrete objective,
// geometric cooling per sweep. Returns the best-seen state.
Assignment anneal(std::vector<int> x0, const ProblemSpec& spec, const SaConfig& cfg);

// R independent sample+anneal runs; best penalized objective wins, ties broken
// by the lowest restart index.
Assignment map_with_restarts(std::span<const double> p, const ProblemSpec& spec,
                             const SaConfig& cfg);

}  // namespace hypop
