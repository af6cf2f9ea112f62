#include "hypop/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hypop/util.hpp"

namespace hypop {

namespace {
constexpr double kDistanceEpsilon = 1e-6;
}

OutputDistribution to_distribution(std::span<const double> p,
                                   std::span<const int> domain) {
  if (domain.size() < 2)
    throw Error(ErrorCode::invalid_argument, "domain needs at least two values");
  const int n = static_cast<int>(p.size());
  const int v = static_cast<int>(domain.size());
  OutputDistribution dist;
  dist.domain.assign(domain.begin(), domain.end());
  dist.weights = Matrix(n, v);

  if (v == 2 && domain[0] == 0 && domain[1] == 1) {
    // Binary case: the output is the probability of 1 directly.
    for (int i = 0; i < n; ++i) {
      const double pi = std::clamp(p[i], 0.0, 1.0);
      dist.weights(i, 0) = 1.0 - pi;
      dist.weights(i, 1) = pi;
    }
    return dist;
  }

  for (int i = 0; i < n; ++i) {
    double z = 0.0;
    for (int j = 0; j < v; ++j) {
      const double w = 1.0 / (std::abs(p[i] - domain[j]) + kDistanceEpsilon);
      dist.weights(i, j) = w;
      z += w;
    }
    for (int j = 0; j < v; ++j) dist.weights(i, j) /= z;
  }
  return dist;
}

std::vector<int> sample(const OutputDistribution& dist, std::uint64_t seed) {
  auto rng = make_rng(mix_seed(seed, 0x73616d70ULL));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n = dist.weights.rows;
  const int v = dist.weights.cols;
  std::vector<int> x(n, dist.domain[0]);
  for (int i = 0; i < n; ++i) {
    double u = unif(rng);
    int chosen = v - 1;
    for (int j = 0; j < v; ++j) {
      u -= dist.weights(i, j);
      if (u < 0.0) {
        chosen = j;
        break;
      }
    }
    x[i] = dist.domain[chosen];
  }
  return x;
}

namespace {

// Uniform draw over domain values other than `current`.
int propose_value(std::mt19937_64& rng, const std::vector<int>& domain, int current) {
  const int v = static_cast<int>(domain.size());
  const int ci = static_cast<int>(
      std::lower_bound(domain.begin(), domain.end(), current) - domain.begin());
  std::uniform_int_distribution<int> pick(0, v - 2);
  int j = pick(rng);
  if (j >= ci) ++j;
  return domain[j];
}

// Mean |delta| over probe random flips from x0; temperature scale that makes
// the schedule instance-size invariant.
double calibrate_t0(FlipEvaluator& eval, const std::vector<int>& domain,
                    std::mt19937_64& rng, int probes) {
  const int n = static_cast<int>(eval.state().size());
  std::uniform_int_distribution<int> node_pick(0, n - 1);
  double acc = 0.0;
  for (int t = 0; t < probes; ++t) {
    const int node = node_pick(rng);
    const int value = propose_value(rng, domain, eval.state()[node]);
    acc += std::abs(eval.flip_delta(node, value));
  }
  const double mean = probes > 0 ? acc / probes : 0.0;
  return mean > 0.0 ? mean : 1.0;
}

}  // namespace

Assignment anneal(std::vector<int> x0, const ProblemSpec& spec, const SaConfig& cfg) {
  if (cfg.restarts < 1 || cfg.cooling <= 0.0 || cfg.cooling >= 1.0 || cfg.sweeps < 0)
    throw Error(ErrorCode::invalid_argument, "annealing config out of range");
  const auto& domain = spec.domain();
  const int n = spec.num_nodes();
  if (static_cast<int>(x0.size()) != n)
    throw Error(ErrorCode::dimension_mismatch, "assignment length != node count");
  for (int xi : x0)
    if (!std::binary_search(domain.begin(), domain.end(), xi))
      throw Error(ErrorCode::invalid_argument, "initial state outside domain");

  if (n == 0) return spec.make_assignment({});

  auto rng = make_rng(mix_seed(cfg.seed, 0x616e6e65ULL));
  auto eval = spec.flip_evaluator(std::move(x0), cfg.incremental);

  double t = cfg.t0 > 0.0 ? cfg.t0 : calibrate_t0(*eval, domain, rng, 100);

  std::vector<int> best_x = eval->state();
  double best_value = eval->value();

  std::uniform_int_distribution<int> node_pick(0, n - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  for (int sweep = 0; sweep < cfg.sweeps; ++sweep) {
    for (int step = 0; step < n; ++step) {
      const int node = node_pick(rng);
      const int value = propose_value(rng, domain, eval->state()[node]);
      const double delta = eval->flip_delta(node, value);
      if (delta <= 0.0 || unif(rng) < std::exp(-delta / t)) {
        eval->commit_flip(node, value);
        if (eval->value() < best_value) {
          best_value = eval->value();
          best_x = eval->state();
        }
      }
    }
    t *= cfg.cooling;
  }
  return spec.make_assignment(std::move(best_x));
}

Assignment map_with_restarts(std::span<const double> p, const ProblemSpec& spec,
                             const SaConfig& cfg) {
  OutputDistribution dist = to_distribution(p, spec.domain());
  Assignment best;
  bool have = false;
  for (int r = 0; r < cfg.restarts; ++r) {
    SaConfig sub = cfg;
    sub.seed = mix_seed(cfg.seed, 2 * static_cast<std::uint64_t>(r) + 1);
    std::vector<int> x0 = sample(dist, mix_seed(cfg.seed, 2 * static_cast<std::uint64_t>(r)));
    Assignment a = anneal(std::move(x0), spec, sub);
    if (!have || a.penalized < best.penalized) {
      best = std::move(a);
      have = true;
    }
  }
  return best;
}

}  // namespace hypop
