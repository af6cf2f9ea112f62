#include "hypop/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "hypop/util.hpp"

namespace hypop {

namespace {

std::vector<std::vector<int>> pair_edges_to_vectors(const std::set<std::pair<int, int>>& s) {
  std::vector<std::vector<int>> edges;
  edges.reserve(s.size());
  for (const auto& [u, v] : s) edges.push_back({u, v});
  return edges;
}

}  // namespace

Hypergraph gen_random_hypergraph(int n, int k, int max_degree, std::uint64_t seed,
                                 int size_cap) {
  if (n < 2 || k < 0 || max_degree < 1)
    throw Error(ErrorCode::invalid_argument, "bad hypergraph generator arguments");
  if (static_cast<long long>(2) * k > static_cast<long long>(n) * max_degree)
    throw Error(ErrorCode::infeasible_spec,
                "degree cap " + std::to_string(max_degree) + " cannot host " +
                    std::to_string(k) + " hyperedges");
  size_cap = std::max(2, size_cap);

  // Nodes are drawn with probability proportional to remaining degree budget,
  // with whole-construction restarts if the pool still runs dry.
  for (int attempt = 0; attempt < 64; ++attempt) {
    auto rng = make_rng(mix_seed(seed, 0x68797067656eULL + attempt));
    std::vector<int> capacity(n, max_degree);
    std::vector<std::vector<int>> edges;
    edges.reserve(k);
    std::uniform_int_distribution<int> size_pick(2, size_cap);
    bool failed = false;

    for (int e = 0; e < k && !failed; ++e) {
      int eligible = 0;
      long long total_capacity = 0;
      for (int i = 0; i < n; ++i)
        if (capacity[i] > 0) {
          ++eligible;
          total_capacity += capacity[i];
        }
      if (eligible < 2) {
        failed = true;
        break;
      }
      const int m = std::min(size_pick(rng), eligible);
      std::vector<int> edge;
      for (int t = 0; t < m; ++t) {
        if (total_capacity <= 0) break;
        std::uniform_int_distribution<long long> pick(0, total_capacity - 1);
        long long ticket = pick(rng);
        int chosen = -1;
        for (int i = 0; i < n; ++i) {
          if (capacity[i] <= 0) continue;
          if (std::find(edge.begin(), edge.end(), i) != edge.end()) continue;
          if (ticket < capacity[i]) {
            chosen = i;
            break;
          }
          ticket -= capacity[i];
        }
        if (chosen < 0) break;  // only already-picked nodes left
        total_capacity -= capacity[chosen];
        edge.push_back(chosen);
      }
      if (static_cast<int>(edge.size()) < 2) {
        failed = true;
        break;
      }
      for (int i : edge) --capacity[i];
      edges.push_back(std::move(edge));
    }
    if (!failed) return Hypergraph::build(n, std::move(edges));
  }
  throw Error(ErrorCode::infeasible_spec,
              "degree cap too tight to place " + std::to_string(k) + " hyperedges");
}

Hypergraph gen_er_graph(int n, double p, std::uint64_t seed) {
  if (n < 1 || p < 0.0 || p > 1.0)
    throw Error(ErrorCode::invalid_argument, "bad ER arguments");
  auto rng = make_rng(mix_seed(seed, 0x6572ULL));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::vector<int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (unif(rng) < p) edges.push_back({i, j});
  return Hypergraph::build(n, std::move(edges));
}

Hypergraph gen_gnm_graph(int n, int m, std::uint64_t seed) {
  const long long max_edges = static_cast<long long>(n) * (n - 1) / 2;
  if (n < 2 || m < 0 || m > max_edges)
    throw Error(ErrorCode::invalid_argument, "bad G(n, m) arguments");
  auto rng = make_rng(mix_seed(seed, 0x676e6dULL));
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::set<std::pair<int, int>> taken;
  while (static_cast<int>(taken.size()) < m) {
    int u = pick(rng), v = pick(rng);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    taken.insert({u, v});
  }
  return Hypergraph::build(n, pair_edges_to_vectors(taken));
}

Hypergraph gen_regular_graph(int n, int d, std::uint64_t seed) {
  if (n < 2 || d < 1 || d >= n || (static_cast<long long>(n) * d) % 2 != 0)
    throw Error(ErrorCode::invalid_argument, "bad regular graph arguments (n*d must be even)");
  // Pairing model with whole-graph retries on self-loops or parallel edges.
  for (int attempt = 0; attempt < 10000; ++attempt) {
    auto rng = make_rng(mix_seed(seed, 0x726567ULL + attempt));
    std::vector<int> stubs;
    stubs.reserve(static_cast<size_t>(n) * d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) stubs.push_back(i);
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::set<std::pair<int, int>> taken;
    bool ok = true;
    for (size_t i = 0; i + 1 < stubs.size(); i += 2) {
      int u = stubs[i], v = stubs[i + 1];
      if (u == v) {
        ok = false;
        break;
      }
      if (u > v) std::swap(u, v);
      if (!taken.insert({u, v}).second) {
        ok = false;
        break;
      }
    }
    if (ok) return Hypergraph::build(n, pair_edges_to_vectors(taken));
  }
  throw Error(ErrorCode::infeasible_spec, "pairing model failed to produce a simple graph");
}

Hypergraph gen_powerlaw_graph(int n, double exponent, std::uint64_t seed) {
  if (n < 2 || exponent <= 1.0)
    throw Error(ErrorCode::invalid_argument, "bad powerlaw arguments");
  auto rng = make_rng(mix_seed(seed, 0x706f77ULL));
  // Discrete degrees k in [1, n-1] with P(k) proportional to k^-exponent.
  std::vector<double> cdf;
  double z = 0.0;
  const int kmax = std::min(n - 1, 1000);
  for (int k = 1; k <= kmax; ++k) {
    z += std::pow(static_cast<double>(k), -exponent);
    cdf.push_back(z);
  }
  std::uniform_real_distribution<double> unif(0.0, z);
  std::vector<int> degree(n);
  int total = 0;
  for (int i = 0; i < n; ++i) {
    const double u = unif(rng);
    degree[i] = static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), u) -
                                 cdf.begin()) + 1;
    total += degree[i];
  }
  if (total % 2 != 0) {
    ++degree[0];
    ++total;
  }
  // Configuration model; self-loops and duplicate edges are dropped.
  std::vector<int> stubs;
  stubs.reserve(total);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < degree[i]; ++j) stubs.push_back(i);
  std::shuffle(stubs.begin(), stubs.end(), rng);
  std::set<std::pair<int, int>> taken;
  for (size_t i = 0; i + 1 < stubs.size(); i += 2) {
    int u = stubs[i], v = stubs[i + 1];
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    taken.insert({u, v});
  }
  return Hypergraph::build(n, pair_edges_to_vectors(taken));
}

CnfFormula gen_random_3sat(int n_vars, int n_clauses, std::uint64_t seed) {
  if (n_vars < 3 || n_clauses < 1)
    throw Error(ErrorCode::invalid_argument, "bad 3-SAT arguments");
  auto rng = make_rng(mix_seed(seed, 0x736174ULL));
  std::uniform_int_distribution<int> var_pick(0, n_vars - 1);
  std::uniform_int_distribution<int> sign_pick(0, 1);
  CnfFormula cnf;
  cnf.n_vars = n_vars;
  cnf.clauses.reserve(n_clauses);
  for (int c = 0; c < n_clauses; ++c) {
    std::vector<int> vars;
    while (static_cast<int>(vars.size()) < 3) {
      const int v = var_pick(rng);
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    }
    std::vector<Literal> clause;
    for (int v : vars) clause.push_back({v, sign_pick(rng) == 1});
    cnf.clauses.push_back(std::move(clause));
  }
  return cnf;
}

CnfFormula gen_satisfiable_3sat(int n_vars, int n_clauses, std::uint64_t seed) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    CnfFormula cnf = gen_random_3sat(n_vars, n_clauses, mix_seed(seed, attempt));
    if (dpll_satisfiable(cnf)) return cnf;
  }
  throw Error(ErrorCode::infeasible_spec, "no satisfiable instance found");
}

namespace {

// -1 unassigned, 0 false, 1 true.
bool dpll(const std::vector<std::vector<Literal>>& clauses, std::vector<int>& assign) {
  // Unit propagation to fixpoint.
  std::vector<std::pair<int, int>> trail;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& clause : clauses) {
      int unassigned = 0;
      const Literal* unit = nullptr;
      bool satisfied = false;
      for (const auto& lit : clause) {
        const int a = assign[lit.var];
        if (a == -1) {
          ++unassigned;
          unit = &lit;
        } else if ((a == 1) == lit.positive) {
          satisfied = true;
          break;
        }
      }
      if (satisfied) continue;
      if (unassigned == 0) {
        for (auto& [var, old] : trail) assign[var] = old;
        return false;  // conflict
      }
      if (unassigned == 1) {
        trail.push_back({unit->var, assign[unit->var]});
        assign[unit->var] = unit->positive ? 1 : 0;
        changed = true;
      }
    }
  }
  int branch = -1;
  for (size_t v = 0; v < assign.size(); ++v)
    if (assign[v] == -1) {
      branch = static_cast<int>(v);
      break;
    }
  if (branch == -1) return true;
  for (int value : {1, 0}) {
    assign[branch] = value;
    if (dpll(clauses, assign)) return true;
  }
  assign[branch] = -1;
  for (auto& [var, old] : trail) assign[var] = old;
  return false;
}

}  // namespace

bool dpll_satisfiable(const CnfFormula& cnf) {
  std::vector<int> assign(static_cast<size_t>(cnf.n_vars), -1);
  return dpll(cnf.clauses, assign);
}

std::optional<std::vector<int>> dpll_solve(const CnfFormula& cnf) {
  std::vector<int> assign(static_cast<size_t>(cnf.n_vars), -1);
  if (!dpll(cnf.clauses, assign)) return std::nullopt;
  for (int& v : assign)
    if (v == -1) v = 0;  // unconstrained variables
  return assign;
}

}  // namespace hypop
