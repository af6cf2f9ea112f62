#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hypop/hypergraph.hpp"
#include "hypop/io.hpp"

namespace hypop {

// Random hypergraph with k hyperedges of size 2..max(2, size_cap) honoring a
// per-node degree cap. Raises infeasible_spec when the cap cannot host k edges.
Hypergraph gen_random_hypergraph(int n, int k, int max_degree, std::uint64_t seed,
                                 int size_cap = 6);

// G(n, p) with seeded edge coin flips.
Hypergraph gen_er_graph(int n, double p, std::uint64_t seed);

// Uniform simple graph with exactly m edges.
Hypergraph gen_gnm_graph(int n, int m, std::uint64_t seed);

// Random d-regular simple graph via pairing-model retries.
Hypergraph gen_regular_graph(int n, int d, std::uint64_t seed);

// Configuration model over a seeded power-law degree sequence (exponent in
// [2, 4]); self-loops and parallel edges are dropped.
Hypergraph gen_powerlaw_graph(int n, double exponent, std::uint64_t seed);

// Uniform random 3-SAT with distinct variables per clause.
CnfFormula gen_random_3sat(int n_vars, int n_clauses, std::uint64_t seed);

// Rejection-sample gen_random_3sat until satisfiable (exact DPLL check).
CnfFormula gen_satisfiable_3sat(int n_vars, int n_clauses, std::uint64_t seed);

// Exact satisfiability via unit-propagating DPLL; intended for small formulas.
bool dpll_satisfiable(const CnfFormula& cnf);

// Satisfying assignment (0/1 per variable) or empty when unsatisfiable.
std::optional<std::vector<int>> dpll_solve(const CnfFormula& cnf);

}  // namespace hypop
