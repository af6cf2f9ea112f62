#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hypop/hypergraph.hpp"

namespace hypop {

struct Literal {
  int var = 0;          // 0-based variable index
  bool positive = true;
};

struct CnfFormula {
  int n_vars = 0;
  std::vector<std::vector<Literal>> clauses;

  int num_clauses() const { return static_cast<int>(clauses.size()); }
  // Constraint hypergraph: one hyperedge per clause over its distinct variables.
  Hypergraph constraint_hypergraph() const;
};

// Gset format: header "N M", then M lines "u v [w]" with 1-based endpoints.
// Edge weights are parsed but stored as 1 (benchmarks are treated unweighted).
Hypergraph load_gset(const std::string& path);

// DIMACS CNF: "c" comments, "p cnf <vars> <clauses>", clauses are 0-terminated
// signed ints and may span lines.
CnfFormula load_dimacs_cnf(const std::string& path);

// One hyperedge per line, whitespace-separated 1-based node ids. Node count is
// the maximum id seen.
Hypergraph load_hyperedge_list(const std::string& path);

void save_hyperedge_list(const Hypergraph& h, const std::string& path);
void save_gset(const Hypergraph& h, const std::string& path);
void save_dimacs_cnf(const CnfFormula& cnf, const std::string& path);

}  // namespace hypop
