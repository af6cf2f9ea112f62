#include "hypop/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "hypop/error.hpp"

namespace hypop {

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& what) {
  throw Error(ErrorCode::parse_error,
              path + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path);
  return in;
}

}  // namespace

Hypergraph CnfFormula::constraint_hypergraph() const {
  std::vector<std::vector<int>> edges;
  edges.reserve(clauses.size());
  for (const auto& clause : clauses) {
    std::vector<int> vars;
    for (const auto& lit : clause) vars.push_back(lit.var);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    edges.push_back(std::move(vars));
  }
  return Hypergraph::build(n_vars, std::move(edges));
}

Hypergraph load_gset(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  int lineno = 0;
  int n = -1, m = -1;
  std::vector<std::vector<int>> edges;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    if (n < 0) {
      if (!(ss >> n >> m) || n < 0 || m < 0) parse_fail(path, lineno, "expected header 'N M'");
      edges.reserve(m);
      continue;
    }
    int u, v;
    double w = 1.0;
    if (!(ss >> u >> v)) {
      std::string rest;
      if (ss >> rest) parse_fail(path, lineno, "expected edge 'u v [w]'");
      continue;  // blank line
    }
    ss >> w;  // optional weight, ignored (benchmarks treated unweighted)
    if (u < 1 || u > n || v < 1 || v > n)
      parse_fail(path, lineno, "endpoint outside [1, N]");
    if (u == v) parse_fail(path, lineno, "self-loop");
    edges.push_back({u - 1, v - 1});
  }
  if (n < 0) parse_fail(path, lineno == 0 ? 1 : lineno, "empty file");
  if (static_cast<int>(edges.size()) != m)
    parse_fail(path, lineno, "edge count " + std::to_string(edges.size()) +
                                 " does not match header " + std::to_string(m));
  return Hypergraph::build(n, std::move(edges));
}

CnfFormula load_dimacs_cnf(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  CnfFormula cnf;
  std::string line;
  int lineno = 0;
  int expected_clauses = -1;
  bool header_seen = false;
  std::vector<Literal> current;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
    if (line[0] == 'p') {
      std::istringstream ss(line);
      std::string p, fmt;
      if (!(ss >> p >> fmt >> cnf.n_vars >> expected_clauses) || fmt != "cnf")
        parse_fail(path, lineno, "expected 'p cnf <vars> <clauses>'");
      header_seen = true;
      continue;
    }
    if (!header_seen) parse_fail(path, lineno, "clause before 'p cnf' header");
    std::istringstream ss(line);
    long lit;
    while (ss >> lit) {
      if (lit == 0) {
        if (current.empty()) parse_fail(path, lineno, "empty clause");
        cnf.clauses.push_back(current);
        current.clear();
        continue;
      }
      const long var = lit > 0 ? lit : -lit;
      if (var > cnf.n_vars) parse_fail(path, lineno, "literal exceeds variable count");
      current.push_back({static_cast<int>(var - 1), lit > 0});
    }
  }
  if (!header_seen) parse_fail(path, lineno == 0 ? 1 : lineno, "missing 'p cnf' header");
  if (!current.empty()) cnf.clauses.push_back(current);  // tolerate missing final 0
  if (expected_clauses >= 0 && cnf.num_clauses() != expected_clauses)
    parse_fail(path, lineno, "clause count " + std::to_string(cnf.num_clauses()) +
                                 " does not match header " + std::to_string(expected_clauses));
  return cnf;
}

Hypergraph load_hyperedge_list(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  int lineno = 0;
  int max_id = 0;
  std::vector<std::vector<int>> edges;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::vector<int> e;
    long id;
    while (ss >> id) {
      if (id < 1) parse_fail(path, lineno, "node ids are 1-based");
      max_id = std::max(max_id, static_cast<int>(id));
      e.push_back(static_cast<int>(id - 1));
    }
    if (!ss.eof()) parse_fail(path, lineno, "non-integer token");
    if (!e.empty()) edges.push_back(std::move(e));
  }
  return Hypergraph::build(max_id, std::move(edges));
}

void save_hyperedge_list(const Hypergraph& h, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  for (const auto& e : h.edges()) {
    for (size_t i = 0; i < e.size(); ++i) out << (i ? " " : "") << e[i] + 1;
    out << "\n";
  }
}

void save_gset(const Hypergraph& h, const std::string& path) {
  if (!h.is_graph()) throw Error(ErrorCode::not_a_graph, "gset output needs size-2 edges");
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  out << h.num_nodes() << " " << h.num_edges() << "\n";
  for (const auto& e : h.edges()) out << e[0] + 1 << " " << e[1] + 1 << " 1\n";
}

void save_dimacs_cnf(const CnfFormula& cnf, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  out << "p cnf " << cnf.n_vars << " " << cnf.num_clauses() << "\n";
  for (const auto& clause : cnf.clauses) {
    for (const auto& lit : clause) out << (lit.positive ? lit.var + 1 : -(lit.var + 1)) << " ";
    out << "0\n";
  }
}

}  // namespace hypop
