#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "hypop/io.hpp"

using namespace hypop;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& content) {
    static int counter = 0;
    path = "io_test_" + std::to_string(counter++) + ".tmp";
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("gset parsing") {
  SUBCASE("header plus weighted edges, 1-indexed") {
    TempFile f("4 3\n1 2 1\n2 3 -1\n1 4 1\n");
    Hypergraph h = load_gset(f.path);
    CHECK(h.num_nodes() == 4);
    CHECK(h.num_edges() == 3);
    CHECK(h.edge(0) == std::vector<int>{0, 1});
    CHECK(h.edge(2) == std::vector<int>{0, 3});
    CHECK(h.weight(1) == 1.0);  // file weights ignored
  }
  SUBCASE("edge count mismatch reports a parse error") {
    TempFile f("4 3\n1 2 1\n");
    CHECK_THROWS_WITH_AS(load_gset(f.path), doctest::Contains("does not match"), Error);
  }
  SUBCASE("bad endpoint carries the line number") {
    TempFile f("3 1\n1 9 1\n");
    CHECK_THROWS_WITH_AS(load_gset(f.path), doctest::Contains(":2:"), Error);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_gset("does_not_exist.gset"), Error);
  }
}

TEST_CASE("dimacs cnf parsing") {
  SUBCASE("basic formula") {
    TempFile f("c sample\np cnf 3 2\n1 -2 0\n2 3 0\n");
    CnfFormula cnf = load_dimacs_cnf(f.path);
    CHECK(cnf.n_vars == 3);
    REQUIRE(cnf.num_clauses() == 2);
    CHECK(cnf.clauses[0][0].var == 0);
    CHECK(cnf.clauses[0][0].positive);
    CHECK(cnf.clauses[0][1].var == 1);
    CHECK_FALSE(cnf.clauses[0][1].positive);
    CHECK(cnf.clauses[1][0].positive);
    CHECK(cnf.clauses[1][1].positive);

    Hypergraph h = cnf.constraint_hypergraph();
    CHECK(h.num_nodes() == 3);
    CHECK(h.num_edges() == 2);
  }
  SUBCASE("clauses may span lines") {
    TempFile f("p cnf 4 2\n1 2\n-3 0 4 -1 0\n");
    CnfFormula cnf = load_dimacs_cnf(f.path);
    REQUIRE(cnf.num_clauses() == 2);
    CHECK(cnf.clauses[0].size() == 3);
    CHECK(cnf.clauses[1].size() == 2);
  }
  SUBCASE("literal outside the declared range") {
    TempFile f("p cnf 2 1\n3 0\n");
    CHECK_THROWS_WITH_AS(load_dimacs_cnf(f.path), doctest::Contains(":2:"), Error);
  }
  SUBCASE("missing header") {
    TempFile f("1 2 0\n");
    CHECK_THROWS_AS(load_dimacs_cnf(f.path), Error);
  }
}

TEST_CASE("hyperedge list parsing") {
  SUBCASE("node count is the maximum id seen") {
    TempFile f("1 2 3\n2 4\n");
    Hypergraph h = load_hyperedge_list(f.path);
    CHECK(h.num_nodes() == 4);
    CHECK(h.num_edges() == 2);
    CHECK(h.edge(0) == std::vector<int>{0, 1, 2});
    CHECK(h.edge(1) == std::vector<int>{1, 3});
  }
  SUBCASE("blank lines are skipped") {
    TempFile f("1 2\n\n3 4\n");
    CHECK(load_hyperedge_list(f.path).num_edges() == 2);
  }
  SUBCASE("zero or negative ids rejected") {
    TempFile f("0 2\n");
    CHECK_THROWS_WITH_AS(load_hyperedge_list(f.path), doctest::Contains("1-based"), Error);
  }
  SUBCASE("non-integer token rejected") {
    TempFile f("1 x 3\n");
    CHECK_THROWS_AS(load_hyperedge_list(f.path), Error);
  }
}

TEST_CASE("writers round-trip through their parsers") {
  Hypergraph h = Hypergraph::build(5, {{0, 1, 4}, {2, 3}});
  TempFile f("");
  save_hyperedge_list(h, f.path);
  Hypergraph back = load_hyperedge_list(f.path);
  REQUIRE(back.num_edges() == h.num_edges());
  for (int k = 0; k < h.num_edges(); ++k) CHECK(back.edge(k) == h.edge(k));

  CnfFormula cnf;
  cnf.n_vars = 3;
  cnf.clauses = {{{0, true}, {1, false}}, {{2, true}}};
  save_dimacs_cnf(cnf, f.path);
  CnfFormula back_cnf = load_dimacs_cnf(f.path);
  CHECK(back_cnf.n_vars == 3);
  REQUIRE(back_cnf.num_clauses() == 2);
  CHECK(back_cnf.clauses[0][1].var == 1);
  CHECK_FALSE(back_cnf.clauses[0][1].positive);
}
