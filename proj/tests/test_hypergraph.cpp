#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "hypop/generators.hpp"
#include "hypop/hypergraph.hpp"
#include "hypop/util.hpp"

using namespace hypop;

namespace {

// Six variables, four constraints.
Hypergraph example_instance() {
  return Hypergraph::build(6, {{0, 1, 2}, {2, 3}, {3, 4, 5}, {1, 4}});
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  throw std::logic_error("expected an error");
}

}  // namespace

TEST_CASE("build validates and derives degrees") {
  Hypergraph h = example_instance();
  CHECK(h.num_nodes() == 6);
  CHECK(h.num_edges() == 4);

  Hypergraph empty = Hypergraph::build(3, {});
  CHECK(empty.num_nodes() == 3);
  CHECK(empty.num_edges() == 0);

  Hypergraph g = Hypergraph::build(4, {{0, 1}, {1, 2, 3}, {0, 2}});
  CHECK(g.node_degrees() == std::vector<int>{2, 2, 2, 1});
  CHECK(g.total_pins() == 7);

  CHECK(code_of([] { Hypergraph::build(3, {{0, 3}}); }) == ErrorCode::index_out_of_range);
  CHECK(code_of([] { Hypergraph::build(3, {{0, -1}}); }) == ErrorCode::index_out_of_range);
  CHECK(code_of([] { Hypergraph::build(3, {{}}); }) == ErrorCode::empty_hyperedge);
  CHECK(code_of([] { Hypergraph::build(3, {{1, 1}}); }) == ErrorCode::duplicate_node_in_edge);
}

TEST_CASE("size-1 hyperedges load but can be stripped") {
  Hypergraph h = Hypergraph::build(3, {{0}, {0, 1}, {2}});
  CHECK(h.num_edges() == 3);
  Hypergraph stripped = h.strip_unit_edges();
  CHECK(stripped.num_edges() == 1);
  CHECK(stripped.edge(0) == std::vector<int>{0, 1});
}

TEST_CASE("propagation operator hand-computed cases") {
  SUBCASE("single pairwise edge, modified") {
    Hypergraph h = Hypergraph::build(2, {{0, 1}});
    PropagationOperator op = propagation_operator(h, OperatorVariant::modified);
    Matrix d = op.dense();
    CHECK(d(0, 0) == 0.0);
    CHECK(d(1, 1) == 0.0);
    CHECK(d(0, 1) == doctest::Approx(1.0));
    CHECK(d(1, 0) == doctest::Approx(1.0));
  }
  SUBCASE("no hyperedges gives the zero operator") {
    Hypergraph h = Hypergraph::build(4, {});
    PropagationOperator op = propagation_operator(h, OperatorVariant::modified);
    CHECK(op.nnz() == 0);
  }
  SUBCASE("single 3-edge, modified: off-diagonals 1/2") {
    Hypergraph h = Hypergraph::build(3, {{0, 1, 2}});
    Matrix d = propagation_operator(h, OperatorVariant::modified).dense();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(d(i, j) == doctest::Approx(i == j ? 0.0 : 0.5));
  }
  SUBCASE("standard variant keeps the diagonal") {
    Hypergraph h = Hypergraph::build(2, {{0, 1}});
    Matrix d = propagation_operator(h, OperatorVariant::standard).dense();
    CHECK(d(0, 0) == doctest::Approx(0.5));
    CHECK(d(0, 1) == doctest::Approx(0.5));
  }
}

TEST_CASE("propagation operator invariants on random hypergraphs") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Hypergraph h = gen_random_hypergraph(30, 45, 12, seed);
    for (auto variant : {OperatorVariant::modified, OperatorVariant::standard}) {
      PropagationOperator op = propagation_operator(h, variant);
      Matrix d = op.dense();
      for (int i = 0; i < d.rows; ++i) {
        if (variant == OperatorVariant::modified) CHECK(d(i, i) == 0.0);
        for (int j = i + 1; j < d.cols; ++j)
          CHECK(std::abs(d(i, j) - d(j, i)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("degree-0 nodes produce zero rows") {
  Hypergraph h = Hypergraph::build(4, {{1, 2}});
  Matrix d = propagation_operator(h, OperatorVariant::modified).dense();
  for (int j = 0; j < 4; ++j) {
    CHECK(d(0, j) == 0.0);
    CHECK(d(3, j) == 0.0);
  }
}

TEST_CASE("2-uniform modified operator equals normalized adjacency without diagonal") {
  Hypergraph g = gen_er_graph(24, 0.2, 5);
  Matrix d = propagation_operator(g, OperatorVariant::modified).dense();
  const auto& deg = g.node_degrees();
  Matrix expect(24, 24);
  for (const auto& e : g.edges()) {
    const double v = 1.0 / std::sqrt(static_cast<double>(deg[e[0]]) * deg[e[1]]);
    expect(e[0], e[1]) = v;
    expect(e[1], e[0]) = v;
  }
  for (int i = 0; i < 24; ++i)
    for (int j = 0; j < 24; ++j) CHECK(d(i, j) == doctest::Approx(expect(i, j)));
}

TEST_CASE("partition schemes and inner/outer classification") {
  Hypergraph h = example_instance();

  SUBCASE("single worker holds everything inner") {
    Partition p = make_partition(h, 1, PartitionScheme::block);
    CHECK(p.inner_edges[0].size() == 4);
    CHECK(p.outer_edges[0].empty());
  }

  SUBCASE("two block workers split as expected") {
    Partition p = make_partition(h, 2, PartitionScheme::block);
    CHECK(p.nodes[0] == std::vector<int>{0, 1, 2});
    CHECK(p.nodes[1] == std::vector<int>{3, 4, 5});
    CHECK(p.inner_edges[0] == std::vector<int>{0});     // {0,1,2}
    CHECK(p.outer_edges[0] == std::vector<int>{1, 3});  // {2,3}, {1,4}
    CHECK(p.inner_edges[1] == std::vector<int>{2});     // {3,4,5}
    CHECK(p.outer_edges[1] == std::vector<int>{1, 3});
  }

  SUBCASE("one worker per node makes every multi-node edge outer") {
    Partition p = make_partition(h, 6, PartitionScheme::block);
    for (int s = 0; s < 6; ++s) CHECK(p.inner_edges[s].empty());
  }

  SUBCASE("worker count validation") {
    CHECK(code_of([&] { make_partition(h, 7, PartitionScheme::block); }) ==
          ErrorCode::too_many_workers);
    CHECK(code_of([&] { make_partition(h, 0, PartitionScheme::block); }) ==
          ErrorCode::too_many_workers);
  }
}

TEST_CASE("partition covers every edge exactly once as inner-or-outer set") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Hypergraph h = gen_random_hypergraph(40, 60, 15, seed);
    for (int s : {1, 2, 3, 7}) {
      Partition p = make_partition(h, s, PartitionScheme::random, seed);

      // Node sets partition [0, N).
      std::vector<int> seen;
      for (const auto& nodes : p.nodes) seen.insert(seen.end(), nodes.begin(), nodes.end());
      std::sort(seen.begin(), seen.end());
      CHECK(static_cast<int>(seen.size()) == h.num_nodes());
      CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());

      // Inner sets are disjoint across workers; inner + deduplicated outer = all.
      std::set<int> inner_all, outer_all;
      size_t inner_total = 0;
      for (int w = 0; w < s; ++w) {
        inner_total += p.inner_edges[w].size();
        inner_all.insert(p.inner_edges[w].begin(), p.inner_edges[w].end());
        outer_all.insert(p.outer_edges[w].begin(), p.outer_edges[w].end());
        for (int k : p.inner_edges[w])
          for (int i : h.edge(k)) CHECK(p.owner[i] == w);
      }
      CHECK(inner_total == inner_all.size());
      std::set<int> both = inner_all;
      both.insert(outer_all.begin(), outer_all.end());
      CHECK(static_cast<int>(both.size()) == h.num_edges());
      for (int k : outer_all) CHECK(inner_all.count(k) == 0);

      // A crossing edge appears in the outer list of every worker it touches.
      for (int k = 0; k < h.num_edges(); ++k) {
        std::set<int> owners;
        for (int i : h.edge(k)) owners.insert(p.owner[i]);
        CHECK(p.edge_multiplicity[k] == static_cast<int>(owners.size()));
        if (owners.size() > 1)
          for (int w : owners)
            CHECK(std::binary_search(p.outer_edges[w].begin(), p.outer_edges[w].end(), k));
      }
    }
  }
}

TEST_CASE("sparsify keeps edges independently") {
  Hypergraph h = gen_random_hypergraph(50, 80, 20, 1);

  SUBCASE("drop probability 0 keeps everything, for any seed") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Hypergraph s = sparsify(h, 0.0, seed);
      REQUIRE(s.num_edges() == h.num_edges());
      for (int k = 0; k < h.num_edges(); ++k) CHECK(s.edge(k) == h.edge(k));
    }
  }
  SUBCASE("drop probability 1 removes everything") {
    CHECK(sparsify(h, 1.0, 3).num_edges() == 0);
  }
  SUBCASE("retained count sits in the binomial 4-sigma band") {
    Hypergraph big = gen_random_hypergraph(400, 1000, 40, 2);
    Hypergraph s = sparsify(big, 0.3, 9);
    const double mean = 1000 * 0.7;
    const double sigma = std::sqrt(1000 * 0.7 * 0.3);
    CHECK(s.num_edges() >= mean - 4 * sigma);
    CHECK(s.num_edges() <= mean + 4 * sigma);
  }
  SUBCASE("deterministic under seed") {
    Hypergraph a = sparsify(h, 0.4, 11), b = sparsify(h, 0.4, 11);
    REQUIRE(a.num_edges() == b.num_edges());
    for (int k = 0; k < a.num_edges(); ++k) CHECK(a.edge(k) == b.edge(k));
  }
}

TEST_CASE("bipartite expansion introduces one factor node per hyperedge") {
  SUBCASE("triangle hyperedge") {
    Hypergraph h = Hypergraph::build(3, {{0, 1, 2}});
    Hypergraph b = bipartite_expansion(h);
    CHECK(b.num_nodes() == 4);
    REQUIRE(b.num_edges() == 3);
    CHECK(b.edge(0) == std::vector<int>{0, 3});
    CHECK(b.edge(1) == std::vector<int>{1, 3});
    CHECK(b.edge(2) == std::vector<int>{2, 3});
  }
  SUBCASE("no hyperedges") {
    Hypergraph b = bipartite_expansion(Hypergraph::build(5, {}));
    CHECK(b.num_nodes() == 5);
    CHECK(b.num_edges() == 0);
  }
  SUBCASE("pin count and factor degrees recover hyperedge sizes") {
    Hypergraph h = example_instance();
    Hypergraph b = bipartite_expansion(h);
    CHECK(b.num_nodes() == 10);
    CHECK(b.num_edges() == h.total_pins());
    for (int k = 0; k < h.num_edges(); ++k)
      CHECK(b.node_degrees()[6 + k] == static_cast<int>(h.edge(k).size()));
  }
}
