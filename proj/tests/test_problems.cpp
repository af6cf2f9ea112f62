#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hypop/generators.hpp"
#include "hypop/problems.hpp"
#include "hypop/util.hpp"
#include "support/oracles.hpp"

using namespace hypop;

namespace {

std::vector<double> random_interior(int n, std::mt19937_64& rng, double lo = 0.1,
                                    double hi = 0.9) {
  std::uniform_real_distribution<double> unif(lo, hi);
  std::vector<double> p(n);
  for (double& v : p) v = unif(rng);
  return p;
}

std::vector<int> random_assignment(const ProblemSpec& spec, std::mt19937_64& rng) {
  const auto& domain = spec.domain();
  std::uniform_int_distribution<int> pick(0, static_cast<int>(domain.size()) - 1);
  std::vector<int> x(spec.num_nodes());
  for (int& v : x) v = domain[pick(rng)];
  return x;
}

// Penalized objective reassembled from the discrete report.
double penalized_from_report(const ProblemSpec& spec, std::span<const int> x) {
  DiscreteReport rep = spec.evaluate(x);
  double value = rep.objective;
  for (const auto& viol : rep.violations) {
    const double lambda =
        spec.lambdas().empty() ? 1.0 : spec.lambdas()[viol.constraint];
    value += lambda * viol.amount;
  }
  return value;
}

void check_gradient(const ProblemSpec& spec, std::span<const double> p, double tol = 1e-5) {
  std::vector<double> analytic(p.size(), 0.0);
  spec.loss(p, analytic);
  std::vector<double> numeric = oracle::fd_loss_gradient(spec, p);
  for (size_t i = 0; i < analytic.size(); ++i) {
    const double err = std::abs(analytic[i] - numeric[i]) / (1.0 + std::abs(analytic[i]));
    CHECK(err <= tol);
  }
}

void check_flip_evaluator(const ProblemSpec& spec, std::uint64_t seed, int steps = 200) {
  auto rng = make_rng(seed);
  std::vector<int> x = random_assignment(spec, rng);
  auto fast = spec.flip_evaluator(x, true);
  auto slow = spec.flip_evaluator(x, false);
  std::uniform_int_distribution<int> node_pick(0, spec.num_nodes() - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const auto& domain = spec.domain();
  std::uniform_int_distribution<int> value_pick(0, static_cast<int>(domain.size()) - 1);
  for (int t = 0; t < steps; ++t) {
    const int node = node_pick(rng);
    const int value = domain[value_pick(rng)];
    const double df = fast->flip_delta(node, value);
    const double ds = slow->flip_delta(node, value);
    CHECK(df == doctest::Approx(ds).epsilon(1e-9));
    if (coin(rng) < 0.5) {
      fast->commit_flip(node, value);
      slow->commit_flip(node, value);
      CHECK(fast->value() == doctest::Approx(slow->value()).epsilon(1e-9));
      CHECK(fast->state() == slow->state());
    }
  }
  CHECK(fast->value() == doctest::Approx(spec.penalized_value(fast->state())));
}

}  // namespace

TEST_CASE("hypergraph maxcut basics") {
  auto single = hypergraph_maxcut(Hypergraph::build(2, {{0, 1}}));
  CHECK(single->evaluate(std::vector<int>{0, 1}).metric == 1.0);
  CHECK(single->evaluate(std::vector<int>{0, 0}).metric == 0.0);
  CHECK(single->evaluate(std::vector<int>{0, 1}).objective == -1.0);

  SUBCASE("exhaustive optimum of the 3-edge instance") {
    auto spec = hypergraph_maxcut(Hypergraph::build(4, {{0, 1}, {1, 2, 3}, {0, 2}}));
    oracle::BruteForce bf = oracle::brute_force(*spec);
    CHECK(bf.max_metric == 3.0);
    CHECK(bf.min_penalized == -3.0);
  }

  SUBCASE("relaxed value of the all-0.5 point on one hyperedge") {
    for (int m : {2, 3, 5}) {
      std::vector<int> edge(m);
      for (int i = 0; i < m; ++i) edge[i] = i;
      auto spec = hypergraph_maxcut(Hypergraph::build(m, {edge}));
      std::vector<double> p(m, 0.5);
      const double expected_cut = 1.0 - 2.0 * std::pow(0.5, m);
      CHECK(spec->loss_value(p) == doctest::Approx(-expected_cut));
    }
  }

  SUBCASE("relaxed loss at integral points equals the negated cut") {
    auto spec = hypergraph_maxcut(gen_random_hypergraph(10, 16, 8, 3));
    auto rng = make_rng(17);
    for (int t = 0; t < 30; ++t) {
      std::vector<int> x = random_assignment(*spec, rng);
      CHECK(spec->penalized_value(x) == -spec->evaluate(x).metric);
    }
  }
}

TEST_CASE("hypergraph mincut basics") {
  SUBCASE("two disjoint hyperedges separate perfectly") {
    auto spec = hypergraph_mincut(Hypergraph::build(6, {{0, 1, 2}, {3, 4, 5}}), 1.0);
    oracle::BruteForce bf = oracle::brute_force(*spec);
    DiscreteReport rep = spec->evaluate(bf.argmin);
    CHECK(rep.metric == 0.0);
    CHECK(rep.extras[0].second == 0.0);  // imbalance
  }

  SUBCASE("path instance with a strong balance weight cuts one hyperedge") {
    auto spec = hypergraph_mincut(Hypergraph::build(3, {{0, 1}, {1, 2}}), 10.0);
    oracle::BruteForce bf = oracle::brute_force(*spec);
    CHECK(spec->evaluate(bf.argmin).metric == 1.0);
    CHECK(bf.min_penalized == doctest::Approx(1.0 + 10.0 * 0.25));
  }

  SUBCASE("zero balance weight degenerates to one group") {
    auto spec = hypergraph_mincut(Hypergraph::build(3, {{0, 1}, {1, 2}}), 0.0);
    oracle::BruteForce bf = oracle::brute_force(*spec);
    CHECK(bf.min_penalized == 0.0);
    CHECK(spec->evaluate(bf.argmin).metric == 0.0);
  }
}

TEST_CASE("graph maxcut basics") {
  SUBCASE("triangle optimum is 2") {
    auto spec = graph_maxcut(Hypergraph::build(3, {{0, 1}, {1, 2}, {0, 2}}));
    oracle::BruteForce bf = oracle::brute_force(*spec);
    CHECK(bf.max_metric == 2.0);
  }
  SUBCASE("single cut edge scores -1") {
    auto spec = graph_maxcut(Hypergraph::build(2, {{0, 1}}));
    std::vector<double> p = {1.0, 0.0};
    CHECK(spec->loss_value(p) == doctest::Approx(-1.0));
  }
  SUBCASE("hyperedges of size != 2 are rejected") {
    CHECK_THROWS_AS(graph_maxcut(Hypergraph::build(3, {{0, 1, 2}})), Error);
  }
  SUBCASE("agrees with the hypergraph adapter on 2-uniform instances") {
    Hypergraph g = gen_er_graph(10, 0.4, 9);
    auto as_graph = graph_maxcut(g);
    auto as_hyper = hypergraph_maxcut(g);
    auto rng = make_rng(23);
    for (int t = 0; t < 20; ++t) {
      std::vector<int> x = random_assignment(*as_graph, rng);
      CHECK(as_graph->penalized_value(x) == doctest::Approx(as_hyper->penalized_value(x)));
      std::vector<double> p = random_interior(10, rng);
      CHECK(as_graph->loss_value(p) == doctest::Approx(as_hyper->loss_value(p)));
    }
  }
}

TEST_CASE("independent set basics") {
  SUBCASE("empty graph takes every node") {
    auto spec = mis(Hypergraph::build(5, {}));
    oracle::BruteForce bf = oracle::brute_force(*spec);
    CHECK(bf.max_feasible_metric == 5.0);
  }
  SUBCASE("triangle takes one node") {
    auto spec = mis(Hypergraph::build(3, {{0, 1}, {1, 2}, {0, 2}}));
    CHECK(oracle::brute_force(*spec).max_feasible_metric == 1.0);
  }
  SUBCASE("path takes both endpoints") {
    auto spec = mis(Hypergraph::build(3, {{0, 1}, {1, 2}}));
    oracle::BruteForce bf = oracle::brute_force(*spec);
    CHECK(bf.max_feasible_metric == 2.0);
    CHECK(bf.argmin == std::vector<int>{1, 0, 1});
  }
  SUBCASE("penalty beta > 1 makes violations never pay off at the optimum") {
    auto spec = mis(gen_er_graph(12, 0.3, 4), 2.0);
    oracle::BruteForce bf = oracle::brute_force(*spec);
    CHECK(spec->evaluate(bf.argmin).feasible());
  }
}

TEST_CASE("sat3 basics") {
  SUBCASE("satisfied clause contributes zero") {
    CnfFormula cnf;
    cnf.n_vars = 2;
    cnf.clauses = {{{0, true}, {1, false}}};
    auto spec = sat3(cnf);
    CHECK(spec->penalized_value(std::vector<int>{1, 1}) == 0.0);
    CHECK(spec->evaluate(std::vector<int>{1, 1}).feasible());
    CHECK(spec->penalized_value(std::vector<int>{0, 1}) == 1.0);
  }
  SUBCASE("contradiction leaves exactly one clause unsatisfied") {
    CnfFormula cnf;
    cnf.n_vars = 1;
    cnf.clauses = {{{0, true}}, {{0, false}}};
    CHECK(oracle::brute_force(*sat3(cnf)).min_metric == 1.0);
  }
  SUBCASE("empty clause is rejected") {
    CnfFormula cnf;
    cnf.n_vars = 1;
    cnf.clauses = {{}};
    try {
      sat3(cnf);
      FAIL("expected empty_clause");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::empty_clause);
    }
  }
  SUBCASE("clause relaxation stays in [0,1] and flags unsatisfied integral points") {
    CnfFormula cnf = gen_random_3sat(8, 20, 5);
    auto spec = sat3(cnf);
    auto rng = make_rng(31);
    std::vector<double> grad(8, 0.0);
    for (int t = 0; t < 20; ++t) {
      std::vector<double> p = random_interior(8, rng, 0.0, 1.0);
      for (int k = 0; k < 20; ++k) {
        std::fill(grad.begin(), grad.end(), 0.0);
        const int ids[] = {k};
        const double c = spec->edge_terms(p, grad, ids);
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
      }
      std::vector<int> x = random_assignment(*spec, rng);
      CHECK(spec->penalized_value(x) == spec->evaluate(x).metric);
    }
  }
}

TEST_CASE("resource allocation lifts to incidence variables") {
  SUBCASE("one two-agent task assigns both") {
    Hypergraph base = Hypergraph::build(2, {{0, 1}});
    auto spec = resource_allocation(base, 1);
    CHECK(spec->num_nodes() == 2);  // two incidence pairs
    CHECK(spec->evaluate(std::vector<int>{1, 1}).feasible());
    CHECK_FALSE(spec->evaluate(std::vector<int>{1, 0}).feasible());
  }
  SUBCASE("an agent with three unit tasks can carry all of them at surplus 0") {
    Hypergraph base = Hypergraph::build(1, {{0}, {0}, {0}});
    auto spec = resource_allocation(base, 0);
    CHECK(spec->num_nodes() == 3);
    // Constraint hypergraph: 3 task edges + 1 agent edge with budget 3.
    CHECK(spec->hypergraph().num_edges() == 4);
    CHECK(spec->evaluate(std::vector<int>{1, 1, 1}).feasible());
  }
  SUBCASE("pair bookkeeping matches the base incidence") {
    Hypergraph base = gen_random_hypergraph(6, 8, 5, 2);
    auto spec = resource_allocation(base, 1);
    const auto& pairs = resource_allocation_pairs(*spec);
    CHECK(static_cast<int>(pairs.size()) == spec->num_nodes());
    CHECK(static_cast<std::int64_t>(pairs.size()) == base.total_pins());
    for (const auto& pr : pairs) {
      const auto& e = base.edge(pr.task);
      CHECK(std::find(e.begin(), e.end(), pr.agent) != e.end());
    }
  }
  SUBCASE("all-ones is feasible whenever the surplus is non-negative") {
    Hypergraph base = gen_random_hypergraph(8, 10, 6, 7);
    for (int surplus : {0, 1, 3}) {
      auto spec = resource_allocation(base, surplus);
      std::vector<int> ones(spec->num_nodes(), 1);
      CHECK(spec->evaluate(ones).feasible());
    }
  }
}

TEST_CASE("analytic gradients match central differences on 20 interior points") {
  auto rng = make_rng(101);
  std::vector<ProblemPtr> specs;
  specs.push_back(hypergraph_maxcut(gen_random_hypergraph(12, 18, 8, 1)));
  specs.push_back(hypergraph_mincut(gen_random_hypergraph(12, 18, 8, 2), 0.7));
  specs.push_back(graph_maxcut(gen_er_graph(12, 0.3, 3)));
  specs.push_back(mis(gen_er_graph(12, 0.3, 4), 2.0));
  specs.push_back(sat3(gen_random_3sat(12, 30, 5)));
  specs.push_back(resource_allocation(gen_random_hypergraph(6, 8, 5, 6), 1));

  for (const auto& spec : specs) {
    CAPTURE(spec->name());
    int checked = 0;
    while (checked < 20) {
      std::vector<double> p = random_interior(spec->num_nodes(), rng);
      // Hinge terms are non-smooth where a constraint sits at zero; sample
      // away from those kinks so central differences are valid.
      if (spec->name() == "resource-allocation") {
        bool near_kink = false;
        const auto& h = spec->hypergraph();
        for (int k = 0; k < h.num_edges() && !near_kink; ++k) {
          double sum = 0.0;
          for (int i : h.edge(k)) sum += p[i];
          if (std::abs(sum - std::round(sum)) < 1e-3) near_kink = true;
        }
        if (near_kink) continue;
      }
      check_gradient(*spec, p);
      ++checked;
    }
  }
}

TEST_CASE("integral consistency: discrete reports reassemble the penalized loss") {
  auto rng = make_rng(313);
  std::vector<ProblemPtr> specs;
  specs.push_back(hypergraph_maxcut(gen_random_hypergraph(10, 14, 6, 11)));
  specs.push_back(hypergraph_mincut(gen_random_hypergraph(10, 14, 6, 12), 0.5));
  specs.push_back(graph_maxcut(gen_er_graph(10, 0.35, 13)));
  specs.push_back(mis(gen_er_graph(10, 0.35, 14), 2.0));
  specs.push_back(sat3(gen_random_3sat(10, 24, 15)));
  specs.push_back(resource_allocation(gen_random_hypergraph(5, 7, 5, 16), 0));

  for (const auto& spec : specs) {
    CAPTURE(spec->name());
    for (int t = 0; t < 25; ++t) {
      std::vector<int> x = random_assignment(*spec, rng);
      CHECK(spec->penalized_value(x) ==
            doctest::Approx(penalized_from_report(*spec, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("incremental flip evaluators agree with full re-evaluation") {
  check_flip_evaluator(*hypergraph_maxcut(gen_random_hypergraph(14, 20, 8, 21)), 1);
  check_flip_evaluator(*hypergraph_mincut(gen_random_hypergraph(14, 20, 8, 22), 0.8), 2);
  check_flip_evaluator(*graph_maxcut(gen_er_graph(14, 0.3, 23)), 3);
  check_flip_evaluator(*mis(gen_er_graph(14, 0.3, 24), 2.0), 4);
  check_flip_evaluator(*sat3(gen_random_3sat(14, 40, 25)), 5);
  check_flip_evaluator(*resource_allocation(gen_random_hypergraph(7, 9, 5, 26), 1), 6);
}
