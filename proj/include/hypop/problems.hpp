#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hypop/hypergraph.hpp"
#include "hypop/io.hpp"

namespace hypop {

struct Violation {
  int constraint = 0;
  double amount = 0.0;
};

// Discrete evaluation: `objective` is the minimized objective f(x) (penalty
// terms excluded); `metric` is the natural figure reported for the problem
// (cut size, independent-set size, unsatisfied clause count, ...).
struct DiscreteReport {
  double objective = 0.0;
  double metric = 0.0;
  std::vector<Violation> violations;
  std::vector<std::pair<std::string, double>> extras;  // e.g. mincut imbalance

  bool feasible() const { return violations.empty(); }
};

struct Assignment {
  std::vector<int> x;
  double penalized = 0.0;  // f̂(x), the value simulated annealing minimizes
  double objective = 0.0;  // f(x)
  double metric = 0.0;
  std::vector<Violation> violations;

  bool feasible() const { return violations.empty(); }
};

// Incremental single-flip evaluator owned by one annealing run. The base
// implementation re-evaluates the penalized objective from scratch; adapters
// override with O(degree) deltas.
class ProblemSpec;
class FlipEvaluator {
 public:
  explicit FlipEvaluator(const ProblemSpec& spec, std::vector<int> x);
  virtual ~FlipEvaluator() = default;

  const std::vector<int>& state() const { return x_; }
  double value() const { return value_; }

  // Change in penalized objective if x[node] were set to `value`.
  virtual double flip_delta(int node, int value);
  virtual void commit_flip(int node, int value);

 protected:
  const ProblemSpec& spec_;
  std::vector<int> x_;
  double value_ = 0.0;
};

// One combinatorial problem: constraint hypergraph, discrete domain, the
// penalized relaxed loss with analytic gradient, and discrete evaluators.
class ProblemSpec {
 public:
  virtual ~ProblemSpec() = default;

  const Hypergraph& hypergraph() const { return h_; }
  int num_nodes() const { return h_.num_nodes(); }
  const std::vector<int>& domain() const { return domain_; }
  const std::vector<double>& lambdas() const { return lambdas_; }
  virtual std::string name() const = 0;
  virtual std::string metric_name() const = 0;

  // Penalized relaxed loss terms attached to the given hyperedges; adds into
  // `grad` and returns the summed value. `p` has one entry per node.
  virtual double edge_terms(std::span<const double> p, std::span<double> grad,
                            std::span<const int> edge_ids) const = 0;

  // Loss terms not attached to any hyperedge (node-linear or global). Gradient
  // contributions are restricted to `grad_nodes`; the returned value is the
  // full term value.
  virtual double nonedge_terms(std::span<const double> p, std::span<double> grad,
                               std::span<const int> grad_nodes) const;

  // Full penalized loss f̂(p); overwrites grad.
  double loss(std::span<const double> p, std::span<double> grad) const;
  double loss_value(std::span<const double> p) const;

  virtual DiscreteReport evaluate(std::span<const int> x) const = 0;

  // f̂ at an integral point; equals loss() evaluated at p = x.
  double penalized_value(std::span<const int> x) const;

  Assignment make_assignment(std::vector<int> x) const;

  virtual std::unique_ptr<FlipEvaluator> flip_evaluator(std::vector<int> x,
                                                        bool incremental = true) const;

  const std::vector<int>& all_edge_ids() const { return all_edges_; }
  const std::vector<int>& all_node_ids() const { return all_nodes_; }

 protected:
  ProblemSpec(Hypergraph h, std::vector<int> domain, std::vector<double> lambdas);

  Hypergraph h_;
  std::vector<int> domain_;
  std::vector<double> lambdas_;
  std::vector<int> all_edges_;
  std::vector<int> all_nodes_;
};

using ProblemPtr = std::shared_ptr<const ProblemSpec>;

// Maximize the number of hyperedges with nodes in both groups. Relaxed loss is
// the negated expected cut under independent Bernoulli(p) rounding.
ProblemPtr hypergraph_maxcut(Hypergraph h);

// Minimize cut size subject to a soft balance penalty gamma * (sum p - N/2)^2.
// gamma < 0 selects the default 2 * mean hyperedge size / N.
ProblemPtr hypergraph_mincut(Hypergraph h, double balance_weight = -1.0);

// MaxCut restricted to 2-uniform hypergraphs; QUBO-form relaxed loss.
ProblemPtr graph_maxcut(Hypergraph h);

// Maximum independent set with edge penalty weight beta.
ProblemPtr mis(Hypergraph h, double beta = 2.0);

// Clause-unsatisfaction relaxation of a CNF formula; f == 0.
ProblemPtr sat3(CnfFormula cnf);

// Agent/task assignment lifted to one binary variable per (agent, task)
// incidence pair of the base hypergraph. Tasks are hyperedges, agents nodes;
// task k requires |edge k| assigned pairs, agent i may carry degree(i)+surplus.
ProblemPtr resource_allocation(const Hypergraph& base, int surplus);

// Mapping from resource-allocation variables back to (agent, task) pairs.
struct IncidencePair {
  int agent = 0;
  int task = 0;
};
const std::vector<IncidencePair>& resource_allocation_pairs(const ProblemSpec& spec);

}  // namespace hypop
