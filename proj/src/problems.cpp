#include "hypop/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hypop {

namespace {

std::vector<int> iota_vec(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

// Expected-cut term of one hyperedge under independent Bernoulli(p) rounding:
// t = 1 - prod(p) - prod(1-p). Adds sign * w * t to the value and the matching
// gradient via prefix/suffix products.
double expected_cut_term(std::span<const double> p, std::span<double> grad,
                         const std::vector<int>& edge, double w, double sign,
                         std::vector<double>& scratch) {
  const int m = static_cast<int>(edge.size());
  scratch.assign(static_cast<size_t>(2 * (m + 1)), 0.0);
  double* pre1 = scratch.data();          // prefix products of p
  double* pre0 = scratch.data() + m + 1;  // prefix products of 1-p
  pre1[0] = pre0[0] = 1.0;
  for (int a = 0; a < m; ++a) {
    pre1[a + 1] = pre1[a] * p[edge[a]];
    pre0[a + 1] = pre0[a] * (1.0 - p[edge[a]]);
  }
  double suf1 = 1.0, suf0 = 1.0;
  for (int a = m - 1; a >= 0; --a) {
    // d t / d p_a = -prod_{j!=a} p_j + prod_{j!=a} (1-p_j)
    grad[edge[a]] += sign * w * (-pre1[a] * suf1 + pre0[a] * suf0);
    suf1 *= p[edge[a]];
    suf0 *= (1.0 - p[edge[a]]);
  }
  return sign * w * (1.0 - pre1[m] - pre0[m]);
}

int hyperedge_cut(std::span<const int> x, const std::vector<int>& edge) {
  const int first = x[edge[0]];
  for (size_t a = 1; a < edge.size(); ++a)
    if (x[edge[a]] != first) return 1;
  return 0;
}

}  // namespace

ProblemSpec::ProblemSpec(Hypergraph h, std::vector<int> domain, std::vector<double> lambdas)
    : h_(std::move(h)), domain_(std::move(domain)), lambdas_(std::move(lambdas)) {
  all_edges_ = iota_vec(h_.num_edges());
  all_nodes_ = iota_vec(h_.num_nodes());
}

double ProblemSpec::nonedge_terms(std::span<const double>, std::span<double>,
                                  std::span<const int>) const {
  return 0.0;
}

double ProblemSpec::loss(std::span<const double> p, std::span<double> grad) const {
  std::fill(grad.begin(), grad.end(), 0.0);
  double v = edge_terms(p, grad, all_edges_);
  v += nonedge_terms(p, grad, all_nodes_);
  return v;
}

double ProblemSpec::loss_value(std::span<const double> p) const {
  std::vector<double> grad(p.size(), 0.0);
  return loss(p, grad);
}

double ProblemSpec::penalized_value(std::span<const int> x) const {
  std::vector<double> p(x.begin(), x.end());
  return loss_value(p);
}

Assignment ProblemSpec::make_assignment(std::vector<int> x) const {
  DiscreteReport rep = evaluate(x);
  Assignment a;
  a.penalized = penalized_value(x);
  a.objective = rep.objective;
  a.metric = rep.metric;
  a.violations = std::move(rep.violations);
  a.x = std::move(x);
  return a;
}

FlipEvaluator::FlipEvaluator(const ProblemSpec& spec, std::vector<int> x)
    : spec_(spec), x_(std::move(x)) {
  value_ = spec_.penalized_value(x_);
}

double FlipEvaluator::flip_delta(int node, int value) {
  const int old = x_[node];
  if (old == value) return 0.0;
  x_[node] = value;
  const double after = spec_.penalized_value(x_);
  x_[node] = old;
  return after - value_;
}

void FlipEvaluator::commit_flip(int node, int value) {
  x_[node] = value;
  value_ = spec_.penalized_value(x_);
}

std::unique_ptr<FlipEvaluator> ProblemSpec::flip_evaluator(std::vector<int> x,
                                                           bool) const {
  return std::make_unique<FlipEvaluator>(*this, std::move(x));
}

// ---------------------------------------------------------------------------
// Cut-counting flip evaluator shared by the MaxCut/MinCut adapters: tracks the
// number of ones per hyperedge, updating cut status in O(degree) per flip.
namespace {

class CutFlip : public FlipEvaluator {
 public:
  CutFlip(const ProblemSpec& spec, std::vector<int> x, double cut_sign,
          double balance_gamma)
      : FlipEvaluator(spec, std::move(x)),
        cut_sign_(cut_sign),
        gamma_(balance_gamma) {
    const auto& h = spec_.hypergraph();
    ones_.assign(h.num_edges(), 0);
    for (int k = 0; k < h.num_edges(); ++k)
      for (int i : h.edge(k)) ones_[k] += x_[i];
    sum_ = std::accumulate(x_.begin(), x_.end(), 0);
  }

  double flip_delta(int node, int value) override {
    const int old = x_[node];
    if (old == value) return 0.0;
    const auto& h = spec_.hypergraph();
    const int d = value - old;
    double delta = 0.0;
    for (int k : h.incidence()[node]) {
      const int m = static_cast<int>(h.edge(k).size());
      const int before = ones_[k];
      const int after = before + d;
      const int cut_before = (before > 0 && before < m) ? 1 : 0;
      const int cut_after = (after > 0 && after < m) ? 1 : 0;
      delta += cut_sign_ * h.weight(k) * (cut_after - cut_before);
    }
    if (gamma_ != 0.0) {
      const double c = spec_.num_nodes() / 2.0;
      const double s = static_cast<double>(sum_);
      delta += gamma_ * ((s + d - c) * (s + d - c) - (s - c) * (s - c));
    }
    return delta;
  }

  void commit_flip(int node, int value) override {
    const int old = x_[node];
    if (old == value) return;
    value_ += flip_delta(node, value);
    const int d = value - old;
    const auto& h = spec_.hypergraph();
    for (int k : h.incidence()[node]) ones_[k] += d;
    sum_ += d;
    x_[node] = value;
  }

 private:
  double cut_sign_;  // -1: maximize cut, +1: minimize cut
  double gamma_;
  std::vector<int> ones_;
  int sum_ = 0;
};

// ---------------------------------------------------------------------------

class HypergraphMaxcut : public ProblemSpec {
 public:
  explicit HypergraphMaxcut(Hypergraph h)
      : ProblemSpec(std::move(h), {0, 1}, {}) {}

  std::string name() const override { return "hypergraph-maxcut"; }
  std::string metric_name() const override { return "cut"; }

  double edge_terms(std::span<const double> p, std::span<double> grad,
                    std::span<const int> edge_ids) const override {
    double v = 0.0;
    std::vector<double> scratch;
    for (int k : edge_ids)
      v += expected_cut_term(p, grad, h_.edge(k), h_.weight(k), -1.0, scratch);
    return v;
  }

  DiscreteReport evaluate(std::span<const int> x) const override {
    double cut = 0.0;
    for (int k = 0; k < h_.num_edges(); ++k)
      cut += h_.weight(k) * hyperedge_cut(x, h_.edge(k));
    return {.objective = -cut, .metric = cut, .violations = {}, .extras = {}};
  }

  std::unique_ptr<FlipEvaluator> flip_evaluator(std::vector<int> x,
                                                bool incremental) const override {
    if (!incremental) return std::make_unique<FlipEvaluator>(*this, std::move(x));
    return std::make_unique<CutFlip>(*this, std::move(x), -1.0, 0.0);
  }
};

class HypergraphMincut : public ProblemSpec {
 public:
  HypergraphMincut(Hypergraph h, double gamma)
      : ProblemSpec(std::move(h), {0, 1}, {}), gamma_(gamma) {
    if (gamma_ < 0.0) {
      const double mean_size =
          h_.num_edges() > 0
              ? static_cast<double>(h_.total_pins()) / h_.num_edges()
              : 0.0;
      gamma_ = h_.num_nodes() > 0 ? 2.0 * mean_size / h_.num_nodes() : 1.0;
      if (gamma_ <= 0.0) gamma_ = 1.0;
    }
  }

  std::string name() const override { return "hypergraph-mincut"; }
  std::string metric_name() const override { return "cut"; }
  double gamma() const { return gamma_; }

  double edge_terms(std::span<const double> p, std::span<double> grad,
                    std::span<const int> edge_ids) const override {
    double v = 0.0;
    std::vector<double> scratch;
    for (int k : edge_ids)
      v += expected_cut_term(p, grad, h_.edge(k), h_.weight(k), 1.0, scratch);
    return v;
  }

  double nonedge_terms(std::span<const double> p, std::span<double> grad,
                       std::span<const int> grad_nodes) const override {
    const double c = num_nodes() / 2.0;
    const double s = std::accumulate(p.begin(), p.end(), 0.0);
    for (int i : grad_nodes) grad[i] += 2.0 * gamma_ * (s - c);
    return gamma_ * (s - c) * (s - c);
  }

  DiscreteReport evaluate(std::span<const int> x) const override {
    double cut = 0.0;
    for (int k = 0; k < h_.num_edges(); ++k)
      cut += h_.weight(k) * hyperedge_cut(x, h_.edge(k));
    const double imbalance =
        std::abs(std::accumulate(x.begin(), x.end(), 0.0) - num_nodes() / 2.0);
    DiscreteReport rep;
    rep.objective = cut + gamma_ * imbalance * imbalance;
    rep.metric = cut;
    rep.extras = {{"imbalance", imbalance}};
    return rep;
  }

  std::unique_ptr<FlipEvaluator> flip_evaluator(std::vector<int> x,
                                                bool incremental) const override {
    if (!incremental) return std::make_unique<FlipEvaluator>(*this, std::move(x));
    return std::make_unique<CutFlip>(*this, std::move(x), 1.0, gamma_);
  }

 private:
  double gamma_;
};

class GraphMaxcut : public ProblemSpec {
 public:
  explicit GraphMaxcut(Hypergraph h) : ProblemSpec(std::move(h), {0, 1}, {}) {
    if (!h_.is_graph())
      throw Error(ErrorCode::not_a_graph, "graph maxcut needs size-2 hyperedges");
  }

  std::string name() const override { return "graph-maxcut"; }
  std::string metric_name() const override { return "cut"; }

  double edge_terms(std::span<const double> p, std::span<double> grad,
                    std::span<const int> edge_ids) const override {
    double v = 0.0;
    for (int k : edge_ids) {
      const auto& e = h_.edge(k);
      const double w = h_.weight(k);
      const double pi = p[e[0]], pj = p[e[1]];
      v += w * (2.0 * pi * pj - pi - pj);
      grad[e[0]] += w * (2.0 * pj - 1.0);
      grad[e[1]] += w * (2.0 * pi - 1.0);
    }
    return v;
  }

  DiscreteReport evaluate(std::span<const int> x) const override {
    double cut = 0.0;
    for (int k = 0; k < h_.num_edges(); ++k)
      cut += h_.weight(k) * (x[h_.edge(k)[0]] != x[h_.edge(k)[1]] ? 1 : 0);
    return {.objective = -cut, .metric = cut, .violations = {}, .extras = {}};
  }

  std::unique_ptr<FlipEvaluator> flip_evaluator(std::vector<int> x,
                                                bool incremental) const override {
    if (!incremental) return std::make_unique<FlipEvaluator>(*this, std::move(x));
    return std::make_unique<CutFlip>(*this, std::move(x), -1.0, 0.0);
  }
};

class MisFlip : public FlipEvaluator {
 public:
  MisFlip(const ProblemSpec& spec, std::vector<int> x, double beta)
      : FlipEvaluator(spec, std::move(x)), beta_(beta) {
    const auto& h = spec_.hypergraph();
    ones_.assign(h.num_edges(), 0);
    for (int k = 0; k < h.num_edges(); ++k)
      for (int i : h.edge(k)) ones_[k] += x_[i];
  }

  double flip_delta(int node, int value) override {
    const int old = x_[node];
    if (old == value) return 0.0;
    const int d = value - old;
    double delta = -static_cast<double>(d);  // objective term -sum(x)
    const auto& h = spec_.hypergraph();
    for (int k : h.incidence()[node]) {
      const int before = ones_[k] == 2 ? 1 : 0;
      const int after = ones_[k] + d == 2 ? 1 : 0;
      delta += beta_ * (after - before);
    }
    return delta;
  }

  void commit_flip(int node, int value) override {
    const int old = x_[node];
    if (old == value) return;
    value_ += flip_delta(node, value);
    const int d = value - old;
    for (int k : spec_.hypergraph().incidence()[node]) ones_[k] += d;
    x_[node] = value;
  }

 private:
  double beta_;
  std::vector<int> ones_;
};

class Mis : public ProblemSpec {
 public:
  Mis(Hypergraph h, double beta)
      : ProblemSpec(std::move(h), {0, 1}, {}), beta_(beta) {
    if (!h_.is_graph())
      throw Error(ErrorCode::not_a_graph, "independent set needs size-2 hyperedges");
    lambdas_.assign(static_cast<size_t>(h_.num_edges()), beta_);
  }

  std::string name() const override { return "mis"; }
  std::string metric_name() const override { return "independent_set"; }

  double edge_terms(std::span<const double> p, std::span<double> grad,
                    std::span<const int> edge_ids) const override {
    double v = 0.0;
    for (int k : edge_ids) {
      const auto& e = h_.edge(k);
      v += beta_ * p[e[0]] * p[e[1]];
      grad[e[0]] += beta_ * p[e[1]];
      grad[e[1]] += beta_ * p[e[0]];
    }
    return v;
  }

  double nonedge_terms(std::span<const double> p, std::span<double> grad,
                       std::span<const int> grad_nodes) const override {
    for (int i : grad_nodes) grad[i] -= 1.0;
    return -std::accumulate(p.begin(), p.end(), 0.0);
  }

  DiscreteReport evaluate(std::span<const int> x) const override {
    DiscreteReport rep;
    double size = std::accumulate(x.begin(), x.end(), 0.0);
    for (int k = 0; k < h_.num_edges(); ++k) {
      const auto& e = h_.edge(k);
      if (x[e[0]] == 1 && x[e[1]] == 1) rep.violations.push_back({k, 1.0});
    }
    rep.objective = -size;
    rep.metric = size;
    return rep;
  }

  std::unique_ptr<FlipEvaluator> flip_evaluator(std::vector<int> x,
                                                bool incremental) const override {
    if (!incremental) return std::make_unique<FlipEvaluator>(*this, std::move(x));
    return std::make_unique<MisFlip>(*this, std::move(x), beta_);
  }

 private:
  double beta_;
};

// ---------------------------------------------------------------------------

class Sat3Flip;

class Sat3 : public ProblemSpec {
 public:
  explicit Sat3(CnfFormula cnf)
      : ProblemSpec(checked_hypergraph(cnf), {0, 1}, {}), cnf_(std::move(cnf)) {
    lambdas_.assign(cnf_.clauses.size(), 1.0);
  }

  static Hypergraph checked_hypergraph(const CnfFormula& cnf) {
    for (size_t k = 0; k < cnf.clauses.size(); ++k)
      if (cnf.clauses[k].empty())
        throw Error(ErrorCode::empty_clause, "clause " + std::to_string(k));
    return cnf.constraint_hypergraph();
  }

  std::string name() const override { return "sat3"; }
  std::string metric_name() const override { return "unsat_clauses"; }
  const CnfFormula& cnf() const { return cnf_; }

  // Clause-unsatisfaction relaxation: c_k = prod over literals of (1 - s),
  // s = p for a positive literal and 1-p for a negative one.
  double edge_terms(std::span<const double> p, std::span<double> grad,
                    std::span<const int> edge_ids) const override {
    double v = 0.0;
    std::vector<double> pre;
    for (int k : edge_ids) {
      const auto& clause = cnf_.clauses[k];
      const int m = static_cast<int>(clause.size());
      pre.assign(static_cast<size_t>(m + 1), 1.0);
      for (int a = 0; a < m; ++a) {
        const auto& lit = clause[a];
        const double miss = lit.positive ? 1.0 - p[lit.var] : p[lit.var];
        pre[a + 1] = pre[a] * miss;
      }
      v += lambdas_[k] * pre[m];
      double suf = 1.0;
      for (int a = m - 1; a >= 0; --a) {
        const auto& lit = clause[a];
        const double dmiss = lit.positive ? -1.0 : 1.0;
        grad[lit.var] += lambdas_[k] * pre[a] * suf * dmiss;
        suf *= lit.positive ? 1.0 - p[lit.var] : p[lit.var];
      }
    }
    return v;
  }

  DiscreteReport evaluate(std::span<const int> x) const override {
    DiscreteReport rep;
    for (size_t k = 0; k < cnf_.clauses.size(); ++k) {
      bool satisfied = false;
      for (const auto& lit : cnf_.clauses[k])
        if ((x[lit.var] == 1) == lit.positive) {
          satisfied = true;
          break;
        }
      if (!satisfied) rep.violations.push_back({static_cast<int>(k), 1.0});
    }
    rep.objective = 0.0;
    rep.metric = static_cast<double>(rep.violations.size());
    return rep;
  }

  std::unique_ptr<FlipEvaluator> flip_evaluator(std::vector<int> x,
                                                bool incremental) const override;

 private:
  CnfFormula cnf_;
};

class Sat3Flip : public FlipEvaluator {
 public:
  Sat3Flip(const Sat3& spec, std::vector<int> x)
      : FlipEvaluator(spec, std::move(x)) {
    const auto& cnf = spec.cnf();
    sat_count_.assign(cnf.clauses.size(), 0);
    occurrences_.assign(static_cast<size_t>(cnf.n_vars), {});
    for (size_t k = 0; k < cnf.clauses.size(); ++k) {
      for (const auto& lit : cnf.clauses[k]) {
        if ((x_[lit.var] == 1) == lit.positive) ++sat_count_[k];
        auto& occ = occurrences_[lit.var];
        auto it = std::find_if(occ.begin(), occ.end(),
                               [&](const Occ& o) { return o.clause == static_cast<int>(k); });
        if (it == occ.end()) {
          occ.push_back({static_cast<int>(k), lit.positive ? 1 : 0,
                         lit.positive ? 0 : 1});
        } else {
          lit.positive ? ++it->n_pos : ++it->n_neg;
        }
      }
    }
  }

  double flip_delta(int node, int value) override {
    if (x_[node] == value) return 0.0;
    double delta = 0.0;
    for (const auto& o : occurrences_[node]) {
      const int before_true = x_[node] == 1 ? o.n_pos : o.n_neg;
      const int after_true = value == 1 ? o.n_pos : o.n_neg;
      const int sat_before = sat_count_[o.clause] > 0 ? 1 : 0;
      const int sat_after = sat_count_[o.clause] - before_true + after_true > 0 ? 1 : 0;
      delta += static_cast<double>(sat_before - sat_after);  // unsat count change
    }
    return delta;
  }

  void commit_flip(int node, int value) override {
    if (x_[node] == value) return;
    value_ += flip_delta(node, value);
    for (const auto& o : occurrences_[node]) {
      const int before_true = x_[node] == 1 ? o.n_pos : o.n_neg;
      const int after_true = value == 1 ? o.n_pos : o.n_neg;
      sat_count_[o.clause] += after_true - before_true;
    }
    x_[node] = value;
  }

 private:
  struct Occ {
    int clause, n_pos, n_neg;
  };
  std::vector<int> sat_count_;
  std::vector<std::vector<Occ>> occurrences_;
};

std::unique_ptr<FlipEvaluator> Sat3::flip_evaluator(std::vector<int> x,
                                                    bool incremental) const {
  if (!incremental) return std::make_unique<FlipEvaluator>(*this, std::move(x));
  return std::make_unique<Sat3Flip>(*this, std::move(x));
}

// ---------------------------------------------------------------------------

class ResourceAllocation;

class ResourceFlip : public FlipEvaluator {
 public:
  ResourceFlip(const ProblemSpec& spec, std::vector<int> x,
               std::vector<double> bounds, std::vector<int> kinds)
      : FlipEvaluator(spec, std::move(x)), bounds_(std::move(bounds)),
        kinds_(std::move(kinds)) {
    const auto& h = spec_.hypergraph();
    sums_.assign(h.num_edges(), 0);
    for (int k = 0; k < h.num_edges(); ++k)
      for (int i : h.edge(k)) sums_[k] += x_[i];
  }

  double hinge(int k, double sum) const {
    // kind 0 (task): max(0, req - sum); kind 1 (agent): max(0, sum - budget)
    const double c = kinds_[k] == 0 ? bounds_[k] - sum : sum - bounds_[k];
    return c > 0.0 ? c : 0.0;
  }

  double flip_delta(int node, int value) override {
    if (x_[node] == value) return 0.0;
    const int d = value - x_[node];
    double delta = 0.0;
    for (int k : spec_.hypergraph().incidence()[node])
      delta += hinge(k, sums_[k] + d) - hinge(k, sums_[k]);
    return delta;
  }

  void commit_flip(int node, int value) override {
    if (x_[node] == value) return;
    value_ += flip_delta(node, value);
    const int d = value - x_[node];
    for (int k : spec_.hypergraph().incidence()[node]) sums_[k] += d;
    x_[node] = value;
  }

 private:
  std::vector<double> bounds_;
  std::vector<int> kinds_;
  std::vector<int> sums_;
};

class ResourceAllocation : public ProblemSpec {
 public:
  ResourceAllocation(Hypergraph constraint_h, std::vector<double> bounds,
                     std::vector<int> kinds, std::vector<IncidencePair> pairs)
      : ProblemSpec(std::move(constraint_h), {0, 1},
                    std::vector<double>(bounds.size(), 1.0)),
        bounds_(std::move(bounds)), kinds_(std::move(kinds)),
        pairs_(std::move(pairs)) {}

  std::string name() const override { return "resource-allocation"; }
  std::string metric_name() const override { return "violated_constraints"; }
  const std::vector<IncidencePair>& pairs() const { return pairs_; }

  double edge_terms(std::span<const double> p, std::span<double> grad,
                    std::span<const int> edge_ids) const override {
    double v = 0.0;
    for (int k : edge_ids) {
      double sum = 0.0;
      for (int i : h_.edge(k)) sum += p[i];
      const double c = kinds_[k] == 0 ? bounds_[k] - sum : sum - bounds_[k];
      if (c > 0.0) {
        v += lambdas_[k] * c;
        const double g = kinds_[k] == 0 ? -lambdas_[k] : lambdas_[k];
        for (int i : h_.edge(k)) grad[i] += g;
      }
    }
    return v;
  }

  DiscreteReport evaluate(std::span<const int> x) const override {
    DiscreteReport rep;
    double total = 0.0;
    for (int k = 0; k < h_.num_edges(); ++k) {
      double sum = 0.0;
      for (int i : h_.edge(k)) sum += x[i];
      const double c = kinds_[k] == 0 ? bounds_[k] - sum : sum - bounds_[k];
      if (c > 0.0) {
        rep.violations.push_back({k, c});
        total += c;
      }
    }
    rep.objective = 0.0;
    rep.metric = static_cast<double>(rep.violations.size());
    rep.extras = {{"total_violation", total}};
    return rep;
  }

  std::unique_ptr<FlipEvaluator> flip_evaluator(std::vector<int> x,
                                                bool incremental) const override {
    if (!incremental) return std::make_unique<FlipEvaluator>(*this, std::move(x));
    return std::make_unique<ResourceFlip>(*this, std::move(x), bounds_, kinds_);
  }

 private:
  std::vector<double> bounds_;
  std::vector<int> kinds_;  // 0 = task minimum, 1 = agent budget
  std::vector<IncidencePair> pairs_;
};

}  // namespace

ProblemPtr hypergraph_maxcut(Hypergraph h) {
  return std::make_shared<HypergraphMaxcut>(std::move(h));
}

ProblemPtr hypergraph_mincut(Hypergraph h, double balance_weight) {
  return std::make_shared<HypergraphMincut>(std::move(h), balance_weight);
}

ProblemPtr graph_maxcut(Hypergraph h) {
  return std::make_shared<GraphMaxcut>(std::move(h));
}

ProblemPtr mis(Hypergraph h, double beta) {
  return std::make_shared<Mis>(std::move(h), beta);
}

ProblemPtr sat3(CnfFormula cnf) { return std::make_shared<Sat3>(std::move(cnf)); }

ProblemPtr resource_allocation(const Hypergraph& base, int surplus) {
  if (surplus < 0) throw Error(ErrorCode::invalid_argument, "negative surplus");
  // One binary variable per (agent, task) incidence pair.
  std::vector<IncidencePair> pairs;
  std::vector<std::vector<int>> agent_vars(static_cast<size_t>(base.num_nodes()));
  std::vector<std::vector<int>> edges;
  std::vector<double> bounds;
  std::vector<int> kinds;
  for (int t = 0; t < base.num_edges(); ++t) {
    std::vector<int> task_vars;
    for (int a : base.edge(t)) {
      const int var = static_cast<int>(pairs.size());
      pairs.push_back({a, t});
      agent_vars[a].push_back(var);
      task_vars.push_back(var);
    }
    edges.push_back(std::move(task_vars));  // requires |task| assigned pairs
    bounds.push_back(static_cast<double>(base.edge(t).size()));
    kinds.push_back(0);
  }
  for (int a = 0; a < base.num_nodes(); ++a) {
    if (agent_vars[a].empty()) continue;  // isolated agent: no constraint
    edges.push_back(agent_vars[a]);
    bounds.push_back(static_cast<double>(base.node_degrees()[a] + surplus));
    kinds.push_back(1);
  }
  auto h = Hypergraph::build(static_cast<int>(pairs.size()), std::move(edges));
  return std::make_shared<ResourceAllocation>(std::move(h), std::move(bounds),
                                              std::move(kinds), std::move(pairs));
}

const std::vector<IncidencePair>& resource_allocation_pairs(const ProblemSpec& spec) {
  const auto* ra = dynamic_cast<const ResourceAllocation*>(&spec);
  if (!ra) throw Error(ErrorCode::invalid_argument, "not a resource-allocation spec");
  return ra->pairs();
}

}  // namespace hypop
