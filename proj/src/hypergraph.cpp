#include "hypop/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <unordered_set>

#include "hypop/util.hpp"

namespace hypop {

Hypergraph Hypergraph::build(int n_nodes, std::vector<std::vector<int>> hyperedges,
                             std::vector<double> weights) {
  if (n_nodes < 0)
    throw Error(ErrorCode::invalid_argument, "negative node count");
  if (!weights.empty() && weights.size() != hyperedges.size())
    throw Error(ErrorCode::invalid_argument, "weight count != hyperedge count");

  Hypergraph h;
  h.n_nodes_ = n_nodes;
  h.edges_ = std::move(hyperedges);
  for (size_t k = 0; k < h.edges_.size(); ++k) {
    auto& e = h.edges_[k];
    if (e.empty())
      throw Error(ErrorCode::empty_hyperedge, "hyperedge " + std::to_string(k));
    std::sort(e.begin(), e.end());
    if (e.front() < 0 || e.back() >= n_nodes)
      throw Error(ErrorCode::index_out_of_range,
                  "hyperedge " + std::to_string(k) + " has node outside [0, " +
                      std::to_string(n_nodes) + ")");
    if (std::adjacent_find(e.begin(), e.end()) != e.end())
      throw Error(ErrorCode::duplicate_node_in_edge, "hyperedge " + std::to_string(k));
  }
  h.weights_ = weights.empty() ? std::vector<double>(h.edges_.size(), 1.0)
                               : std::move(weights);
  h.degrees_.assign(n_nodes, 0);
  h.incidence_.assign(n_nodes, {});
  for (size_t k = 0; k < h.edges_.size(); ++k) {
    for (int i : h.edges_[k]) {
      ++h.degrees_[i];
      h.incidence_[i].push_back(static_cast<int>(k));
    }
  }
  return h;
}

Hypergraph Hypergraph::strip_unit_edges() const {
  std::vector<std::vector<int>> kept;
  std::vector<double> w;
  kept.reserve(edges_.size());
  for (size_t k = 0; k < edges_.size(); ++k) {
    if (edges_[k].size() >= 2) {
      kept.push_back(edges_[k]);
      w.push_back(weights_[k]);
    }
  }
  return build(n_nodes_, std::move(kept), std::move(w));
}

bool Hypergraph::is_graph() const {
  return std::all_of(edges_.begin(), edges_.end(),
                     [](const auto& e) { return e.size() == 2; });
}

std::int64_t Hypergraph::total_pins() const {
  std::int64_t s = 0;
  for (const auto& e : edges_) s += static_cast<std::int64_t>(e.size());
  return s;
}

void PropagationOperator::apply(const Matrix& x, Matrix& y) const {
  if (x.rows != n || !y.same_shape(x))
    throw Error(ErrorCode::dimension_mismatch, "operator apply shapes");
  const int f = x.cols;
  for (int i = 0; i < n; ++i) {
    double* yrow = y.row(i);
    std::fill(yrow, yrow + f, 0.0);
    for (int idx = row_ptr[i]; idx < row_ptr[i + 1]; ++idx) {
      const double v = val[idx];
      const double* xrow = x.row(col[idx]);
      for (int c = 0; c < f; ++c) yrow[c] += v * xrow[c];
    }
  }
}

void PropagationOperator::apply_rows(const Matrix& x, Matrix& y,
                                     std::span<const int> rows) const {
  if (x.rows != n || !y.same_shape(x))
    throw Error(ErrorCode::dimension_mismatch, "operator apply shapes");
  const int f = x.cols;
  for (int i : rows) {
    double* yrow = y.row(i);
    std::fill(yrow, yrow + f, 0.0);
    for (int idx = row_ptr[i]; idx < row_ptr[i + 1]; ++idx) {
      const double v = val[idx];
      const double* xrow = x.row(col[idx]);
      for (int c = 0; c < f; ++c) yrow[c] += v * xrow[c];
    }
  }
}

Matrix PropagationOperator::dense() const {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int idx = row_ptr[i]; idx < row_ptr[i + 1]; ++idx)
      m(i, col[idx]) = val[idx];
  return m;
}

namespace {

struct Triplet {
  int r, c;
  double v;
};

PropagationOperator compress(int n, OperatorVariant variant,
                             std::vector<Triplet>& triplets) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.r != b.r ? a.r < b.r : a.c < b.c;
  });
  PropagationOperator op;
  op.n = n;
  op.variant = variant;
  op.row_ptr.assign(n + 1, 0);
  size_t i = 0;
  while (i < triplets.size()) {
    size_t j = i;
    double sum = 0.0;
    while (j < triplets.size() && triplets[j].r == triplets[i].r &&
           triplets[j].c == triplets[i].c) {
      sum += triplets[j].v;
      ++j;
    }
    op.col.push_back(triplets[i].c);
    op.val.push_back(sum);
    ++op.row_ptr[triplets[i].r + 1];
    i = j;
  }
  for (int r = 0; r < n; ++r) op.row_ptr[r + 1] += op.row_ptr[r];
  return op;
}

}  // namespace

PropagationOperator propagation_operator(const Hypergraph& h_in, OperatorVariant variant) {
  const Hypergraph h = h_in.strip_unit_edges();
  const int n = h.num_nodes();
  const auto& deg = h.node_degrees();

  std::vector<double> inv_sqrt_deg(n, 0.0);
  for (int i = 0; i < n; ++i)
    if (deg[i] > 0) inv_sqrt_deg[i] = 1.0 / std::sqrt(static_cast<double>(deg[i]));

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<size_t>(h.total_pins()) * 4);
  for (const auto& e : h.edges()) {
    const int m = static_cast<int>(e.size());
    const double edge_scale = variant == OperatorVariant::modified
                                  ? 1.0 / static_cast<double>(m - 1)  // De~ = De - I
                                  : 1.0 / static_cast<double>(m);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        if (variant == OperatorVariant::modified && a == b) continue;
        const double v = edge_scale * inv_sqrt_deg[e[a]] * inv_sqrt_deg[e[b]];
        triplets.push_back({e[a], e[b], v});
      }
    }
  }
  return compress(n, variant, triplets);
}

Partition make_partition(const Hypergraph& h, int n_workers, PartitionScheme scheme,
                         std::uint64_t seed) {
  const int n = h.num_nodes();
  if (n_workers < 1 || n_workers > n)
    throw Error(ErrorCode::too_many_workers,
                "workers=" + std::to_string(n_workers) + " nodes=" + std::to_string(n));

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (scheme == PartitionScheme::random) {
    auto rng = make_rng(mix_seed(seed, 0x7061727469ULL));
    std::shuffle(order.begin(), order.end(), rng);
  }

  Partition part;
  part.n_workers = n_workers;
  part.n_nodes = n;
  part.n_edges = h.num_edges();
  part.owner.assign(n, 0);
  part.nodes.assign(n_workers, {});
  part.inner_edges.assign(n_workers, {});
  part.outer_edges.assign(n_workers, {});
  part.edge_multiplicity.assign(h.num_edges(), 0);

  // Contiguous blocks over `order`, sizes differing by at most one.
  const int base = n / n_workers, extra = n % n_workers;
  int pos = 0;
  for (int s = 0; s < n_workers; ++s) {
    const int count = base + (s < extra ? 1 : 0);
    for (int i = 0; i < count; ++i) {
      part.owner[order[pos]] = s;
      part.nodes[s].push_back(order[pos]);
      ++pos;
    }
    std::sort(part.nodes[s].begin(), part.nodes[s].end());
  }

  std::vector<int> touched;
  for (int k = 0; k < h.num_edges(); ++k) {
    touched.clear();
    for (int i : h.edge(k)) touched.push_back(part.owner[i]);
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    part.edge_multiplicity[k] = static_cast<int>(touched.size());
    if (touched.size() == 1) {
      part.inner_edges[touched[0]].push_back(k);
    } else {
      for (int s : touched) part.outer_edges[s].push_back(k);
    }
  }
  return part;
}

Hypergraph sparsify(const Hypergraph& h, double drop_probability, std::uint64_t seed) {
  if (drop_probability < 0.0 || drop_probability > 1.0)
    throw Error(ErrorCode::invalid_argument, "drop probability outside [0, 1]");
  auto rng = make_rng(mix_seed(seed, 0x73706172ULL));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::vector<int>> kept;
  std::vector<double> w;
  for (int k = 0; k < h.num_edges(); ++k) {
    const bool drop = unif(rng) < drop_probability;
    if (!drop) {
      kept.push_back(h.edge(k));
      w.push_back(h.weight(k));
    }
  }
  return Hypergraph::build(h.num_nodes(), std::move(kept), std::move(w));
}

Hypergraph bipartite_expansion(const Hypergraph& h) {
  const int n = h.num_nodes();
  std::vector<std::vector<int>> edges;
  edges.reserve(static_cast<size_t>(h.total_pins()));
  for (int k = 0; k < h.num_edges(); ++k)
    for (int i : h.edge(k)) edges.push_back({i, n + k});
  return Hypergraph::build(n + h.num_edges(), std::move(edges));
}

}  // namespace hypop
