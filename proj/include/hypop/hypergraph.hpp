#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hypop/error.hpp"
#include "hypop/matrix.hpp"

namespace hypop {

// Immutable node/hyperedge incidence structure. Node indices are 0-based;
// file parsers convert from 1-based at the boundary. Hyperedges are stored
// with sorted node ids.
class Hypergraph {
 public:
  Hypergraph() = default;

  // Validates indices, rejects empty hyperedges and duplicate nodes within a
  // hyperedge. Size-1 hyperedges are accepted here; strip_unit_edges() removes
  // them where an operation requires it.
  static Hypergraph build(int n_nodes, std::vector<std::vector<int>> hyperedges,
                          std::vector<double> weights = {});

  int num_nodes() const { return n_nodes_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<std::vector<int>>& edges() const { return edges_; }
  const std::vector<int>& edge(int k) const { return edges_[k]; }
  double weight(int k) const { return weights_[k]; }
  const std::vector<double>& weights() const { return weights_; }

  // Number of hyperedges containing each node.
  const std::vector<int>& node_degrees() const { return degrees_; }
  // Edge ids incident to each node.
  const std::vector<std::vector<int>>& incidence() const { return incidence_; }

  // Copy with all size-1 hyperedges removed.
  Hypergraph strip_unit_edges() const;

  // True when every hyperedge has exactly two nodes.
  bool is_graph() const;

  // Sum of hyperedge sizes.
  std::int64_t total_pins() const;

 private:
  int n_nodes_ = 0;
  std::vector<std::vector<int>> edges_;
  std::vector<double> weights_;
  std::vector<int> degrees_;
  std::vector<std::vector<int>> incidence_;
};

enum class OperatorVariant {
  modified,  // P = D_v^{-1/2} (A De~^{-1} A^T - diag(.)) D_v^{-1/2}, zero diagonal
  standard,  // P = D_v^{-1/2} A De^{-1} A^T D_v^{-1/2}
};

// Symmetric sparse N x N propagation operator in CSR form.
struct PropagationOperator {
  int n = 0;
  OperatorVariant variant = OperatorVariant::modified;
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<double> val;

  int nnz() const { return static_cast<int>(col.size()); }

  // Y = P * X for row-major X (n x f). Y must be preallocated n x f.
  void apply(const Matrix& x, Matrix& y) const;
  // Same, but only rows listed in `rows` of Y are computed (others untouched).
  void apply_rows(const Matrix& x, Matrix& y, std::span<const int> rows) const;

  Matrix dense() const;  // small-n debugging / tests
};

// Eq.-style propagation operator construction. Size-1 hyperedges are stripped
// first; isolated nodes get all-zero rows (0^{-1/2} treated as 0).
PropagationOperator propagation_operator(const Hypergraph& h, OperatorVariant variant);

enum class PartitionScheme {
  block,   // contiguous index blocks
  random,  // contiguous blocks of a seeded random node permutation
};

// Disjoint node sets with per-worker inner (fully contained) and outer
// (crossing) hyperedge id lists.
struct Partition {
  int n_workers = 0;
  int n_nodes = 0;
  int n_edges = 0;
  std::vector<int> owner;                        // node -> worker
  std::vector<std::vector<int>> nodes;           // V^s, sorted
  std::vector<std::vector<int>> inner_edges;     // ids, sorted
  std::vector<std::vector<int>> outer_edges;     // ids, sorted
  std::vector<int> edge_multiplicity;            // #workers touched per edge
};

Partition make_partition(const Hypergraph& h, int n_workers,
                         PartitionScheme scheme = PartitionScheme::random,
                         std::uint64_t seed = 0);

// Keep each hyperedge independently with probability 1 - drop_probability.
Hypergraph sparsify(const Hypergraph& h, double drop_probability, std::uint64_t seed);

// Factor-graph expansion: hyperedge k of size m becomes factor node N+k with
// m two-node edges {i, N+k}.
Hypergraph bipartite_expansion(const Hypergraph& h);

}  // namespace hypop
