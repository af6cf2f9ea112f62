#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hypop/hypergraph.hpp"
#include "hypop/model.hpp"
#include "hypop/pipeline.hpp"

namespace hypop {

// One sweep cell: graph family/density descriptor, solver, MIS ratio, runtime.
struct SweepCell {
  std::string family;   // "er", "regular", "powerlaw"
  int n = 0;
  double p = 0.0;       // ER density (0 when not applicable)
  int d = 0;            // regular degree (0 when not applicable)
  double ps = 0.0;      // sparsification drop probability
  double lr = 0.0;
  std::uint64_t seed = 0;
  std::string solver;   // "gnn-only" or "hypop"
  double ratio = 0.0;   // |independent set| / N
  double runtime_s = 0.0;
};

struct SweepResult {
  std::vector<SweepCell> cells;

  void write_jsonl(std::ostream& os) const;
  void write_csv(std::ostream& os) const;

  // Mean ratio over seeds for one (family, solver, p[, ps]) cell group.
  double mean_ratio(const std::string& solver, double p, double ps = 0.0) const;
};

struct SweepOptions {
  TrainConfig train;
  SaConfig sa;
  double mis_beta = 2.0;
  int threads = 0;  // 0: default budget
};

// Threshold-at-0.5 mapping with greedy feasibility repair: the GNN-only
// (PI-GNN style) discrete readout. Returns the 0/1 indicator vector; the
// result is always independent in `g`.
std::vector<int> threshold_mis(const Hypergraph& g, std::span<const double> p);

// MIS over ER G(n, p) grids: per cell, GNN-only ratio and full-pipeline ratio.
SweepResult phase_transition_sweep(std::span<const int> ns, std::span<const double> ps,
                                   std::span<const double> lrs,
                                   std::span<const std::uint64_t> seeds,
                                   const SweepOptions& opt);

// Powerlaw graphs plus ER and regular graphs matched to their edge density
// within 5%.
SweepResult family_comparison(int n, std::span<const double> exponents,
                              std::span<const std::uint64_t> seeds,
                              const SweepOptions& opt);

// Max pairwise embedding distance after the four tracked operations.
std::array<double, 4> oversmoothing_trace(const HyperGnnModel& model,
                                          const PropagationOperator& op);

// GNN-only MIS ratio against edge-drop probability on one dense instance,
// with the full-pipeline ratio on the unsparsified graph as reference cells
// (solver "hypop", ps = 0). Sets are checked against the original graph.
SweepResult sparsification_study(const Hypergraph& dense,
                                 std::span<const double> ps_grid,
                                 std::span<const std::uint64_t> seeds,
                                 const SweepOptions& opt);

// Smallest grid density whose mean GNN-only ratio drops to <= `drop_fraction`
// of the mean ratio at the sparsest grid point. Returns 0 when no drop occurs.
double detect_drop_threshold(const SweepResult& sweep, double drop_fraction = 0.2);

}  // namespace hypop
