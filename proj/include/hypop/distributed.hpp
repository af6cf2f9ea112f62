#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hypop/model.hpp"
#include "hypop/pipeline.hpp"
#include "hypop/problems.hpp"

namespace hypop {

// One worker's gradient contribution plus the forward outputs it publishes for
// boundary exchange. Also the wire format for a process-per-worker deployment.
struct GradMessage {
  static constexpr std::uint32_t kVersion = 1;

  int epoch = 0;
  int worker = 0;
  double loss_value = 0.0;
  std::vector<double> grad_sigma;  // row-major N x f
  std::vector<double> grad_w0;
  std::vector<double> grad_w1;
  std::vector<int> published_nodes;     // node ids whose outputs follow
  std::vector<double> published_values;

  std::vector<std::uint8_t> encode() const;
  static GradMessage decode(std::span<const std::uint8_t> bytes);
};

// Elementwise sum in ascending worker order. Requires exactly n_workers
// distinct contributions for one epoch; raises missing_contribution otherwise.
ModelGradients aggregate(std::vector<const GradMessage*> contributions,
                         int n_workers, const HyperGnnModel& shape);

// Per-epoch seeded hyperedge shuffle split into S slices; every worker scores
// its slice against the full propagation operator, gradients are summed and a
// single Adam step is broadcast. S = 1 reproduces single-worker training
// bitwise.
TrainResult train_parallel(const ProblemSpec& spec, const PipelineConfig& cfg,
                           int n_workers, std::uint64_t seed);

// Partitioned training: each worker propagates only over its inner hyperedges
// and scores inner + outer hyperedges, reading one-epoch-stale boundary
// outputs for remote nodes. Gradients for non-owned nodes are dropped before
// aggregation.
TrainResult train_distributed(const Partition& partition, const ProblemSpec& spec,
                              const PipelineConfig& cfg, std::uint64_t seed);

// Hook for gradient-exactness checks: aggregated slice gradient for one epoch
// without taking the optimizer step.
ModelGradients parallel_epoch_gradient(const HyperGnnModel& model,
                                       const PropagationOperator& op,
                                       const ProblemSpec& spec, int n_workers,
                                       std::span<const int> shuffled_edges);

}  // namespace hypop
