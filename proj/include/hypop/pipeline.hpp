#pragma once

#include "hypop/mapping.hpp"
#include "hypop/model.hpp"
#include "hypop/problems.hpp"

namespace hypop {

struct PipelineConfig {
  TrainConfig train;
  SaConfig sa;
  OperatorVariant variant = OperatorVariant::modified;
  int feature_width = 0;  // 0: ceil(sqrt(N)) rounded to even
};

struct SolveResult {
  Assignment assignment;
  TrainReport report;
  std::vector<double> p;
  double train_seconds = 0.0;
  double map_seconds = 0.0;
};

// Train the model on the problem's constraint hypergraph, then map the
// continuous outputs with sampling + annealing. epochs == 0 skips the model
// and anneals from uniform random samples.
SolveResult solve_pipeline(const ProblemSpec& spec, const PipelineConfig& cfg);

// Same, but keeps a caller-provided model (used for transfer and checkpoints).
SolveResult solve_pipeline_with_model(HyperGnnModel& model, const ProblemSpec& spec,
                                      const PipelineConfig& cfg);

// Baseline: annealing from uniform random initial assignments.
SolveResult sa_only(const ProblemSpec& spec, const SaConfig& sa);

// Baseline: Adam directly on logit-parameterized continuous variables,
// followed by the standard mapping stage.
SolveResult adam_direct(const ProblemSpec& spec, const TrainConfig& train,
                        const SaConfig& sa);

// Baseline: the full pipeline run on the factor-graph expansion; factor-node
// outputs are dropped at mapping time.
SolveResult bipartite_gnn(const ProblemSpec& spec, const PipelineConfig& cfg);

// Transfer learning: re-optimize only the embedding of `pretrained` for the
// given problem, then map.
SolveResult transfer_pipeline(HyperGnnModel& pretrained, const ProblemSpec& spec,
                              const PipelineConfig& cfg);

}  // namespace hypop
