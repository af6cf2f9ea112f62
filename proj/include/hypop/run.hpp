#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hypop/distributed.hpp"
#include "hypop/pipeline.hpp"
#include "hypop/problems.hpp"

namespace hypop {

enum class SolverKind { hypop, sa, adam, bipartite };
enum class ProblemKind {
  hypergraph_maxcut,
  hypergraph_mincut,
  graph_maxcut,
  mis,
  sat3,
  resource_allocation,
};

std::string to_string(SolverKind s);
std::string to_string(ProblemKind p);
SolverKind parse_solver(const std::string& s);
ProblemKind parse_problem(const std::string& s);

// One completed solve: configuration echo, instance digest, result and
// timings. Serialized as a single JSON line.
struct RunRecord {
  std::string record_id;
  std::string problem;
  std::string instance_path;
  std::string instance_digest;
  std::string solver;
  int n_nodes = 0;
  int n_edges = 0;
  std::uint64_t seed = 0;
  int epochs = 0;
  int epochs_run = 0;
  double lr = 0.0;
  int restarts = 0;
  int sweeps = 0;
  int workers = 1;
  std::string dist_mode;  // "", "parallel", "distributed"
  double objective = 0.0;
  double penalized = 0.0;
  double metric = 0.0;
  std::string metric_name;
  bool feasible = false;
  int violation_count = 0;
  double train_s = 0.0;
  double map_s = 0.0;
  double total_s = 0.0;

  std::string to_json() const;
};

// FNV-1a 64 of a file's bytes, hex-encoded.
std::string file_digest(const std::string& path);
std::string digest_bytes(const void* data, std::size_t len);

struct SolveOptions {
  ProblemKind problem = ProblemKind::hypergraph_maxcut;
  std::string input_path;
  SolverKind solver = SolverKind::hypop;
  PipelineConfig pipeline;
  double mincut_gamma = -1.0;
  double mis_beta = 2.0;
  int ra_surplus = 0;
  int workers = 1;
  std::string dist_mode;  // "", "parallel", "distributed"
  PartitionScheme partition_scheme = PartitionScheme::random;
  std::string records_path;      // JSONL sink, empty = no file output
  std::string assignments_dir;   // sidecar directory, empty = records dir
  std::string checkpoint_out;    // save trained model here when set
  std::string checkpoint_in;     // transfer from this model when set
};

struct SolveOutcome {
  RunRecord record;
  Assignment assignment;
};

ProblemPtr load_problem(const SolveOptions& opt);
SolveOutcome run_solve(const SolveOptions& opt);

// Append a record line and write the assignment sidecar keyed by record_id.
void write_outputs(const SolveOutcome& outcome, const SolveOptions& opt);

}  // namespace hypop
