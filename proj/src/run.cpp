#include "hypop/run.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hypop/util.hpp"

namespace hypop {

using nlohmann::json;

std::string to_string(SolverKind s) {
  switch (s) {
    case SolverKind::hypop: return "hypop";
    case SolverKind::sa: return "sa";
    case SolverKind::adam: return "adam";
    case SolverKind::bipartite: return "bipartite";
  }
  return "?";
}

std::string to_string(ProblemKind p) {
  switch (p) {
    case ProblemKind::hypergraph_maxcut: return "hypergraph-maxcut";
    case ProblemKind::hypergraph_mincut: return "hypergraph-mincut";
    case ProblemKind::graph_maxcut: return "graph-maxcut";
    case ProblemKind::mis: return "mis";
    case ProblemKind::sat3: return "sat3";
    case ProblemKind::resource_allocation: return "resource-allocation";
  }
  return "?";
}

SolverKind parse_solver(const std::string& s) {
  if (s == "hypop") return SolverKind::hypop;
  if (s == "sa") return SolverKind::sa;
  if (s == "adam") return SolverKind::adam;
  if (s == "bipartite") return SolverKind::bipartite;
  throw Error(ErrorCode::invalid_argument, "unknown solver '" + s + "'");
}

ProblemKind parse_problem(const std::string& s) {
  if (s == "hypergraph-maxcut") return ProblemKind::hypergraph_maxcut;
  if (s == "hypergraph-mincut") return ProblemKind::hypergraph_mincut;
  if (s == "graph-maxcut") return ProblemKind::graph_maxcut;
  if (s == "mis") return ProblemKind::mis;
  if (s == "sat3") return ProblemKind::sat3;
  if (s == "resource-allocation") return ProblemKind::resource_allocation;
  throw Error(ErrorCode::invalid_argument, "unknown problem '" + s + "'");
}

std::string digest_bytes(const void* data, std::size_t len) {
  // FNV-1a 64
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string bytes = ss.str();
  return digest_bytes(bytes.data(), bytes.size());
}

std::string RunRecord::to_json() const {
  json j;
  j["record_id"] = record_id;
  j["problem"] = problem;
  j["instance"] = instance_path;
  j["digest"] = instance_digest;
  j["solver"] = solver;
  j["n"] = n_nodes;
  j["k"] = n_edges;
  j["seed"] = seed;
  j["epochs"] = epochs;
  j["epochs_run"] = epochs_run;
  j["lr"] = lr;
  j["restarts"] = restarts;
  j["sweeps"] = sweeps;
  j["workers"] = workers;
  j["dist_mode"] = dist_mode;
  j["objective"] = objective;
  j["penalized"] = penalized;
  j["metric"] = metric;
  j["metric_name"] = metric_name;
  j["feasible"] = feasible;
  j["violations"] = violation_count;
  j["train_s"] = train_s;
  j["map_s"] = map_s;
  j["total_s"] = total_s;
  return j.dump();
}

ProblemPtr load_problem(const SolveOptions& opt) {
  switch (opt.problem) {
    case ProblemKind::hypergraph_maxcut:
      return hypergraph_maxcut(load_hyperedge_list(opt.input_path));
    case ProblemKind::hypergraph_mincut:
      return hypergraph_mincut(load_hyperedge_list(opt.input_path), opt.mincut_gamma);
    case ProblemKind::graph_maxcut:
      return graph_maxcut(load_gset(opt.input_path));
    case ProblemKind::mis: {
      // Accept either Gset-style or hyperedge-list graphs.
      try {
        return mis(load_gset(opt.input_path), opt.mis_beta);
      } catch (const Error&) {
        return mis(load_hyperedge_list(opt.input_path), opt.mis_beta);
      }
    }
    case ProblemKind::sat3:
      return sat3(load_dimacs_cnf(opt.input_path));
    case ProblemKind::resource_allocation:
      return resource_allocation(load_hyperedge_list(opt.input_path), opt.ra_surplus);
  }
  throw Error(ErrorCode::invalid_argument, "unhandled problem kind");
}

SolveOutcome run_solve(const SolveOptions& opt) {
  Stopwatch total;
  ProblemPtr spec = load_problem(opt);

  SolveResult result;
  if (!opt.dist_mode.empty() && opt.workers > 1) {
    PipelineConfig cfg = opt.pipeline;
    Stopwatch train_watch;
    TrainResult tr;
    if (opt.dist_mode == "parallel") {
      tr = train_parallel(*spec, cfg, opt.workers, cfg.train.seed);
    } else if (opt.dist_mode == "distributed") {
      Partition part = make_partition(spec->hypergraph(), opt.workers,
                                      opt.partition_scheme, cfg.train.seed);
      tr = train_distributed(part, *spec, cfg, cfg.train.seed);
    } else {
      throw Error(ErrorCode::invalid_argument, "unknown dist mode '" + opt.dist_mode + "'");
    }
    result.report = std::move(tr.report);
    result.p = std::move(tr.p);
    result.train_seconds = train_watch.seconds();
    Stopwatch map_watch;
    result.assignment = map_with_restarts(result.p, *spec, cfg.sa);
    result.map_seconds = map_watch.seconds();
  } else {
    switch (opt.solver) {
      case SolverKind::hypop: {
        if (!opt.checkpoint_in.empty()) {
          LoadedModel loaded = load_model(opt.checkpoint_in);
          PipelineConfig cfg = opt.pipeline;
          cfg.variant = loaded.variant;
          result = transfer_pipeline(loaded.model, *spec, cfg);
          if (!opt.checkpoint_out.empty())
            save_model(loaded.model, cfg.variant, opt.checkpoint_out);
        } else if (!opt.checkpoint_out.empty()) {
          HyperGnnModel model = HyperGnnModel::init(
              spec->num_nodes(),
              opt.pipeline.feature_width > 0
                  ? opt.pipeline.feature_width
                  : HyperGnnModel::default_feature_width(spec->num_nodes()),
              opt.pipeline.train.seed, spec->domain());
          result = solve_pipeline_with_model(model, *spec, opt.pipeline);
          save_model(model, opt.pipeline.variant, opt.checkpoint_out);
        } else {
          result = solve_pipeline(*spec, opt.pipeline);
        }
        break;
      }
      case SolverKind::sa:
        result = sa_only(*spec, opt.pipeline.sa);
        break;
      case SolverKind::adam:
        result = adam_direct(*spec, opt.pipeline.train, opt.pipeline.sa);
        break;
      case SolverKind::bipartite:
        result = bipartite_gnn(*spec, opt.pipeline);
        break;
    }
  }

  SolveOutcome outcome;
  outcome.assignment = std::move(result.assignment);

  RunRecord& rec = outcome.record;
  rec.problem = to_string(opt.problem);
  rec.instance_path = opt.input_path;
  rec.instance_digest = file_digest(opt.input_path);
  rec.solver = to_string(opt.solver);
  rec.n_nodes = spec->num_nodes();
  rec.n_edges = spec->hypergraph().num_edges();
  rec.seed = opt.pipeline.train.seed;
  rec.epochs = opt.pipeline.train.epochs;
  rec.epochs_run = result.report.epochs_run;
  rec.lr = opt.pipeline.train.lr;
  rec.restarts = opt.pipeline.sa.restarts;
  rec.sweeps = opt.pipeline.sa.sweeps;
  rec.workers = opt.workers;
  rec.dist_mode = opt.dist_mode;
  rec.objective = outcome.assignment.objective;
  rec.penalized = outcome.assignment.penalized;
  rec.metric = outcome.assignment.metric;
  rec.metric_name = spec->metric_name();
  rec.feasible = outcome.assignment.feasible();
  rec.violation_count = static_cast<int>(outcome.assignment.violations.size());
  rec.train_s = result.train_seconds;
  rec.map_s = result.map_seconds;
  rec.total_s = total.seconds();

  // Identity from everything except timings, so identical runs share an id.
  std::ostringstream id;
  id << rec.problem << "|" << rec.instance_digest << "|" << rec.solver << "|"
     << rec.seed << "|" << rec.epochs << "|" << rec.lr << "|" << rec.restarts << "|"
     << rec.sweeps << "|" << rec.workers << "|" << rec.dist_mode;
  const std::string id_str = id.str();
  rec.record_id = digest_bytes(id_str.data(), id_str.size());
  return outcome;
}

void write_outputs(const SolveOutcome& outcome, const SolveOptions& opt) {
  if (opt.records_path.empty()) return;
  namespace fs = std::filesystem;
  const fs::path records(opt.records_path);
  if (records.has_parent_path()) fs::create_directories(records.parent_path());
  std::ofstream out(records, std::ios::app);
  if (!out) throw Error(ErrorCode::io_error, "cannot append to " + opt.records_path);
  out << outcome.record.to_json() << "\n";

  fs::path dir = opt.assignments_dir.empty()
                     ? (records.has_parent_path() ? records.parent_path()
                                                  : fs::path("."))
                           / "assignments"
                     : fs::path(opt.assignments_dir);
  fs::create_directories(dir);
  std::ofstream sidecar(dir / (outcome.record.record_id + ".txt"));
  if (!sidecar) throw Error(ErrorCode::io_error, "cannot write assignment sidecar");
  for (size_t i = 0; i < outcome.assignment.x.size(); ++i)
    sidecar << outcome.assignment.x[i] << (i + 1 == outcome.assignment.x.size() ? "" : " ");
  sidecar << "\n";
}

}  // namespace hypop
