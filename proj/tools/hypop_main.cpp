// Command-line harness: solve single instances, run benchmark suites, generate
// synthetic instances, drive transfer learning and multi-worker training, and
// emit analysis sweeps.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hypop/analysis.hpp"
#include "hypop/generators.hpp"
#include "hypop/run.hpp"
#include "hypop/util.hpp"

namespace {

using namespace hypop;
using nlohmann::json;

struct CommonFlags {
  std::string problem = "hypergraph-maxcut";
  std::string input;
  std::string solver = "hypop";
  std::uint64_t seed = 0;
  int epochs = 2000;
  double lr = 1e-4;
  int patience = 100;
  double tol = 1e-4;
  int restarts = 3;
  int sweeps = 200;
  double t0 = 0.0;
  double cooling = 0.99;
  bool naive_sa = false;
  int feature_width = 0;
  std::string variant = "modified";
  double mis_beta = 2.0;
  double mincut_gamma = -1.0;
  int surplus = 0;
  std::string records = "records.jsonl";
  std::string assignments_dir;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f, bool with_solver = true) {
  cmd->add_option("--problem", f.problem,
                  "hypergraph-maxcut|hypergraph-mincut|graph-maxcut|mis|sat3|"
                  "resource-allocation");
  cmd->add_option("--input", f.input, "instance file")->required();
  if (with_solver)
    cmd->add_option("--solver", f.solver, "hypop|sa|adam|bipartite");
  cmd->add_option("--seed", f.seed, "rng seed");
  cmd->add_option("--epochs", f.epochs, "training epochs (0 = annealing only)");
  cmd->add_option("--lr", f.lr, "learning rate");
  cmd->add_option("--patience", f.patience, "early-stop patience (0 disables)");
  cmd->add_option("--tol", f.tol, "early-stop relative tolerance");
  cmd->add_option("--restarts", f.restarts, "annealing restarts");
  cmd->add_option("--sweeps", f.sweeps, "annealing sweeps per restart");
  cmd->add_option("--t0", f.t0, "initial temperature (0 = auto)");
  cmd->add_option("--cooling", f.cooling, "cooling factor per sweep");
  cmd->add_flag("--naive-sa", f.naive_sa, "full re-evaluation per flip");
  cmd->add_option("--feature-width", f.feature_width, "embedding width (0 = sqrt(N))");
  cmd->add_option("--variant", f.variant, "propagation operator: modified|standard");
  cmd->add_option("--mis-beta", f.mis_beta, "independent-set penalty weight");
  cmd->add_option("--mincut-gamma", f.mincut_gamma, "mincut balance weight (<0 = auto)");
  cmd->add_option("--surplus", f.surplus, "resource-allocation budget surplus");
  cmd->add_option("--records", f.records, "JSONL record sink ('' disables)");
  cmd->add_option("--assignments-dir", f.assignments_dir, "assignment sidecar directory");
  cmd->set_config("--config", "", "flat key=value config file");
}

SolveOptions to_options(const CommonFlags& f) {
  SolveOptions opt;
  opt.problem = parse_problem(f.problem);
  opt.input_path = f.input;
  opt.solver = parse_solver(f.solver);
  opt.pipeline.train.epochs = f.epochs;
  opt.pipeline.train.lr = f.lr;
  opt.pipeline.train.patience = f.patience;
  opt.pipeline.train.early_stop_tol = f.tol;
  opt.pipeline.train.seed = f.seed;
  opt.pipeline.sa.restarts = f.restarts;
  opt.pipeline.sa.sweeps = f.sweeps;
  opt.pipeline.sa.t0 = f.t0;
  opt.pipeline.sa.cooling = f.cooling;
  opt.pipeline.sa.incremental = !f.naive_sa;
  opt.pipeline.sa.seed = mix_seed(f.seed, 0x6d6170ULL);
  opt.pipeline.feature_width = f.feature_width;
  if (f.variant == "standard")
    opt.pipeline.variant = OperatorVariant::standard;
  else if (f.variant != "modified")
    throw Error(ErrorCode::invalid_argument, "unknown variant '" + f.variant + "'");
  opt.mis_beta = f.mis_beta;
  opt.mincut_gamma = f.mincut_gamma;
  opt.ra_surplus = f.surplus;
  opt.records_path = f.records;
  opt.assignments_dir = f.assignments_dir;
  return opt;
}

void print_outcome(const SolveOutcome& outcome) {
  const RunRecord& r = outcome.record;
  std::cout << r.to_json() << "\n";
  std::cerr << r.problem << " " << r.solver << " n=" << r.n_nodes << " k=" << r.n_edges
            << " " << r.metric_name << "=" << r.metric
            << (r.feasible ? " feasible" : " infeasible (" +
                                               std::to_string(r.violation_count) +
                                               " violations)")
            << " total=" << r.total_s << "s\n";
}

int cmd_solve(const CommonFlags& flags, const std::string& save_model_path,
              const std::string& load_model_path) {
  SolveOptions opt = to_options(flags);
  opt.checkpoint_out = save_model_path;
  opt.checkpoint_in = load_model_path;
  SolveOutcome outcome = run_solve(opt);
  write_outputs(outcome, opt);
  print_outcome(outcome);
  return 0;
}

int cmd_distributed(const CommonFlags& flags, int workers, const std::string& mode,
                    const std::string& partition) {
  SolveOptions opt = to_options(flags);
  opt.workers = workers;
  opt.dist_mode = mode;
  if (partition == "block")
    opt.partition_scheme = PartitionScheme::block;
  else if (partition == "random")
    opt.partition_scheme = PartitionScheme::random;
  else
    throw Error(ErrorCode::invalid_argument, "unknown partition scheme '" + partition + "'");
  SolveOutcome outcome = run_solve(opt);
  write_outputs(outcome, opt);
  print_outcome(outcome);
  return 0;
}

// --- gen -----------------------------------------------------------------

struct GenFlags {
  std::string kind = "hypergraph";
  std::string out;
  int n = 100;
  int k = 150;
  int maxdeg = 10;
  int size_cap = 6;
  double p = 0.1;
  int d = 3;
  int m = 0;
  int vars = 20;
  int clauses = 91;
  bool satisfiable = false;
  std::uint64_t seed = 0;
};

int cmd_gen(const GenFlags& g) {
  if (g.kind == "hypergraph") {
    save_hyperedge_list(gen_random_hypergraph(g.n, g.k, g.maxdeg, g.seed, g.size_cap),
                        g.out);
  } else if (g.kind == "er") {
    save_gset(gen_er_graph(g.n, g.p, g.seed), g.out);
  } else if (g.kind == "regular") {
    save_gset(gen_regular_graph(g.n, g.d, g.seed), g.out);
  } else if (g.kind == "gnm") {
    save_gset(gen_gnm_graph(g.n, g.m, g.seed), g.out);
  } else if (g.kind == "sat") {
    save_dimacs_cnf(g.satisfiable ? gen_satisfiable_3sat(g.vars, g.clauses, g.seed)
                                  : gen_random_3sat(g.vars, g.clauses, g.seed),
                    g.out);
  } else {
    throw Error(ErrorCode::invalid_argument, "unknown generator kind '" + g.kind + "'");
  }
  std::cerr << "wrote " << g.out << "\n";
  return 0;
}

// --- bench ---------------------------------------------------------------

struct BenchStats {
  std::string name;
  std::string solver;
  int n = 0;
  double metric_mean = 0, metric_std = 0;
  double time_mean = 0, time_std = 0;
  int reps = 0;
};

int cmd_bench(const std::string& manifest_path, const std::string& csv_out, bool fit) {
  std::ifstream in(manifest_path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + manifest_path);
  json manifest = json::parse(in);

  const int reps = manifest.value("repetitions", 1);
  const std::uint64_t base_seed = manifest.value("base_seed", 0ULL);
  std::vector<BenchStats> table;

  for (const auto& run : manifest.value("runs", json::array())) {
    CommonFlags f;
    f.problem = run.value("problem", f.problem);
    f.input = run.at("input").get<std::string>();
    f.solver = run.value("solver", f.solver);
    f.epochs = run.value("epochs", f.epochs);
    f.lr = run.value("lr", f.lr);
    f.restarts = run.value("restarts", f.restarts);
    f.sweeps = run.value("sweeps", f.sweeps);
    f.patience = run.value("patience", f.patience);
    f.feature_width = run.value("feature_width", f.feature_width);
    f.naive_sa = run.value("naive_sa", f.naive_sa);
    f.records = run.value("records", std::string());

    std::vector<double> metrics, times;
    int n_nodes = 0;
    for (int rep = 0; rep < reps; ++rep) {
      f.seed = mix_seed(base_seed, rep);
      SolveOptions opt = to_options(f);
      SolveOutcome outcome = run_solve(opt);
      if (!f.records.empty()) write_outputs(outcome, opt);
      metrics.push_back(outcome.record.metric);
      times.push_back(outcome.record.total_s);
      n_nodes = outcome.record.n_nodes;
    }
    auto mean_std = [](const std::vector<double>& v) {
      const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
      double var = 0;
      for (double x : v) var += (x - mean) * (x - mean);
      return std::pair<double, double>(mean, v.size() > 1 ? std::sqrt(var / (v.size() - 1)) : 0.0);
    };
    BenchStats stats;
    stats.name = run.value("name", f.input);
    stats.solver = f.solver;
    stats.n = n_nodes;
    stats.reps = reps;
    std::tie(stats.metric_mean, stats.metric_std) = mean_std(metrics);
    std::tie(stats.time_mean, stats.time_std) = mean_std(times);
    table.push_back(stats);
    std::cerr << stats.name << " [" << stats.solver << "] metric " << stats.metric_mean
              << " +- " << stats.metric_std << ", time " << stats.time_mean << "s +- "
              << stats.time_std << "\n";
  }

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!csv_out.empty()) {
    file.open(csv_out);
    if (!file) throw Error(ErrorCode::io_error, "cannot write " + csv_out);
    os = &file;
  }
  *os << "name,solver,n,reps,metric_mean,metric_std,time_mean,time_std\n";
  for (const auto& s : table)
    *os << s.name << "," << s.solver << "," << s.n << "," << s.reps << ","
        << s.metric_mean << "," << s.metric_std << "," << s.time_mean << ","
        << s.time_std << "\n";

  if (fit) {
    // Log-log slope of time vs n per solver, over entries with distinct n.
    std::map<std::string, std::vector<std::pair<double, double>>> groups;
    for (const auto& s : table)
      if (s.n > 0 && s.time_mean > 0)
        groups[s.solver].push_back({std::log(static_cast<double>(s.n)),
                                    std::log(s.time_mean)});
    for (const auto& [solver, pts] : groups) {
      if (pts.size() < 2) continue;
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
      const double k = pts.size();
      const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
      std::cout << "fit " << solver << " time ~ n^" << slope << "\n";
    }
  }
  return 0;
}

// --- analyze ---------------------------------------------------------------

std::vector<double> parse_grid(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

struct AnalyzeFlags {
  std::string mode = "phase";
  int n = 200;
  std::string p_grid = "0.01,0.02,0.04,0.08,0.15,0.2";
  std::string lr_grid = "1e-4";
  std::string exponents = "2.5,3.0";
  std::string ps_grid = "0.2,0.4,0.6,0.8";
  double dense_p = 0.2;
  int n_seeds = 3;
  std::uint64_t seed = 0;
  int epochs = 1500;
  int sweeps = 150;
  int threads = 0;
  std::string out = "sweep.jsonl";
  std::string csv;
};

int cmd_analyze(const AnalyzeFlags& a) {
  SweepOptions opt;
  opt.train.epochs = a.epochs;
  opt.sa.sweeps = a.sweeps;
  opt.threads = a.threads;

  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < a.n_seeds; ++i) seeds.push_back(mix_seed(a.seed, i));

  SweepResult sweep;
  if (a.mode == "phase") {
    std::vector<int> ns = {a.n};
    std::vector<double> ps = parse_grid(a.p_grid);
    std::vector<double> lrs = parse_grid(a.lr_grid);
    sweep = phase_transition_sweep(ns, ps, lrs, seeds, opt);
    const double threshold = detect_drop_threshold(sweep);
    std::cerr << "empirical drop threshold p = " << threshold
              << " (ln(N)/N = " << std::log(a.n) / a.n << ")\n";
  } else if (a.mode == "family") {
    std::vector<double> exponents = parse_grid(a.exponents);
    sweep = family_comparison(a.n, exponents, seeds, opt);
  } else if (a.mode == "sparsify") {
    Hypergraph dense = gen_er_graph(a.n, a.dense_p, a.seed);
    std::vector<double> ps = parse_grid(a.ps_grid);
    sweep = sparsification_study(dense, ps, seeds, opt);
  } else if (a.mode == "oversmooth") {
    for (double p : parse_grid(a.p_grid)) {
      Hypergraph g = gen_er_graph(a.n, p, a.seed);
      ProblemPtr spec = mis(g, opt.mis_beta);
      PropagationOperator op = propagation_operator(g, OperatorVariant::modified);
      HyperGnnModel model = HyperGnnModel::init(
          a.n, HyperGnnModel::default_feature_width(a.n), a.seed, spec->domain());
      train(model, op, *spec, opt.train);
      auto trace = oversmoothing_trace(model, op);
      std::cout << "p=" << p << " trace=[" << trace[0] << ", " << trace[1] << ", "
                << trace[2] << ", " << trace[3] << "]\n";
    }
    return 0;
  } else {
    throw Error(ErrorCode::invalid_argument, "unknown analyze mode '" + a.mode + "'");
  }

  std::ofstream out(a.out);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + a.out);
  sweep.write_jsonl(out);
  std::cerr << "wrote " << sweep.cells.size() << " cells to " << a.out << "\n";
  if (!a.csv.empty()) {
    std::ofstream csv(a.csv);
    if (!csv) throw Error(ErrorCode::io_error, "cannot write " + a.csv);
    sweep.write_csv(csv);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hypergraph neural combinatorial optimization solver"};
  app.require_subcommand(1);

  CommonFlags solve_flags;
  std::string save_model_path;
  auto* solve_cmd = app.add_subcommand("solve", "solve one instance");
  add_common_flags(solve_cmd, solve_flags);
  solve_cmd->add_option("--save-model", save_model_path, "write model checkpoint");

  CommonFlags pre_flags, apply_flags;
  std::string pre_model = "model.ckpt", apply_model;
  auto* transfer_cmd = app.add_subcommand("transfer", "pretrain / apply checkpoints");
  transfer_cmd->require_subcommand(1);
  auto* pretrain_cmd = transfer_cmd->add_subcommand("pretrain", "train and save a model");
  add_common_flags(pretrain_cmd, pre_flags, false);
  pretrain_cmd->add_option("--model", pre_model, "checkpoint output path");
  auto* apply_cmd = transfer_cmd->add_subcommand(
      "apply", "re-optimize a saved model's embedding on a new problem");
  add_common_flags(apply_cmd, apply_flags, false);
  apply_cmd->add_option("--model", apply_model, "checkpoint input path")->required();

  CommonFlags dist_flags;
  int workers = 2;
  std::string dist_mode = "parallel", partition = "random";
  auto* dist_cmd = app.add_subcommand("distributed", "multi-worker training");
  add_common_flags(dist_cmd, dist_flags, false);
  dist_cmd->add_option("--workers", workers, "worker count");
  dist_cmd->add_option("--dist-mode", dist_mode, "parallel|distributed");
  dist_cmd->add_option("--partition", partition, "block|random");

  GenFlags gen_flags;
  auto* gen_cmd = app.add_subcommand("gen", "generate synthetic instances");
  gen_cmd->add_option("--kind", gen_flags.kind, "hypergraph|er|regular|gnm|sat");
  gen_cmd->add_option("--out", gen_flags.out, "output file")->required();
  gen_cmd->add_option("--n", gen_flags.n, "nodes");
  gen_cmd->add_option("--k", gen_flags.k, "hyperedges");
  gen_cmd->add_option("--maxdeg", gen_flags.maxdeg, "node degree cap");
  gen_cmd->add_option("--size-cap", gen_flags.size_cap, "hyperedge size cap");
  gen_cmd->add_option("--p", gen_flags.p, "ER density");
  gen_cmd->add_option("--d", gen_flags.d, "regular degree");
  gen_cmd->add_option("--m", gen_flags.m, "edge count for gnm");
  gen_cmd->add_option("--vars", gen_flags.vars, "SAT variables");
  gen_cmd->add_option("--clauses", gen_flags.clauses, "SAT clauses");
  gen_cmd->add_flag("--satisfiable", gen_flags.satisfiable, "reject unsatisfiable instances");
  gen_cmd->add_option("--seed", gen_flags.seed, "rng seed");

  std::string manifest_path, bench_csv;
  bool bench_fit = false;
  auto* bench_cmd = app.add_subcommand("bench", "run a benchmark manifest");
  bench_cmd->add_option("--manifest", manifest_path, "JSON suite manifest")->required();
  bench_cmd->add_option("--csv", bench_csv, "write aggregate table to CSV");
  bench_cmd->add_flag("--fit", bench_fit, "fit log-log runtime exponents");

  AnalyzeFlags analyze_flags;
  auto* analyze_cmd = app.add_subcommand("analyze", "diagnostic sweeps");
  analyze_cmd->add_option("--mode", analyze_flags.mode, "phase|family|sparsify|oversmooth");
  analyze_cmd->add_option("--n", analyze_flags.n, "nodes");
  analyze_cmd->add_option("--p-grid", analyze_flags.p_grid, "comma-separated ER densities");
  analyze_cmd->add_option("--lr-grid", analyze_flags.lr_grid, "comma-separated learning rates");
  analyze_cmd->add_option("--exponents", analyze_flags.exponents, "powerlaw exponents");
  analyze_cmd->add_option("--ps-grid", analyze_flags.ps_grid, "sparsification probabilities");
  analyze_cmd->add_option("--dense-p", analyze_flags.dense_p, "density of the dense instance");
  analyze_cmd->add_option("--seeds", analyze_flags.n_seeds, "seeds per cell");
  analyze_cmd->add_option("--seed", analyze_flags.seed, "base seed");
  analyze_cmd->add_option("--epochs", analyze_flags.epochs, "training epochs per cell");
  analyze_cmd->add_option("--sweeps", analyze_flags.sweeps, "annealing sweeps per cell");
  analyze_cmd->add_option("--threads", analyze_flags.threads, "cell worker threads");
  analyze_cmd->add_option("--out", analyze_flags.out, "JSONL output");
  analyze_cmd->add_option("--csv", analyze_flags.csv, "CSV output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve_flags, save_model_path, "");
    if (transfer_cmd->parsed()) {
      if (pretrain_cmd->parsed()) {
        CommonFlags f = pre_flags;
        return cmd_solve(f, pre_model, "");
      }
      return cmd_solve(apply_flags, "", apply_model);
    }
    if (dist_cmd->parsed()) return cmd_distributed(dist_flags, workers, dist_mode, partition);
    if (gen_cmd->parsed()) return cmd_gen(gen_flags);
    if (bench_cmd->parsed()) return cmd_bench(manifest_path, bench_csv, bench_fit);
    if (analyze_cmd->parsed()) return cmd_analyze(analyze_flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
