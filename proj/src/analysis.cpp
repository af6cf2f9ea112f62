#include "hypop/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include "hypop/generators.hpp"
#include "hypop/util.hpp"

namespace hypop {

namespace {

void run_jobs(std::vector<std::function<void()>>& jobs, int threads) {
  if (threads <= 0) threads = default_thread_budget();
  threads = std::min<int>(threads, static_cast<int>(jobs.size()));
  if (threads <= 1) {
    for (auto& job : jobs) job();
    return;
  }
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (!failed.load()) {
        const size_t i = next.fetch_add(1);
        if (i >= jobs.size()) return;
        try {
          jobs[i]();
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          failed.store(true);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

void json_escape(std::ostream& os, const std::string& s) {
  for (char c : s) {
    if (c == '"' || c == '\\') os << '\\';
    os << c;
  }
}

}  // namespace

void SweepResult::write_jsonl(std::ostream& os) const {
  for (const auto& c : cells) {
    os << "{\"family\":\"";
    json_escape(os, c.family);
    os << "\",\"n\":" << c.n << ",\"p\":" << c.p << ",\"d\":" << c.d
       << ",\"ps\":" << c.ps << ",\"lr\":" << c.lr << ",\"seed\":" << c.seed
       << ",\"solver\":\"";
    json_escape(os, c.solver);
    os << "\",\"ratio\":" << c.ratio << ",\"runtime_s\":" << c.runtime_s << "}\n";
  }
}

void SweepResult::write_csv(std::ostream& os) const {
  os << "family,n,p,d,ps,lr,seed,solver,ratio,runtime_s\n";
  for (const auto& c : cells) {
    os << c.family << "," << c.n << "," << c.p << "," << c.d << "," << c.ps << ","
       << c.lr << "," << c.seed << "," << c.solver << "," << c.ratio << ","
       << c.runtime_s << "\n";
  }
}

double SweepResult::mean_ratio(const std::string& solver, double p, double ps) const {
  double acc = 0.0;
  int count = 0;
  for (const auto& c : cells) {
    if (c.solver == solver && std::abs(c.p - p) < 1e-12 && std::abs(c.ps - ps) < 1e-12) {
      acc += c.ratio;
      ++count;
    }
  }
  return count > 0 ? acc / count : 0.0;
}

std::vector<int> threshold_mis(const Hypergraph& g, std::span<const double> p) {
  const int n = g.num_nodes();
  std::vector<int> x(n, 0);
  for (int i = 0; i < n; ++i) x[i] = p[i] > 0.5 ? 1 : 0;

  // Greedy repair: while any edge has both endpoints selected, drop the
  // endpoint participating in the most conflicts (ties to the lower id).
  std::vector<int> conflicts(n, 0);
  for (int k = 0; k < g.num_edges(); ++k) {
    const auto& e = g.edge(k);
    if (x[e[0]] == 1 && x[e[1]] == 1) {
      ++conflicts[e[0]];
      ++conflicts[e[1]];
    }
  }
  while (true) {
    int worst = -1;
    for (int i = 0; i < n; ++i)
      if (conflicts[i] > 0 && (worst == -1 || conflicts[i] > conflicts[worst])) worst = i;
    if (worst == -1) break;
    x[worst] = 0;
    conflicts[worst] = 0;
    for (int k : g.incidence()[worst]) {
      const auto& e = g.edge(k);
      const int other = e[0] == worst ? e[1] : e[0];
      if (x[other] == 1 && conflicts[other] > 0) --conflicts[other];
    }
  }
  return x;
}

namespace {

// Train once on the MIS relaxation, then read the result out both ways:
// threshold-at-0.5 with repair (GNN-only) and sampling + annealing (full
// pipeline). The annealed set is repaired too so every reported set is
// independent.
struct MisCellResult {
  double gnn_only_ratio = 0.0;
  double gnn_only_runtime = 0.0;
  double hypop_ratio = 0.0;
  double hypop_runtime = 0.0;
};

MisCellResult run_mis_cell(const Hypergraph& train_graph, const Hypergraph& eval_graph,
                           const SweepOptions& opt, double lr, std::uint64_t seed) {
  MisCellResult result;
  const int n = eval_graph.num_nodes();
  Stopwatch train_watch;

  ProblemPtr train_spec = mis(train_graph, opt.mis_beta);
  PipelineConfig cfg;
  cfg.train = opt.train;
  cfg.train.lr = lr;
  cfg.train.seed = mix_seed(seed, 1);
  cfg.sa = opt.sa;
  cfg.sa.seed = mix_seed(seed, 2);

  PropagationOperator op = propagation_operator(train_graph, cfg.variant);
  HyperGnnModel model = HyperGnnModel::init(
      n, HyperGnnModel::default_feature_width(n), cfg.train.seed, train_spec->domain());
  TrainResult tr = train(model, op, *train_spec, cfg.train);
  const double train_s = train_watch.seconds();

  Stopwatch threshold_watch;
  std::vector<int> x_thr = threshold_mis(eval_graph, tr.p);
  result.gnn_only_ratio =
      std::accumulate(x_thr.begin(), x_thr.end(), 0.0) / static_cast<double>(n);
  result.gnn_only_runtime = train_s + threshold_watch.seconds();

  Stopwatch sa_watch;
  ProblemPtr eval_spec = mis(eval_graph, opt.mis_beta);
  Assignment mapped = map_with_restarts(tr.p, *eval_spec, cfg.sa);
  std::vector<double> mapped_p(mapped.x.begin(), mapped.x.end());
  std::vector<int> x_sa = threshold_mis(eval_graph, mapped_p);
  result.hypop_ratio =
      std::accumulate(x_sa.begin(), x_sa.end(), 0.0) / static_cast<double>(n);
  result.hypop_runtime = train_s + sa_watch.seconds();
  return result;
}

}  // namespace

SweepResult phase_transition_sweep(std::span<const int> ns, std::span<const double> ps,
                                   std::span<const double> lrs,
                                   std::span<const std::uint64_t> seeds,
                                   const SweepOptions& opt) {
  struct Cell {
    int n;
    double p, lr;
    std::uint64_t seed;
  };
  std::vector<Cell> grid;
  for (int n : ns)
    for (double p : ps)
      for (double lr : lrs)
        for (std::uint64_t seed : seeds) grid.push_back({n, p, lr, seed});

  SweepResult sweep;
  sweep.cells.resize(grid.size() * 2);
  std::vector<std::function<void()>> jobs;
  for (size_t i = 0; i < grid.size(); ++i) {
    jobs.push_back([&, i] {
      const Cell& c = grid[i];
      Hypergraph g = gen_er_graph(c.n, c.p, c.seed);
      MisCellResult r = run_mis_cell(g, g, opt, c.lr, c.seed);
      SweepCell base;
      base.family = "er";
      base.n = c.n;
      base.p = c.p;
      base.lr = c.lr;
      base.seed = c.seed;
      SweepCell gnn = base, full = base;
      gnn.solver = "gnn-only";
      gnn.ratio = r.gnn_only_ratio;
      gnn.runtime_s = r.gnn_only_runtime;
      full.solver = "hypop";
      full.ratio = r.hypop_ratio;
      full.runtime_s = r.hypop_runtime;
      sweep.cells[2 * i] = gnn;
      sweep.cells[2 * i + 1] = full;
    });
  }
  run_jobs(jobs, opt.threads);
  return sweep;
}

SweepResult family_comparison(int n, std::span<const double> exponents,
                              std::span<const std::uint64_t> seeds,
                              const SweepOptions& opt) {
  struct Cell {
    std::string family;
    double exponent;
    std::uint64_t seed;
  };
  std::vector<Cell> grid;
  for (double ex : exponents)
    for (std::uint64_t seed : seeds)
      for (const char* family : {"powerlaw", "er", "regular"})
        grid.push_back({family, ex, seed});

  SweepResult sweep;
  sweep.cells.resize(grid.size() * 2);
  std::vector<std::function<void()>> jobs;
  for (size_t i = 0; i < grid.size(); ++i) {
    jobs.push_back([&, i, n] {
      const Cell& c = grid[i];
      // Powerlaw instance fixes the target density for its ER/regular matches.
      Hypergraph pl = gen_powerlaw_graph(n, c.exponent, c.seed);
      const double target_density =
          2.0 * pl.num_edges() / (static_cast<double>(n) * (n - 1));
      Hypergraph g;
      int d_used = 0;
      if (c.family == "powerlaw") {
        g = pl;
      } else if (c.family == "er") {
        g = gen_er_graph(n, target_density, mix_seed(c.seed, 11));
      } else {
        int d = static_cast<int>(std::llround(2.0 * pl.num_edges() / n));
        d = std::max(1, d);
        if ((static_cast<long long>(n) * d) % 2 != 0) ++d;
        const double got = static_cast<double>(d) / (n - 1);
        if (std::abs(got - target_density) > 0.05 * target_density + 1e-12)
          throw Error(ErrorCode::infeasible_spec,
                      "no regular degree matches the powerlaw density within 5%");
        d_used = d;
        g = gen_regular_graph(n, d, mix_seed(c.seed, 13));
      }
      MisCellResult r = run_mis_cell(g, g, opt, opt.train.lr, c.seed);
      SweepCell base;
      base.family = c.family;
      base.n = n;
      base.p = target_density;
      base.d = d_used;
      base.lr = opt.train.lr;
      base.seed = c.seed;
      SweepCell gnn = base, full = base;
      gnn.solver = "gnn-only";
      gnn.ratio = r.gnn_only_ratio;
      gnn.runtime_s = r.gnn_only_runtime;
      full.solver = "hypop";
      full.ratio = r.hypop_ratio;
      full.runtime_s = r.hypop_runtime;
      sweep.cells[2 * i] = gnn;
      sweep.cells[2 * i + 1] = full;
    });
  }
  run_jobs(jobs, opt.threads);
  return sweep;
}

std::array<double, 4> oversmoothing_trace(const HyperGnnModel& model,
                                          const PropagationOperator& op) {
  return oversmoothing_points(model, op);
}

SweepResult sparsification_study(const Hypergraph& dense,
                                 std::span<const double> ps_grid,
                                 std::span<const std::uint64_t> seeds,
                                 const SweepOptions& opt) {
  struct Cell {
    double ps;
    bool reference;
    std::uint64_t seed;
  };
  std::vector<Cell> grid;
  for (std::uint64_t seed : seeds) {
    grid.push_back({0.0, true, seed});
    for (double ps : ps_grid) grid.push_back({ps, false, seed});
  }

  SweepResult sweep;
  sweep.cells.resize(grid.size());
  std::vector<std::function<void()>> jobs;
  for (size_t i = 0; i < grid.size(); ++i) {
    jobs.push_back([&, i] {
      const Cell& c = grid[i];
      SweepCell cell;
      cell.family = "er";
      cell.n = dense.num_nodes();
      cell.ps = c.ps;
      cell.lr = opt.train.lr;
      cell.seed = c.seed;
      if (c.reference) {
        MisCellResult r = run_mis_cell(dense, dense, opt, opt.train.lr, c.seed);
        cell.solver = "hypop";
        cell.ratio = r.hypop_ratio;
        cell.runtime_s = r.hypop_runtime;
      } else {
        Hypergraph sparse = sparsify(dense, c.ps, mix_seed(c.seed, 17));
        // Train on the sparsified graph, report against the original.
        MisCellResult r = run_mis_cell(sparse, dense, opt, opt.train.lr, c.seed);
        cell.solver = "gnn-only";
        cell.ratio = r.gnn_only_ratio;
        cell.runtime_s = r.gnn_only_runtime;
      }
      sweep.cells[i] = cell;
    });
  }
  run_jobs(jobs, opt.threads);
  return sweep;
}

double detect_drop_threshold(const SweepResult& sweep, double drop_fraction) {
  std::map<double, std::pair<double, int>> by_p;  // p -> (ratio sum, count)
  for (const auto& c : sweep.cells) {
    if (c.solver != "gnn-only") continue;
    auto& acc = by_p[c.p];
    acc.first += c.ratio;
    ++acc.second;
  }
  if (by_p.size() < 2) return 0.0;
  const double baseline = by_p.begin()->second.first / by_p.begin()->second.second;
  if (baseline <= 0.0) return 0.0;
  for (const auto& [p, acc] : by_p) {
    const double mean = acc.first / acc.second;
    if (p > by_p.begin()->first && mean <= drop_fraction * baseline) return p;
  }
  return 0.0;
}

}  // namespace hypop
