#include "hypop/pipeline.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "hypop/util.hpp"

namespace hypop {

namespace {

PropagationOperator build_operator(const ProblemSpec& spec, const PipelineConfig& cfg) {
  return propagation_operator(spec.hypergraph(), cfg.variant);
}

HyperGnnModel make_model(int n, const ProblemSpec& spec, const PipelineConfig& cfg) {
  const int f = cfg.feature_width > 0 ? cfg.feature_width
                                      : HyperGnnModel::default_feature_width(n);
  return HyperGnnModel::init(n, f, cfg.train.seed, spec.domain());
}

std::vector<double> uniform_outputs(const ProblemSpec& spec) {
  // Epochless runs anneal from uniform random samples; for the binary domain
  // this is p = 0.5 everywhere.
  const auto& d = spec.domain();
  const double mid = 0.5 * (d.front() + d.back());
  return std::vector<double>(static_cast<size_t>(spec.num_nodes()), mid);
}

}  // namespace

SolveResult solve_pipeline_with_model(HyperGnnModel& model, const ProblemSpec& spec,
                                      const PipelineConfig& cfg) {
  SolveResult result;
  Stopwatch total;
  PropagationOperator op = build_operator(spec, cfg);
  TrainResult tr = train(model, op, spec, cfg.train);
  result.report = std::move(tr.report);
  result.p = std::move(tr.p);
  result.train_seconds = total.seconds();

  Stopwatch map_watch;
  result.assignment = map_with_restarts(result.p, spec, cfg.sa);
  result.map_seconds = map_watch.seconds();
  return result;
}

SolveResult solve_pipeline(const ProblemSpec& spec, const PipelineConfig& cfg) {
  if (cfg.train.epochs == 0) {
    // Epoch count zero is the annealing-only configuration: uniform random
    // initialization, no model in the loop.
    SolveResult result;
    result.p = uniform_outputs(spec);
    Stopwatch map_watch;
    result.assignment = map_with_restarts(result.p, spec, cfg.sa);
    result.map_seconds = map_watch.seconds();
    return result;
  }
  HyperGnnModel model = make_model(spec.num_nodes(), spec, cfg);
  return solve_pipeline_with_model(model, spec, cfg);
}

SolveResult sa_only(const ProblemSpec& spec, const SaConfig& sa) {
  PipelineConfig cfg;
  cfg.train.epochs = 0;
  cfg.sa = sa;
  return solve_pipeline(spec, cfg);
}

SolveResult adam_direct(const ProblemSpec& spec, const TrainConfig& train_cfg,
                        const SaConfig& sa) {
  SolveResult result;
  Stopwatch total;
  const int n = spec.num_nodes();
  const double d0 = spec.domain().front();
  const double dv = spec.domain().back();

  // p = d0 + (dv - d0) * sigmoid(z); Adam runs on the free variables z. Tiny
  // seeded noise breaks the symmetric saddle at p = 0.5.
  std::vector<double> z(n), p(n), grad_p(n), grad_z(n);
  {
    auto rng = make_rng(mix_seed(train_cfg.seed, 0x6164616dULL));
    std::uniform_real_distribution<double> unif(-0.01, 0.01);
    for (double& zi : z) zi = unif(rng);
  }
  std::vector<double> m(n, 0.0), v(n, 0.0);
  double best = std::numeric_limits<double>::infinity();
  int stall = 0;
  for (int epoch = 0; epoch < train_cfg.epochs; ++epoch) {
    for (int i = 0; i < n; ++i) p[i] = d0 + (dv - d0) / (1.0 + std::exp(-z[i]));
    std::fill(grad_p.begin(), grad_p.end(), 0.0);
    const double value = spec.loss(p, grad_p);
    if (!std::isfinite(value))
      throw Error(ErrorCode::non_finite_loss, "epoch " + std::to_string(epoch));
    result.report.loss_trace.push_back(value);
    ++result.report.epochs_run;

    const double bc1 = 1.0 - std::pow(train_cfg.beta1, epoch + 1);
    const double bc2 = 1.0 - std::pow(train_cfg.beta2, epoch + 1);
    for (int i = 0; i < n; ++i) {
      const double s = (p[i] - d0) / (dv - d0);
      grad_z[i] = grad_p[i] * (dv - d0) * s * (1.0 - s);
      m[i] = train_cfg.beta1 * m[i] + (1.0 - train_cfg.beta1) * grad_z[i];
      v[i] = train_cfg.beta2 * v[i] + (1.0 - train_cfg.beta2) * grad_z[i] * grad_z[i];
      z[i] -= train_cfg.lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + train_cfg.eps);
    }

    if (value < best - train_cfg.early_stop_tol * std::max(1.0, std::abs(best))) {
      best = value;
      stall = 0;
    } else if (train_cfg.patience > 0 && ++stall >= train_cfg.patience) {
      break;
    }
  }
  for (int i = 0; i < n; ++i) p[i] = d0 + (dv - d0) / (1.0 + std::exp(-z[i]));
  result.p = p;
  result.report.wall_seconds = total.seconds();
  result.train_seconds = total.seconds();

  Stopwatch map_watch;
  result.assignment = map_with_restarts(result.p, spec, sa);
  result.map_seconds = map_watch.seconds();
  return result;
}

SolveResult bipartite_gnn(const ProblemSpec& spec, const PipelineConfig& cfg) {
  SolveResult result;
  Stopwatch total;
  const int n = spec.num_nodes();
  Hypergraph expanded = bipartite_expansion(spec.hypergraph());
  PropagationOperator op = propagation_operator(expanded, cfg.variant);

  const int f = cfg.feature_width > 0
                    ? cfg.feature_width
                    : HyperGnnModel::default_feature_width(expanded.num_nodes());
  HyperGnnModel model = HyperGnnModel::init(expanded.num_nodes(), f, cfg.train.seed,
                                            spec.domain());

  // Factor nodes propagate but the loss reads only original-node outputs.
  LossFn fn = [&spec, n](std::span<const double> p_full, std::span<double> grad_full) {
    return spec.loss(p_full.subspan(0, n), grad_full.subspan(0, n));
  };
  TrainResult tr = train(model, op, fn, cfg.train);
  result.report = std::move(tr.report);
  result.p.assign(tr.p.begin(), tr.p.begin() + n);
  result.train_seconds = total.seconds();

  Stopwatch map_watch;
  result.assignment = map_with_restarts(result.p, spec, cfg.sa);
  result.map_seconds = map_watch.seconds();
  return result;
}

SolveResult transfer_pipeline(HyperGnnModel& pretrained, const ProblemSpec& spec,
                              const PipelineConfig& cfg) {
  SolveResult result;
  Stopwatch total;
  PropagationOperator op = build_operator(spec, cfg);
  TrainResult tr = transfer(pretrained, op, spec, cfg.train);
  result.report = std::move(tr.report);
  result.p = std::move(tr.p);
  result.train_seconds = total.seconds();

  Stopwatch map_watch;
  result.assignment = map_with_restarts(result.p, spec, cfg.sa);
  result.map_seconds = map_watch.seconds();
  return result;
}

}  // namespace hypop
