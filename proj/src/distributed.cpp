#include "hypop/distributed.hpp"

#include <algorithm>
#include <barrier>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <thread>

#include "hypop/util.hpp"

namespace hypop {

// --- wire format -------------------------------------------------------------

namespace {

template <typename T>
void put_raw(std::vector<std::uint8_t>& out, const T* data, size_t count) {
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(data);
  out.insert(out.end(), bytes, bytes + count * sizeof(T));
}

template <typename T>
void put_one(std::vector<std::uint8_t>& out, T v) {
  put_raw(out, &v, 1);
}

template <typename T>
T get_one(std::span<const std::uint8_t>& in) {
  if (in.size() < sizeof(T))
    throw Error(ErrorCode::parse_error, "truncated gradient message");
  T v;
  std::memcpy(&v, in.data(), sizeof(T));
  in = in.subspan(sizeof(T));
  return v;
}

template <typename T>
std::vector<T> get_array(std::span<const std::uint8_t>& in) {
  const auto count = get_one<std::uint64_t>(in);
  if (in.size() < count * sizeof(T))
    throw Error(ErrorCode::parse_error, "truncated gradient message array");
  std::vector<T> v(count);
  std::memcpy(v.data(), in.data(), count * sizeof(T));
  in = in.subspan(count * sizeof(T));
  return v;
}

template <typename T>
void put_array(std::vector<std::uint8_t>& out, const std::vector<T>& v) {
  put_one(out, static_cast<std::uint64_t>(v.size()));
  put_raw(out, v.data(), v.size());
}

}  // namespace

std::vector<std::uint8_t> GradMessage::encode() const {
  std::vector<std::uint8_t> out;
  put_one(out, kVersion);
  put_one(out, static_cast<std::int32_t>(epoch));
  put_one(out, static_cast<std::int32_t>(worker));
  put_one(out, loss_value);
  put_array(out, grad_sigma);
  put_array(out, grad_w0);
  put_array(out, grad_w1);
  put_array(out, published_nodes);
  put_array(out, published_values);
  return out;
}

GradMessage GradMessage::decode(std::span<const std::uint8_t> bytes) {
  GradMessage msg;
  const auto version = get_one<std::uint32_t>(bytes);
  if (version != kVersion)
    throw Error(ErrorCode::parse_error, "unsupported gradient message version");
  msg.epoch = get_one<std::int32_t>(bytes);
  msg.worker = get_one<std::int32_t>(bytes);
  msg.loss_value = get_one<double>(bytes);
  msg.grad_sigma = get_array<double>(bytes);
  msg.grad_w0 = get_array<double>(bytes);
  msg.grad_w1 = get_array<double>(bytes);
  msg.published_nodes = get_array<int>(bytes);
  msg.published_values = get_array<double>(bytes);
  return msg;
}

ModelGradients aggregate(std::vector<const GradMessage*> contributions,
                         int n_workers, const HyperGnnModel& shape) {
  if (static_cast<int>(contributions.size()) != n_workers)
    throw Error(ErrorCode::missing_contribution,
                "expected " + std::to_string(n_workers) + " contributions, got " +
                    std::to_string(contributions.size()));
  std::sort(contributions.begin(), contributions.end(),
            [](const GradMessage* a, const GradMessage* b) { return a->worker < b->worker; });
  for (int s = 0; s < n_workers; ++s) {
    if (contributions[s] == nullptr || contributions[s]->worker != s)
      throw Error(ErrorCode::missing_contribution,
                  "missing contribution from worker " + std::to_string(s));
    if (s > 0 && contributions[s]->epoch != contributions[0]->epoch)
      throw Error(ErrorCode::missing_contribution, "contributions from mixed epochs");
  }

  ModelGradients g = shape.zero_gradients();
  auto add = [](Matrix& dst, const std::vector<double>& src) {
    if (dst.data.size() != src.size())
      throw Error(ErrorCode::dimension_mismatch, "gradient contribution shape");
    for (size_t i = 0; i < src.size(); ++i) dst.data[i] += src[i];
  };
  for (int s = 0; s < n_workers; ++s) {
    add(g.sigma, contributions[s]->grad_sigma);
    add(g.w0, contributions[s]->grad_w0);
    add(g.w1, contributions[s]->grad_w1);
  }
  return g;
}

// --- in-process bulk-synchronous workers --------------------------------------

namespace {

// Persistent worker threads released in rounds by a shared barrier. The body
// runs once per round per worker; main arrives twice per round.
class EpochWorkers {
 public:
  EpochWorkers(int n, std::function<void(int)> body)
      : n_(n), body_(std::move(body)), barrier_(n + 1) {
    threads_.reserve(n_);
    for (int s = 0; s < n_; ++s) {
      threads_.emplace_back([this, s] {
        while (true) {
          barrier_.arrive_and_wait();
          if (stop_) return;
          try {
            body_(s);
          } catch (...) {
            errors_[s] = std::current_exception();
          }
          barrier_.arrive_and_wait();
        }
      });
    }
    errors_.assign(n_, nullptr);
  }

  void run_round() {
    barrier_.arrive_and_wait();
    barrier_.arrive_and_wait();
    for (int s = 0; s < n_; ++s) {
      if (errors_[s]) {
        auto err = errors_[s];
        shutdown();
        std::rethrow_exception(err);
      }
    }
  }

  ~EpochWorkers() { shutdown(); }

 private:
  void shutdown() {
    if (stopped_) return;
    stop_ = true;
    barrier_.arrive_and_wait();
    for (auto& t : threads_) t.join();
    stopped_ = true;
  }

  int n_;
  std::function<void(int)> body_;
  std::barrier<> barrier_;
  std::vector<std::thread> threads_;
  std::vector<std::exception_ptr> errors_;
  bool stop_ = false;
  bool stopped_ = false;
};

ModelGradients slice_gradient(const HyperGnnModel& model, const PropagationOperator& op,
                              const ForwardCache& cache, const ProblemSpec& spec,
                              std::span<const int> slice, bool include_nonedge,
                              bool freeze_weights, double& value_out) {
  std::vector<double> upstream(cache.p.size(), 0.0);
  double value = spec.edge_terms(cache.p, upstream, slice);
  if (include_nonedge)
    value += spec.nonedge_terms(cache.p, upstream, spec.all_node_ids());
  value_out = value;
  return model.backward(op, cache, upstream, freeze_weights);
}

GradMessage to_message(int epoch, int worker, double value, ModelGradients&& g) {
  GradMessage msg;
  msg.epoch = epoch;
  msg.worker = worker;
  msg.loss_value = value;
  msg.grad_sigma = std::move(g.sigma.data);
  msg.grad_w0 = std::move(g.w0.data);
  msg.grad_w1 = std::move(g.w1.data);
  return msg;
}

std::vector<std::vector<int>> split_slices(std::span<const int> shuffled, int n_workers) {
  std::vector<std::vector<int>> slices(n_workers);
  const int total = static_cast<int>(shuffled.size());
  const int base = total / n_workers, extra = total % n_workers;
  int pos = 0;
  for (int s = 0; s < n_workers; ++s) {
    const int count = base + (s < extra ? 1 : 0);
    slices[s].assign(shuffled.begin() + pos, shuffled.begin() + pos + count);
    // Canonical evaluation order inside a slice keeps S=1 identical to
    // single-worker training.
    std::sort(slices[s].begin(), slices[s].end());
    pos += count;
  }
  return slices;
}

}  // namespace

ModelGradients parallel_epoch_gradient(const HyperGnnModel& model,
                                       const PropagationOperator& op,
                                       const ProblemSpec& spec, int n_workers,
                                       std::span<const int> shuffled_edges) {
  ForwardCache cache = model.forward_cached(op);
  auto slices = split_slices(shuffled_edges, n_workers);
  std::vector<GradMessage> messages(n_workers);
  for (int s = 0; s < n_workers; ++s) {
    double value = 0.0;
    ModelGradients g = slice_gradient(model, op, cache, spec, slices[s],
                                      /*include_nonedge=*/s == 0,
                                      /*freeze_weights=*/false, value);
    messages[s] = to_message(0, s, value, std::move(g));
  }
  std::vector<const GradMessage*> ptrs;
  for (const auto& m : messages) ptrs.push_back(&m);
  return aggregate(std::move(ptrs), n_workers, model);
}

TrainResult train_parallel(const ProblemSpec& spec, const PipelineConfig& cfg,
                           int n_workers, std::uint64_t seed) {
  if (n_workers < 1)
    throw Error(ErrorCode::invalid_argument, "need at least one worker");
  Stopwatch watch;
  const int n = spec.num_nodes();
  PropagationOperator op = propagation_operator(spec.hypergraph(), cfg.variant);
  const int f = cfg.feature_width > 0 ? cfg.feature_width
                                      : HyperGnnModel::default_feature_width(n);
  HyperGnnModel model = HyperGnnModel::init(n, f, cfg.train.seed, spec.domain());
  AdamOptimizer adam(model, cfg.train);

  TrainReport report;
  std::vector<int> edge_order(spec.hypergraph().num_edges());
  std::iota(edge_order.begin(), edge_order.end(), 0);
  auto shuffle_rng = make_rng(mix_seed(seed, 0x73687566ULL));

  ForwardCache cache;
  std::vector<std::vector<int>> slices;
  std::vector<GradMessage> messages(n_workers);
  int epoch = 0;

  EpochWorkers workers(n_workers, [&](int s) {
    double value = 0.0;
    ModelGradients g = slice_gradient(model, op, cache, spec, slices[s],
                                      /*include_nonedge=*/s == 0,
                                      cfg.train.freeze_weights, value);
    messages[s] = to_message(epoch, s, value, std::move(g));
  });

  const int smoothing_stride = std::max(1, cfg.train.epochs / 32);
  double best = std::numeric_limits<double>::infinity();
  int stall = 0;

  for (epoch = 0; epoch < cfg.train.epochs; ++epoch) {
    std::shuffle(edge_order.begin(), edge_order.end(), shuffle_rng);
    slices = split_slices(edge_order, n_workers);
    cache = model.forward_cached(op);

    workers.run_round();

    double value = 0.0;
    for (const auto& m : messages) value += m.loss_value;
    if (!std::isfinite(value))
      throw Error(ErrorCode::non_finite_loss, "epoch " + std::to_string(epoch));
    report.loss_trace.push_back(value);
    if (epoch % smoothing_stride == 0) {
      report.smoothing_trace.push_back(
          {epoch,
           {max_pairwise_row_distance(cache.a1), max_pairwise_row_distance(cache.h1),
            max_pairwise_row_distance(cache.a2), max_pairwise_row_distance(cache.out)}});
    }

    std::vector<const GradMessage*> ptrs;
    for (const auto& m : messages) ptrs.push_back(&m);
    ModelGradients g = aggregate(std::move(ptrs), n_workers, model);
    adam.step(model, g);
    ++report.epochs_run;

    if (value < best - cfg.train.early_stop_tol * std::max(1.0, std::abs(best))) {
      best = value;
      stall = 0;
    } else if (cfg.train.patience > 0 && ++stall >= cfg.train.patience) {
      break;
    }
  }

  ForwardCache final_cache = model.forward_cached(op);
  report.final_smoothing = {
      max_pairwise_row_distance(final_cache.a1), max_pairwise_row_distance(final_cache.h1),
      max_pairwise_row_distance(final_cache.a2), max_pairwise_row_distance(final_cache.out)};
  report.wall_seconds = watch.seconds();
  return {std::move(final_cache.p), std::move(report)};
}

// --- partitioned training (inner/outer hyperedge visibility) ------------------

TrainResult train_distributed(const Partition& partition, const ProblemSpec& spec,
                              const PipelineConfig& cfg, std::uint64_t) {
  const int n = spec.num_nodes();
  const int S = partition.n_workers;
  if (partition.n_nodes != n || partition.n_edges != spec.hypergraph().num_edges() ||
      static_cast<int>(partition.owner.size()) != n)
    throw Error(ErrorCode::stale_partition,
                "partition does not match the problem's hypergraph");

  Stopwatch watch;
  const int f = cfg.feature_width > 0 ? cfg.feature_width
                                      : HyperGnnModel::default_feature_width(n);
  HyperGnnModel model = HyperGnnModel::init(n, f, cfg.train.seed, spec.domain());
  AdamOptimizer adam(model, cfg.train);

  // Per-worker local view: propagation over inner hyperedges only, loss over
  // inner + outer hyperedges.
  std::vector<PropagationOperator> local_ops(S);
  std::vector<std::vector<int>> loss_edges(S);
  const auto& h = spec.hypergraph();
  for (int s = 0; s < S; ++s) {
    std::vector<std::vector<int>> inner;
    std::vector<double> w;
    inner.reserve(partition.inner_edges[s].size());
    for (int k : partition.inner_edges[s]) {
      inner.push_back(h.edge(k));
      w.push_back(h.weight(k));
    }
    local_ops[s] =
        propagation_operator(Hypergraph::build(n, std::move(inner), std::move(w)),
                             cfg.variant);
    loss_edges[s] = partition.inner_edges[s];
    loss_edges[s].insert(loss_edges[s].end(), partition.outer_edges[s].begin(),
                         partition.outer_edges[s].end());
    std::sort(loss_edges[s].begin(), loss_edges[s].end());
  }

  TrainReport report;
  std::vector<GradMessage> messages(S);
  // Boundary values from the previous epoch's forward (one staleness step).
  std::vector<double> stale_p(n, 0.0);
  std::vector<double> fresh_p(n, 0.0);
  int epoch = -1;  // round -1 publishes initial outputs only

  EpochWorkers workers(S, [&](int s) {
    const auto& owned = partition.nodes[s];
    ForwardCache cache = model.forward_cached_rows(local_ops[s], owned);

    GradMessage msg;
    msg.epoch = epoch;
    msg.worker = s;
    msg.published_nodes = owned;
    msg.published_values.resize(owned.size());
    for (size_t i = 0; i < owned.size(); ++i)
      msg.published_values[i] = cache.p[owned[i]];

    if (epoch >= 0) {
      // Assemble the view: fresh outputs for owned nodes, stale for the rest.
      std::vector<double> view = stale_p;
      for (int i : owned) view[i] = cache.p[i];

      std::vector<double> upstream(n, 0.0);
      double value = spec.edge_terms(view, upstream, loss_edges[s]);
      value += spec.nonedge_terms(view, upstream, owned);
      msg.loss_value = value;

      // Gradients for non-owned nodes belong to their owners; drop them so the
      // reduction counts each partial derivative exactly once.
      std::vector<double> masked(n, 0.0);
      for (int i : owned) masked[i] = upstream[i];

      ModelGradients g = model.backward_rows(local_ops[s], cache, masked, owned,
                                             cfg.train.freeze_weights);
      msg.grad_sigma = std::move(g.sigma.data);
      msg.grad_w0 = std::move(g.w0.data);
      msg.grad_w1 = std::move(g.w1.data);
    }
    messages[s] = std::move(msg);
  });

  auto collect_outputs = [&](std::vector<double>& dst) {
    for (const auto& m : messages)
      for (size_t i = 0; i < m.published_nodes.size(); ++i)
        dst[m.published_nodes[i]] = m.published_values[i];
  };

  // Initial exchange so epoch 0 has boundary values.
  workers.run_round();
  collect_outputs(stale_p);

  double best = std::numeric_limits<double>::infinity();
  int stall = 0;

  for (epoch = 0; epoch < cfg.train.epochs; ++epoch) {
    workers.run_round();

    collect_outputs(fresh_p);
    const double value = spec.loss_value(fresh_p);
    if (!std::isfinite(value))
      throw Error(ErrorCode::non_finite_loss, "epoch " + std::to_string(epoch));
    report.loss_trace.push_back(value);

    std::vector<const GradMessage*> ptrs;
    for (const auto& m : messages) ptrs.push_back(&m);
    ModelGradients g = aggregate(std::move(ptrs), S, model);
    adam.step(model, g);
    ++report.epochs_run;
    stale_p = fresh_p;

    if (value < best - cfg.train.early_stop_tol * std::max(1.0, std::abs(best))) {
      best = value;
      stall = 0;
    } else if (cfg.train.patience > 0 && ++stall >= cfg.train.patience) {
      break;
    }
  }

  // Publish final outputs under the final parameters.
  epoch = -1;
  workers.run_round();
  collect_outputs(fresh_p);
  report.final_smoothing =
      oversmoothing_points(model, propagation_operator(h, cfg.variant));
  report.wall_seconds = watch.seconds();
  return {fresh_p, std::move(report)};
}

}  // namespace hypop
