#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hypop/hypergraph.hpp"
#include "hypop/matrix.hpp"

namespace hypop {

// Penalized loss callback: fills grad (same length as p), returns the value.
using LossFn = std::function<double(std::span<const double>, std::span<double>)>;

struct TrainConfig {
  int epochs = 2000;
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double early_stop_tol = 1e-4;  // relative improvement threshold
  int patience = 100;            // epochs without improvement before stopping
  std::uint64_t seed = 0;
  bool freeze_weights = false;   // transfer mode: only the input embedding moves
};

struct TrainReport {
  std::vector<double> loss_trace;
  int epochs_run = 0;
  double wall_seconds = 0.0;
  // Sampled (epoch, distances after [prop1, lin1, prop2, lin2]).
  std::vector<std::pair<int, std::array<double, 4>>> smoothing_trace;
  std::array<double, 4> final_smoothing{};
};

struct ModelGradients {
  Matrix sigma;
  Matrix w0;
  Matrix w1;
};

struct ForwardCache {
  Matrix a1;      // P * sigma
  Matrix h1;      // relu(a1 * W0)
  Matrix a2;      // P * h1
  Matrix out;     // activation(a2 * W1): sigmoid column or softmax rows
  std::vector<double> p;
};

// Two-layer hypergraph convolutional transformation p = G(sigma; W).
// Binary domains use a sigmoid output column; wider domains use a softmax row
// per node whose expectation over the domain values is returned as p.
class HyperGnnModel {
 public:
  HyperGnnModel() = default;

  // ceil(sqrt(n)) rounded up to even.
  static int default_feature_width(int n);

  // Scaled uniform init: W entries in ±1/sqrt(fan_in), sigma in ±1/sqrt(f).
  static HyperGnnModel init(int n, int f, std::uint64_t seed,
                            std::vector<int> domain = {0, 1});

  int num_nodes() const { return sigma_.rows; }
  int feature_width() const { return sigma_.cols; }
  int hidden_width() const { return w0_.cols; }
  int output_width() const { return w1_.cols; }
  const std::vector<int>& domain() const { return domain_; }

  const Matrix& sigma() const { return sigma_; }
  const Matrix& w0() const { return w0_; }
  const Matrix& w1() const { return w1_; }
  Matrix& sigma() { return sigma_; }
  Matrix& w0() { return w0_; }
  Matrix& w1() { return w1_; }

  // Full forward pass; p has one entry per node, strictly inside (d_0, d_v).
  std::vector<double> forward(const PropagationOperator& op) const;
  ForwardCache forward_cached(const PropagationOperator& op) const;
  // Restricted pass: only rows in `rows` are computed (valid when the operator
  // couples no node in `rows` to a node outside it).
  ForwardCache forward_cached_rows(const PropagationOperator& op,
                                   std::span<const int> rows) const;

  // Reverse-mode gradients of loss(p) given upstream = dloss/dp. Exact for the
  // cached forward. freeze_weights zeroes the W gradients.
  ModelGradients backward(const PropagationOperator& op, const ForwardCache& cache,
                          std::span<const double> upstream,
                          bool freeze_weights = false) const;
  ModelGradients backward_rows(const PropagationOperator& op, const ForwardCache& cache,
                               std::span<const double> upstream,
                               std::span<const int> rows,
                               bool freeze_weights = false) const;

  ModelGradients zero_gradients() const;

 private:
  Matrix sigma_;  // N x f
  Matrix w0_;     // f x f/2
  Matrix w1_;     // f/2 x out
  std::vector<int> domain_;

  friend struct ModelCodec;
};

// Adam over (sigma, W0, W1) with bias correction; shared step counter.
class AdamOptimizer {
 public:
  AdamOptimizer(const HyperGnnModel& model, const TrainConfig& cfg);
  void step(HyperGnnModel& model, const ModelGradients& g);

 private:
  void update(Matrix& param, const Matrix& grad, Matrix& m, Matrix& v);

  TrainConfig cfg_;
  int t_ = 0;
  Matrix m_sigma_, v_sigma_, m_w0_, v_w0_, m_w1_, v_w1_;
};

struct TrainResult {
  std::vector<double> p;
  TrainReport report;
};

// Full-batch Adam training of f̂(G(sigma; W)). Deterministic under
// (seed, config, instance). Throws non_finite_loss if the loss diverges.
TrainResult train(HyperGnnModel& model, const PropagationOperator& op,
                  const LossFn& loss, const TrainConfig& cfg);

class ProblemSpec;
TrainResult train(HyperGnnModel& model, const PropagationOperator& op,
                  const ProblemSpec& spec, const TrainConfig& cfg);

// Transfer mode: keep W fixed, re-optimize the input embedding for a new
// objective on the same hypergraph. Shape mismatch between the pretrained
// model and the new problem raises shape_mismatch.
TrainResult transfer(HyperGnnModel& pretrained, const PropagationOperator& op,
                     const ProblemSpec& spec, TrainConfig cfg);

// Distances after the four tracked operations for the current parameters.
std::array<double, 4> oversmoothing_points(const HyperGnnModel& model,
                                           const PropagationOperator& op);

// Versioned binary checkpoint: header (N, f, out, variant) + row-major arrays.
void save_model(const HyperGnnModel& model, OperatorVariant variant,
                const std::string& path);
struct LoadedModel {
  HyperGnnModel model;
  OperatorVariant variant;
};
LoadedModel load_model(const std::string& path);

}  // namespace hypop
