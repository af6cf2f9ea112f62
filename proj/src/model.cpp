#include "hypop/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <random>

#include "hypop/problems.hpp"
#include "hypop/util.hpp"

namespace hypop {

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<int> all_rows(int n) {
  std::vector<int> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

// c.row(i) += a.row(i) * b for the listed rows only.
void rows_matmul_add(const Matrix& a, const Matrix& b, Matrix& c,
                     std::span<const int> rows) {
  for (int i : rows) {
    const double* arow = a.row(i);
    double* crow = c.row(i);
    for (int l = 0; l < a.cols; ++l) {
      const double av = arow[l];
      if (av == 0.0) continue;
      const double* brow = b.row(l);
      for (int j = 0; j < b.cols; ++j) crow[j] += av * brow[j];
    }
  }
}

// c += a.row(i)^T * b.row(i) summed over the listed rows (a^T b restricted).
void rows_matmul_add_at(const Matrix& a, const Matrix& b, Matrix& c,
                        std::span<const int> rows) {
  for (int i : rows) {
    const double* arow = a.row(i);
    const double* brow = b.row(i);
    for (int l = 0; l < a.cols; ++l) {
      const double av = arow[l];
      if (av == 0.0) continue;
      double* crow = c.row(l);
      for (int j = 0; j < b.cols; ++j) crow[j] += av * brow[j];
    }
  }
}

// c.row(i) += a.row(i) * b^T for the listed rows only.
void rows_matmul_add_bt(const Matrix& a, const Matrix& b, Matrix& c,
                        std::span<const int> rows) {
  for (int i : rows) {
    const double* arow = a.row(i);
    double* crow = c.row(i);
    for (int j = 0; j < b.rows; ++j) {
      const double* brow = b.row(j);
      double acc = 0.0;
      for (int l = 0; l < a.cols; ++l) acc += arow[l] * brow[l];
      crow[j] += acc;
    }
  }
}

}  // namespace

int HyperGnnModel::default_feature_width(int n) {
  int f = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  if (f % 2 != 0) ++f;
  return std::max(f, 2);
}

HyperGnnModel HyperGnnModel::init(int n, int f, std::uint64_t seed,
                                  std::vector<int> domain) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "need at least one node");
  if (f < 2 || f % 2 != 0)
    throw Error(ErrorCode::invalid_argument, "feature width must be even and >= 2");
  if (domain.size() < 2) throw Error(ErrorCode::invalid_argument, "domain too small");
  if (!std::is_sorted(domain.begin(), domain.end()))
    throw Error(ErrorCode::invalid_argument, "domain values must be increasing");

  HyperGnnModel m;
  m.domain_ = std::move(domain);
  const int hidden = f / 2;
  const int out = m.domain_.size() == 2 ? 1 : static_cast<int>(m.domain_.size());
  m.sigma_ = Matrix(n, f);
  m.w0_ = Matrix(f, hidden);
  m.w1_ = Matrix(hidden, out);

  auto rng = make_rng(mix_seed(seed, 0x6d6f64656cULL));
  auto fill = [&rng](Matrix& mat, double scale) {
    std::uniform_real_distribution<double> unif(-scale, scale);
    for (double& v : mat.data) v = unif(rng);
  };
  fill(m.sigma_, 1.0 / std::sqrt(static_cast<double>(f)));
  fill(m.w0_, 1.0 / std::sqrt(static_cast<double>(f)));
  fill(m.w1_, 1.0 / std::sqrt(static_cast<double>(hidden)));
  return m;
}

ForwardCache HyperGnnModel::forward_cached_rows(const PropagationOperator& op,
                                                std::span<const int> rows) const {
  if (op.n != sigma_.rows)
    throw Error(ErrorCode::dimension_mismatch, "operator size != node count");
  const int n = sigma_.rows;
  ForwardCache c;
  c.a1 = Matrix(n, sigma_.cols);
  c.h1 = Matrix(n, w0_.cols);
  c.a2 = Matrix(n, w0_.cols);
  c.out = Matrix(n, w1_.cols);
  c.p.assign(n, 0.0);

  op.apply_rows(sigma_, c.a1, rows);
  rows_matmul_add(c.a1, w0_, c.h1, rows);
  for (int i : rows) {
    double* row = c.h1.row(i);
    for (int j = 0; j < c.h1.cols; ++j) row[j] = row[j] > 0.0 ? row[j] : 0.0;
  }
  op.apply_rows(c.h1, c.a2, rows);
  rows_matmul_add(c.a2, w1_, c.out, rows);

  const double d0 = domain_.front(), dv = domain_.back();
  if (w1_.cols == 1) {
    for (int i : rows) {
      const double s = sigmoid(c.out(i, 0));
      c.out(i, 0) = s;
      c.p[i] = d0 + (dv - d0) * s;
    }
  } else {
    // Softmax row per node; p is the expectation over domain values.
    for (int i : rows) {
      double* row = c.out.row(i);
      const double mx = *std::max_element(row, row + c.out.cols);
      double z = 0.0;
      for (int j = 0; j < c.out.cols; ++j) {
        row[j] = std::exp(row[j] - mx);
        z += row[j];
      }
      double expect = 0.0;
      for (int j = 0; j < c.out.cols; ++j) {
        row[j] /= z;
        expect += row[j] * domain_[j];
      }
      c.p[i] = expect;
    }
  }
  return c;
}

ForwardCache HyperGnnModel::forward_cached(const PropagationOperator& op) const {
  return forward_cached_rows(op, all_rows(sigma_.rows));
}

std::vector<double> HyperGnnModel::forward(const PropagationOperator& op) const {
  return forward_cached(op).p;
}

ModelGradients HyperGnnModel::zero_gradients() const {
  return {Matrix(sigma_.rows, sigma_.cols), Matrix(w0_.rows, w0_.cols),
          Matrix(w1_.rows, w1_.cols)};
}

ModelGradients HyperGnnModel::backward_rows(const PropagationOperator& op,
                                            const ForwardCache& cache,
                                            std::span<const double> upstream,
                                            std::span<const int> rows,
                                            bool freeze_weights) const {
  const int n = sigma_.rows;
  if (static_cast<int>(upstream.size()) != n)
    throw Error(ErrorCode::dimension_mismatch, "upstream size != node count");

  ModelGradients g = zero_gradients();
  Matrix dy2(n, w1_.cols);
  const double d0 = domain_.front(), dv = domain_.back();
  if (w1_.cols == 1) {
    for (int i : rows) {
      const double s = cache.out(i, 0);
      dy2(i, 0) = upstream[i] * (dv - d0) * s * (1.0 - s);
    }
  } else {
    for (int i : rows) {
      const double* q = cache.out.row(i);
      for (int j = 0; j < w1_.cols; ++j)
        dy2(i, j) = upstream[i] * q[j] * (domain_[j] - cache.p[i]);
    }
  }

  if (!freeze_weights) rows_matmul_add_at(cache.a2, dy2, g.w1, rows);

  Matrix da2(n, w0_.cols);
  rows_matmul_add_bt(dy2, w1_, da2, rows);

  Matrix dh1(n, w0_.cols);
  op.apply_rows(da2, dh1, rows);  // P symmetric: P^T = P
  for (int i : rows) {
    const double* h1row = cache.h1.row(i);
    double* row = dh1.row(i);
    for (int j = 0; j < dh1.cols; ++j)
      if (h1row[j] <= 0.0) row[j] = 0.0;
  }

  if (!freeze_weights) rows_matmul_add_at(cache.a1, dh1, g.w0, rows);

  Matrix da1(n, sigma_.cols);
  rows_matmul_add_bt(dh1, w0_, da1, rows);
  op.apply_rows(da1, g.sigma, rows);
  return g;
}

ModelGradients HyperGnnModel::backward(const PropagationOperator& op,
                                       const ForwardCache& cache,
                                       std::span<const double> upstream,
                                       bool freeze_weights) const {
  return backward_rows(op, cache, upstream, all_rows(sigma_.rows), freeze_weights);
}

AdamOptimizer::AdamOptimizer(const HyperGnnModel& model, const TrainConfig& cfg)
    : cfg_(cfg),
      m_sigma_(model.sigma().rows, model.sigma().cols),
      v_sigma_(model.sigma().rows, model.sigma().cols),
      m_w0_(model.w0().rows, model.w0().cols),
      v_w0_(model.w0().rows, model.w0().cols),
      m_w1_(model.w1().rows, model.w1().cols),
      v_w1_(model.w1().rows, model.w1().cols) {}

void AdamOptimizer::update(Matrix& param, const Matrix& grad, Matrix& m, Matrix& v) {
  const double bc1 = 1.0 - std::pow(cfg_.beta1, t_);
  const double bc2 = 1.0 - std::pow(cfg_.beta2, t_);
  for (size_t i = 0; i < param.data.size(); ++i) {
    const double g = grad.data[i];
    m.data[i] = cfg_.beta1 * m.data[i] + (1.0 - cfg_.beta1) * g;
    v.data[i] = cfg_.beta2 * v.data[i] + (1.0 - cfg_.beta2) * g * g;
    const double mhat = m.data[i] / bc1;
    const double vhat = v.data[i] / bc2;
    param.data[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
  }
}

void AdamOptimizer::step(HyperGnnModel& model, const ModelGradients& g) {
  ++t_;
  update(model.sigma(), g.sigma, m_sigma_, v_sigma_);
  if (!cfg_.freeze_weights) {
    update(model.w0(), g.w0, m_w0_, v_w0_);
    update(model.w1(), g.w1, m_w1_, v_w1_);
  }
}

std::array<double, 4> oversmoothing_points(const HyperGnnModel& model,
                                           const PropagationOperator& op) {
  ForwardCache c = model.forward_cached(op);
  return {max_pairwise_row_distance(c.a1), max_pairwise_row_distance(c.h1),
          max_pairwise_row_distance(c.a2), max_pairwise_row_distance(c.out)};
}

TrainResult train(HyperGnnModel& model, const PropagationOperator& op,
                  const LossFn& loss, const TrainConfig& cfg) {
  Stopwatch watch;
  TrainReport report;
  const int n = model.num_nodes();
  std::vector<double> grad_p(n, 0.0);

  const int smoothing_stride = std::max(1, cfg.epochs / 32);
  double best = std::numeric_limits<double>::infinity();
  int stall = 0;

  AdamOptimizer adam(model, cfg);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    ForwardCache cache = model.forward_cached(op);
    std::fill(grad_p.begin(), grad_p.end(), 0.0);
    const double value = loss(cache.p, grad_p);
    if (!std::isfinite(value))
      throw Error(ErrorCode::non_finite_loss, "epoch " + std::to_string(epoch));
    report.loss_trace.push_back(value);
    if (epoch % smoothing_stride == 0) {
      report.smoothing_trace.push_back(
          {epoch,
           {max_pairwise_row_distance(cache.a1), max_pairwise_row_distance(cache.h1),
            max_pairwise_row_distance(cache.a2), max_pairwise_row_distance(cache.out)}});
    }

    ModelGradients g = model.backward(op, cache, grad_p, cfg.freeze_weights);
    adam.step(model, g);
    ++report.epochs_run;

    if (value < best - cfg.early_stop_tol * std::max(1.0, std::abs(best))) {
      best = value;
      stall = 0;
    } else if (cfg.patience > 0 && ++stall >= cfg.patience) {
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

TrainResult train(HyperGnnModel& model, const PropagationOperator& op,
                  const ProblemSpec& spec, const TrainConfig& cfg) {
  LossFn fn = [&spec](std::span<const double> p, std::span<double> grad) {
    return spec.loss(p, grad);
  };
  return train(model, op, fn, cfg);
}

TrainResult transfer(HyperGnnModel& pretrained, const PropagationOperator& op,
                     const ProblemSpec& spec, TrainConfig cfg) {
  if (pretrained.num_nodes() != spec.num_nodes() || op.n != pretrained.num_nodes())
    throw Error(ErrorCode::shape_mismatch,
                "pretrained model and problem disagree on node count");
  cfg.freeze_weights = true;
  return train(pretrained, op, spec, cfg);
}

// --- checkpoint io ----------------------------------------------------------

namespace {

constexpr std::uint32_t kMagic = 0x48474e4eu;  // "HGNN"
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error(ErrorCode::io_error, "truncated checkpoint");
  return v;
}

void put_matrix(std::ofstream& out, const Matrix& m) {
  out.write(reinterpret_cast<const char*>(m.data.data()),
            static_cast<std::streamsize>(m.data.size() * sizeof(double)));
}

void get_matrix(std::ifstream& in, Matrix& m) {
  in.read(reinterpret_cast<char*>(m.data.data()),
          static_cast<std::streamsize>(m.data.size() * sizeof(double)));
  if (!in) throw Error(ErrorCode::io_error, "truncated checkpoint");
}

}  // namespace

struct ModelCodec {
  static void save(const HyperGnnModel& model, OperatorVariant variant,
                   const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
    put(out, kMagic);
    put(out, kVersion);
    put(out, static_cast<std::uint64_t>(model.sigma_.rows));
    put(out, static_cast<std::uint64_t>(model.sigma_.cols));
    put(out, static_cast<std::uint64_t>(model.w1_.cols));
    put(out, static_cast<std::uint8_t>(variant == OperatorVariant::modified ? 0 : 1));
    put(out, static_cast<std::uint64_t>(model.domain_.size()));
    for (int d : model.domain_) put(out, static_cast<std::int64_t>(d));
    put_matrix(out, model.sigma_);
    put_matrix(out, model.w0_);
    put_matrix(out, model.w1_);
  }

  static LoadedModel load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot open " + path);
    if (get<std::uint32_t>(in) != kMagic)
      throw Error(ErrorCode::parse_error, path + ": not a model checkpoint");
    if (get<std::uint32_t>(in) != kVersion)
      throw Error(ErrorCode::parse_error, path + ": unsupported checkpoint version");
    const auto n = static_cast<int>(get<std::uint64_t>(in));
    const auto f = static_cast<int>(get<std::uint64_t>(in));
    const auto out_w = static_cast<int>(get<std::uint64_t>(in));
    const auto variant_flag = get<std::uint8_t>(in);
    const auto domain_size = get<std::uint64_t>(in);
    HyperGnnModel m;
    m.domain_.resize(domain_size);
    for (auto& d : m.domain_) d = static_cast<int>(get<std::int64_t>(in));
    m.sigma_ = Matrix(n, f);
    m.w0_ = Matrix(f, f / 2);
    m.w1_ = Matrix(f / 2, out_w);
    get_matrix(in, m.sigma_);
    get_matrix(in, m.w0_);
    get_matrix(in, m.w1_);
    return {std::move(m), variant_flag == 0 ? OperatorVariant::modified
                                            : OperatorVariant::standard};
  }
};

void save_model(const HyperGnnModel& model, OperatorVariant variant,
                const std::string& path) {
  ModelCodec::save(model, variant, path);
}

LoadedModel load_model(const std::string& path) { return ModelCodec::load(path); }

}  // namespace hypop
