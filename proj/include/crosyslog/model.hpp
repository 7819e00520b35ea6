// Copyright 2026 The CroSysLog Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CROSYSLOG_MODEL_HPP_
#define CROSYSLOG_MODEL_HPP_

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "crosyslog/error.hpp"
#include "crosyslog/random.hpp"

namespace crosyslog {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// All trainable parameters of the windowed LSTM detector. The four gate
/// blocks are stacked row-wise in the order input, forget, output, candidate
/// (rows [0,h), [h,2h), [2h,3h), [3h,4h)). Head row 0 is the normal class,
/// row 1 the anomalous class.
struct LstmParams {
  Matrix w_input;      // 4h x d
  Matrix w_recurrent;  // 4h x h
  Vector bias;         // 4h
  Matrix w_head;       // 2 x h
  Vector b_head;       // 2

  std::size_t embedding_dim() const { return static_cast<std::size_t>(w_input.cols()); }
  std::size_t hidden_dim() const { return static_cast<std::size_t>(w_recurrent.cols()); }

  static LstmParams zeros(std::size_t embedding_dim, std::size_t hidden_dim) {
    const auto d = static_cast<Eigen::Index>(embedding_dim);
    const auto h = static_cast<Eigen::Index>(hidden_dim);
    return LstmParams{Matrix::Zero(4 * h, d), Matrix::Zero(4 * h, h), Vector::Zero(4 * h),
                      Matrix::Zero(2, h), Vector::Zero(2)};
  }

  /// Uniform(-1/sqrt(h), 1/sqrt(h)) weights, zero biases, forget bias 1.
  static LstmParams random(std::size_t embedding_dim, std::size_t hidden_dim, std::uint64_t seed) {
    if (embedding_dim == 0 || hidden_dim == 0) throw ConfigError("model dims must be >= 1");
    LstmParams p = zeros(embedding_dim, hidden_dim);
    Rng rng(seed);
    const double r = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
    auto fill = [&](Matrix& m) {
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng.uniform(-r, r);
    };
    fill(p.w_input);
    fill(p.w_recurrent);
    fill(p.w_head);
    const auto h = static_cast<Eigen::Index>(hidden_dim);
    p.bias.segment(h, h).setOnes();
    return p;
  }

  /// Visits (name, block) pairs in checkpoint order.
  template <typename F>
  void for_each_block(F&& f) {
    f("w_input", w_input);
    f("w_recurrent", w_recurrent);
    f("bias", bias);
    f("w_head", w_head);
    f("b_head", b_head);
  }
  template <typename F>
  void for_each_block(F&& f) const {
    f("w_input", w_input);
    f("w_recurrent", w_recurrent);
    f("bias", bias);
    f("w_head", w_head);
    f("b_head", b_head);
  }

  /// Elementwise visit of two same-shaped parameter sets.
  template <typename F>
  void zip_blocks(const LstmParams& other, F&& f) {
    f(w_input, other.w_input);
    f(w_recurrent, other.w_recurrent);
    f(bias, other.bias);
    f(w_head, other.w_head);
    f(b_head, other.b_head);
  }

  bool same_shape(const LstmParams& o) const {
    return w_input.rows() == o.w_input.rows() && w_input.cols() == o.w_input.cols() &&
           w_recurrent.rows() == o.w_recurrent.rows() && w_recurrent.cols() == o.w_recurrent.cols() &&
           bias.size() == o.bias.size() && w_head.rows() == o.w_head.rows() &&
           w_head.cols() == o.w_head.cols() && b_head.size() == o.b_head.size();
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for_each_block([&](const char*, const auto& m) { n += static_cast<std::size_t>(m.size()); });
    return n;
  }

  bool all_finite() const {
    bool ok = true;
    for_each_block([&](const char*, const auto& m) { ok = ok && m.allFinite(); });
    return ok;
  }

  LstmParams& operator+=(const LstmParams& o) {
    zip_blocks(o, [](auto& a, const auto& b) { a += b; });
    return *this;
  }

  friend bool operator==(const LstmParams& a, const LstmParams& b) {
    return a.same_shape(b) && a.w_input == b.w_input && a.w_recurrent == b.w_recurrent &&
           a.bias == b.bias && a.w_head == b.w_head && a.b_head == b.b_head;
  }
};

/// Gradient of the loss, shaped like the parameters.
using LstmGradients = LstmParams;

/// A block of consecutive events processed as one recurrence. start is the
/// offset of the first event within its split.
struct Window {
  std::size_t start = 0;
  std::size_t length = 0;
  friend bool operator==(const Window&, const Window&) = default;
};

/// Non-overlapping windows of k events covering [0, n); the last one may be
/// shorter.
inline std::vector<Window> make_windows(std::size_t n, std::size_t k) {
  if (k < 1) throw InvalidK("window size k must be >= 1");
  std::vector<Window> out;
  out.reserve((n + k - 1) / k);
  for (std::size_t s = 0; s < n; s += k) out.push_back({s, std::min(k, n - s)});
  return out;
}

/// A split's event embeddings (one column per event) and labels.
struct EncodedSplit {
  Matrix x;                     // d x n
  std::vector<std::uint8_t> labels;  // 1 = anomalous

  std::size_t size() const { return labels.size(); }
  std::size_t anomaly_count() const {
    std::size_t n = 0;
    for (auto l : labels) n += l;
    return n;
  }
};

/// Per-event class probabilities. margin is the logit difference
/// (anomalous - normal), kept for a numerically stable loss.
struct Prediction {
  Vector prob_anomalous;
  Vector margin;

  std::size_t size() const { return static_cast<std::size_t>(prob_anomalous.size()); }
  double prob_normal(std::size_t i) const { return 1.0 - prob_anomalous(static_cast<Eigen::Index>(i)); }
};

/// Activations kept by forward() for backward().
struct ForwardCache {
  std::size_t k = 0;
  Matrix gates;   // 4h x n, post-activation
  Matrix cells;   // h x n
  Matrix tanh_c;  // h x n
  Matrix hidden;  // h x n
};

struct ClassWeights {
  double normal = 1.0;
  double anomalous = 1.0;
  friend bool operator==(const ClassWeights&, const ClassWeights&) = default;
};

/// Inverse class frequency, n / (2 n_c), with each class count floored at 1.
inline ClassWeights inverse_frequency_weights(const std::vector<std::uint8_t>& labels) {
  const auto n = static_cast<double>(labels.size());
  double anomalous = 0;
  for (auto l : labels) anomalous += l;
  const double normal = n - anomalous;
  if (labels.empty()) return {};
  return {n / (2.0 * std::max(normal, 1.0)), n / (2.0 * std::max(anomalous, 1.0))};
}

namespace detail {

using StridedMap = Eigen::Map<Matrix, 0, Eigen::OuterStride<>>;

// Step t of every window still active at t. Windows start at multiples of k,
// so these are the columns t, t + k, t + 2k, ... of an event-major matrix.
inline StridedMap step_view(Matrix& m, std::size_t k, std::size_t t, Eigen::Index active) {
  return StridedMap(m.data() + static_cast<Eigen::Index>(t) * m.rows(), m.rows(), active,
                    Eigen::OuterStride<>(static_cast<Eigen::Index>(k) * m.rows()));
}

inline Eigen::Index active_windows(std::size_t n, std::size_t k, std::size_t t) {
  const std::size_t full = n / k;
  const std::size_t rem = n % k;
  return static_cast<Eigen::Index>(full + (t < rem ? 1 : 0));
}

template <typename Derived>
inline auto sigmoid(const Eigen::ArrayBase<Derived>& z) {
  return 1.0 / (1.0 + (-z).exp());
}

inline double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

inline void check_shapes(const LstmParams& p, const EncodedSplit& s) {
  const auto h = p.w_recurrent.cols();
  if (p.w_recurrent.rows() != 4 * h || p.w_input.rows() != 4 * h || p.bias.size() != 4 * h ||
      p.w_head.rows() != 2 || p.w_head.cols() != h || p.b_head.size() != 2) {
    throw ShapeMismatch("inconsistent parameter shapes");
  }
  if (s.x.cols() != static_cast<Eigen::Index>(s.labels.size())) {
    throw ShapeMismatch("embedding/label count mismatch");
  }
  if (s.x.cols() > 0 && s.x.rows() != p.w_input.cols()) {
    throw ShapeMismatch("embedding dim " + std::to_string(s.x.rows()) + " != model dim " +
                        std::to_string(p.w_input.cols()));
  }
}

}  // namespace detail

/// Runs every window of the split with zero initial state, then the softmax
/// head on every hidden state. All windows are batched per time step.
inline std::pair<Prediction, ForwardCache> forward(const LstmParams& p, const EncodedSplit& split,
                                                   std::size_t k) {
  if (k < 1) throw InvalidK("window size k must be >= 1");
  detail::check_shapes(p, split);
  const std::size_t n = split.size();
  const Eigen::Index h = p.w_recurrent.cols();
  const auto nn = static_cast<Eigen::Index>(n);

  ForwardCache cache;
  cache.k = k;
  cache.gates.resize(4 * h, nn);
  cache.cells.resize(h, nn);
  cache.tanh_c.resize(h, nn);
  cache.hidden.resize(h, nn);
  if (n > 0) {
    cache.gates.noalias() = p.w_input * split.x;
    cache.gates.colwise() += p.bias;
  }

  const std::size_t steps = std::min(n, k);
  Matrix pre;
  for (std::size_t t = 0; t < steps; ++t) {
    const Eigen::Index a = detail::active_windows(n, k, t);
    auto z = detail::step_view(cache.gates, k, t, a);
    if (t > 0) {
      auto h_prev = detail::step_view(cache.hidden, k, t - 1, a);
      pre.noalias() = p.w_recurrent * h_prev;
      z += pre;
    }
    z.topRows(3 * h) = detail::sigmoid(z.topRows(3 * h).array()).matrix();
    z.bottomRows(h) = z.bottomRows(h).array().tanh().matrix();

    auto c = detail::step_view(cache.cells, k, t, a);
    c = (z.topRows(h).array() * z.bottomRows(h).array()).matrix();  // i * g
    if (t > 0) {
      auto c_prev = detail::step_view(cache.cells, k, t - 1, a);
      c.array() += z.middleRows(h, h).array() * c_prev.array();
    }
    auto tc = detail::step_view(cache.tanh_c, k, t, a);
    tc = c.array().tanh().matrix();
    auto hid = detail::step_view(cache.hidden, k, t, a);
    hid = (z.middleRows(2 * h, h).array() * tc.array()).matrix();
  }

  Prediction pred;
  pred.margin.resize(nn);
  pred.prob_anomalous.resize(nn);
  if (n > 0) {
    const Eigen::RowVectorXd diff = p.w_head.row(1) - p.w_head.row(0);
    pred.margin.noalias() = (diff * cache.hidden).transpose();
    pred.margin.array() += p.b_head(1) - p.b_head(0);
    pred.prob_anomalous = detail::sigmoid(pred.margin.array()).matrix();
  }
  return {std::move(pred), std::move(cache)};
}

/// Mean over events of weight(label) * -log p(true class).
inline double loss(const Prediction& pred, const std::vector<std::uint8_t>& labels,
                   const ClassWeights& w) {
  if (pred.size() != labels.size()) throw LengthMismatch("prediction/label length mismatch");
  if (labels.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double m = pred.margin(static_cast<Eigen::Index>(i));
    // -log sigmoid(m) = softplus(-m); -log(1 - sigmoid(m)) = softplus(m)
    total += labels[i] ? w.anomalous * detail::softplus(-m) : w.normal * detail::softplus(m);
  }
  return total / static_cast<double>(labels.size());
}

/// Exact gradient of loss() by backpropagation through time.
inline LstmGradients backward(const LstmParams& p, const EncodedSplit& split,
                              const Prediction& pred, ForwardCache& cache, const ClassWeights& w) {
  detail::check_shapes(p, split);
  const std::size_t n = split.size();
  const std::size_t k = cache.k;
  const Eigen::Index h = p.w_recurrent.cols();
  const auto nn = static_cast<Eigen::Index>(n);
  if (pred.size() != n || cache.hidden.cols() != nn || cache.hidden.rows() != h) {
    throw ShapeMismatch("forward cache does not match split");
  }

  LstmGradients g = LstmParams::zeros(p.embedding_dim(), p.hidden_dim());
  if (n == 0) return g;

  // d loss / d margin per event.
  Vector dm(nn);
  for (Eigen::Index i = 0; i < nn; ++i) {
    const bool y = split.labels[static_cast<std::size_t>(i)] != 0;
    dm(i) = (y ? w.anomalous : w.normal) * (pred.prob_anomalous(i) - (y ? 1.0 : 0.0));
  }
  dm /= static_cast<double>(n);

  const Vector hd = cache.hidden * dm;
  g.w_head.row(1) = hd.transpose();
  g.w_head.row(0) = -hd.transpose();
  const double sum_dm = dm.sum();
  g.b_head << -sum_dm, sum_dm;

  const Vector head_dir = (p.w_head.row(1) - p.w_head.row(0)).transpose();
  Matrix dh_head = head_dir * dm.transpose();  // h x n

  Matrix dz(4 * h, nn);
  Matrix dh_next, dc_next, dh, dc;
  const std::size_t steps = std::min(n, k);
  for (std::size_t tt = steps; tt-- > 0;) {
    const Eigen::Index a = detail::active_windows(n, k, tt);
    dh = detail::step_view(dh_head, k, tt, a);
    dc.setZero(h, a);
    if (tt + 1 < steps) {
      const Eigen::Index an = dh_next.cols();
      dh.leftCols(an) += dh_next;
      dc.leftCols(an) = dc_next;
    }
    auto z = detail::step_view(cache.gates, k, tt, a);
    auto tc = detail::step_view(cache.tanh_c, k, tt, a);
    const auto gi = z.topRows(h).array();
    const auto gf = z.middleRows(h, h).array();
    const auto go = z.middleRows(2 * h, h).array();
    const auto gg = z.bottomRows(h).array();

    dc.array() += dh.array() * go * (1.0 - tc.array().square());
    auto d = detail::step_view(dz, k, tt, a);
    d.middleRows(2 * h, h) = (dh.array() * tc.array() * go * (1.0 - go)).matrix();
    d.topRows(h) = (dc.array() * gg * gi * (1.0 - gi)).matrix();
    d.bottomRows(h) = (dc.array() * gi * (1.0 - gg.square())).matrix();
    if (tt > 0) {
      auto c_prev = detail::step_view(cache.cells, k, tt - 1, a);
      d.middleRows(h, h) = (dc.array() * c_prev.array() * gf * (1.0 - gf)).matrix();
      auto h_prev = detail::step_view(cache.hidden, k, tt - 1, a);
      g.w_recurrent.noalias() += d * h_prev.transpose();
      dc_next = (dc.array() * gf).matrix();
      dh_next.noalias() = p.w_recurrent.transpose() * d;
    } else {
      d.middleRows(h, h).setZero();
    }
  }
  g.w_input.noalias() = dz * split.x.transpose();
  g.bias = dz.rowwise().sum();
  return g;
}

struct LossAndGradient {
  double loss = 0.0;
  LstmGradients grad;
};

inline LossAndGradient loss_and_gradient(const LstmParams& p, const EncodedSplit& split,
                                         std::size_t k, const ClassWeights& w) {
  auto [pred, cache] = forward(p, split, k);
  const double l = loss(pred, split.labels, w);
  return {l, backward(p, split, pred, cache, w)};
}

/// params - lr * grads.
inline LstmParams sgd_step(const LstmParams& params, const LstmGradients& grads, double lr) {
  if (!params.same_shape(grads)) throw ShapeMismatch("gradient shape mismatch");
  LstmParams out = params;
  out.zip_blocks(grads, [lr](auto& a, const auto& b) { a -= lr * b; });
  return out;
}

/// Anomalous iff prob_anomalous >= threshold.
inline std::vector<std::uint8_t> predict(const Prediction& pred, double threshold = 0.5) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold must be in (0, 1)");
  std::vector<std::uint8_t> out(pred.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = pred.prob_anomalous(static_cast<Eigen::Index>(i)) >= threshold ? 1 : 0;
  }
  return out;
}

inline std::vector<std::uint8_t> predict(const LstmParams& p, const EncodedSplit& split, std::size_t k,
                                         double threshold = 0.5) {
  return predict(forward(p, split, k).first, threshold);
}

}  // namespace crosyslog

#endif  // CROSYSLOG_MODEL_HPP_
