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

#ifndef CROSYSLOG_META_HPP_
#define CROSYSLOG_META_HPP_

#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "crosyslog/eval.hpp"
#include "crosyslog/model.hpp"
#include "crosyslog/optim.hpp"

namespace crosyslog {

enum class Weighting { kInverseFrequency, kUniform };
enum class OuterOptimizer { kAdamW, kSgd };

struct MetaConfig {
  double alpha = 0.01;             // task-level (inner) learning rate
  double beta = 0.001;             // meta learning rate
  std::size_t inner_steps = 5;     // adaptation steps during meta-training
  std::size_t test_inner_steps = 5;  // fine-tuning steps during meta-testing
  std::size_t meta_epochs = 30;
  std::size_t k = 100;
  double threshold = 0.5;
  std::uint64_t seed = 0;
  Weighting weighting = Weighting::kInverseFrequency;
  OuterOptimizer outer = OuterOptimizer::kAdamW;
  /// Fine-tuning at meta-test time uses plain descent unless this is set.
  bool adamw_fine_tune = false;
  double weight_decay = 0.01;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  /// Worker threads for per-task gradients; results are summed in task order.
  std::size_t threads = 1;

  void validate() const {
    auto finite_pos = [](double v) { return std::isfinite(v) && v > 0; };
    if (!finite_pos(alpha) || !finite_pos(beta)) throw ConfigError("alpha and beta must be finite and > 0");
    if (meta_epochs < 1) throw ConfigError("meta_epochs must be >= 1");
    if (k < 1) throw InvalidK("window size k must be >= 1");
    if (!(threshold > 0 && threshold < 1)) throw ConfigError("threshold must be in (0, 1)");
    if (threads < 1) throw ConfigError("threads must be >= 1");
  }

  AdamWConfig adamw(double lr) const { return {lr, adam_beta1, adam_beta2, adam_eps, weight_decay}; }
};

/// A task whose splits have been embedded.
struct EncodedTask {
  std::string task_id;
  std::string system_id;
  EncodedSplit support;
  EncodedSplit query;
};

inline ClassWeights class_weights(const EncodedSplit& split, Weighting mode) {
  return mode == Weighting::kUniform ? ClassWeights{} : inverse_frequency_weights(split.labels);
}

/// theta after `steps` full-batch descent steps theta <- theta - alpha * grad
/// on the support split.
inline LstmParams inner_adapt(const LstmParams& theta, const EncodedSplit& support,
                              const MetaConfig& cfg, std::size_t steps) {
  const ClassWeights w = class_weights(support, cfg.weighting);
  LstmParams adapted = theta;
  for (std::size_t s = 0; s < steps; ++s) {
    adapted = sgd_step(adapted, loss_and_gradient(adapted, support, cfg.k, w).grad, cfg.alpha);
  }
  return adapted;
}

inline LstmParams inner_adapt(const LstmParams& theta, const EncodedSplit& support, const MetaConfig& cfg) {
  return inner_adapt(theta, support, cfg, cfg.inner_steps);
}

struct TaskGradient {
  double query_loss = 0.0;
  LstmGradients grad;
};

/// First-order meta-gradient of one task: the query-loss gradient evaluated
/// at the adapted parameters.
inline TaskGradient task_meta_gradient(const LstmParams& theta, const EncodedTask& task,
                                       const MetaConfig& cfg) {
  const LstmParams adapted = inner_adapt(theta, task.support, cfg);
  auto lg = loss_and_gradient(adapted, task.query, cfg.k, class_weights(task.query, cfg.weighting));
  return {lg.loss, std::move(lg.grad)};
}

struct MetaGradient {
  LstmGradients sum;
  std::vector<double> query_losses;
};

/// Sum over tasks (in list order) of the first-order task gradients.
inline MetaGradient meta_gradient(const LstmParams& theta, const std::vector<EncodedTask>& tasks,
                                  const MetaConfig& cfg) {
  std::vector<TaskGradient> parts(tasks.size());
  if (cfg.threads > 1 && tasks.size() > 1) {
    std::vector<std::thread> pool;
    const std::size_t workers = std::min(cfg.threads, tasks.size());
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < tasks.size(); i += workers) parts[i] = task_meta_gradient(theta, tasks[i], cfg);
      });
    }
    for (auto& t : pool) t.join();
  } else {
    for (std::size_t i = 0; i < tasks.size(); ++i) parts[i] = task_meta_gradient(theta, tasks[i], cfg);
  }
  MetaGradient out{LstmParams::zeros(theta.embedding_dim(), theta.hidden_dim()), {}};
  for (auto& p : parts) {
    out.sum += p.grad;
    out.query_losses.push_back(p.query_loss);
  }
  return out;
}

struct EpochTelemetry {
  std::size_t epoch = 0;
  std::vector<double> query_losses;  // per task, at the adapted parameters
};

using TelemetrySink = std::function<void(const EpochTelemetry&)>;

/// First-order MAML. Each epoch adapts theta to every task's support split,
/// takes the query-loss gradient at the adapted parameters, and applies the
/// summed gradients to theta with step size beta.
inline LstmParams meta_train(const LstmParams& theta0, const std::vector<EncodedTask>& tasks,
                             const MetaConfig& cfg, const TelemetrySink& sink = {}) {
  cfg.validate();
  if (tasks.empty()) throw NoTasks("meta_train needs at least one task");
  LstmParams theta = theta0;
  AdamWState state = AdamWState::zeros_like(theta);
  for (std::size_t epoch = 0; epoch < cfg.meta_epochs; ++epoch) {
    MetaGradient mg = meta_gradient(theta, tasks, cfg);
    if (cfg.outer == OuterOptimizer::kAdamW) {
      adamw_step(theta, mg.sum, state, cfg.adamw(cfg.beta));
    } else {
      theta = sgd_step(theta, mg.sum, cfg.beta);
    }
    if (sink) sink({epoch, std::move(mg.query_losses)});
  }
  return theta;
}

/// Clones theta_star, fine-tunes it on the task's support split and
/// evaluates every query event. theta_star is left untouched.
inline DetectionReport meta_test(const LstmParams& theta_star, const EncodedTask& task, const MetaConfig& cfg) {
  cfg.validate();
  auto [tuned, train_s] = timed([&] {
    if (!cfg.adamw_fine_tune) return inner_adapt(theta_star, task.support, cfg, cfg.test_inner_steps);
    LstmParams p = theta_star;
    AdamWState st = AdamWState::zeros_like(p);
    const ClassWeights w = class_weights(task.support, cfg.weighting);
    for (std::size_t s = 0; s < cfg.test_inner_steps; ++s) {
      adamw_step(p, loss_and_gradient(p, task.support, cfg.k, w).grad, st, cfg.adamw(cfg.alpha));
    }
    return p;
  });
  auto [pred, test_s] = timed([&] { return predict(tuned, task.query, cfg.k, cfg.threshold); });
  DetectionReport r = make_report(task.task_id, std::move(pred), task.query.labels);
  r.train_time_s = train_s;
  r.test_time_s = test_s;
  return r;
}

}  // namespace crosyslog

#endif  // CROSYSLOG_META_HPP_
