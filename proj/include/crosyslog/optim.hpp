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

#ifndef CROSYSLOG_OPTIM_HPP_
#define CROSYSLOG_OPTIM_HPP_

#include <cmath>
#include <cstdint>

#include "crosyslog/model.hpp"

namespace crosyslog {

struct AdamWConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.01;
};

struct AdamWState {
  LstmParams m;
  LstmParams v;
  std::uint64_t step = 0;

  static AdamWState zeros_like(const LstmParams& p) {
    return {LstmParams::zeros(p.embedding_dim(), p.hidden_dim()),
            LstmParams::zeros(p.embedding_dim(), p.hidden_dim()), 0};
  }
};

/// One AdamW update: bias-corrected moments, weight decay applied to the
/// parameters directly (p *= 1 - lr * wd) rather than through the gradient.
inline void adamw_step(LstmParams& params, const LstmGradients& grads, AdamWState& state,
                       const AdamWConfig& cfg) {
  if (!params.same_shape(grads)) throw ShapeMismatch("gradient shape mismatch");
  if (state.m.parameter_count() == 0) state = AdamWState::zeros_like(params);
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.beta2, t);
  const double decay = 1.0 - cfg.lr * cfg.weight_decay;

  auto update = [&](auto& p, const auto& g, auto& m, auto& v) {
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
    p *= decay;
    p.array() -= cfg.lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + cfg.eps);
  };
  update(params.w_input, grads.w_input, state.m.w_input, state.v.w_input);
  update(params.w_recurrent, grads.w_recurrent, state.m.w_recurrent, state.v.w_recurrent);
  update(params.bias, grads.bias, state.m.bias, state.v.bias);
  update(params.w_head, grads.w_head, state.m.w_head, state.v.w_head);
  update(params.b_head, grads.b_head, state.m.b_head, state.v.b_head);
}

}  // namespace crosyslog

#endif  // CROSYSLOG_OPTIM_HPP_
