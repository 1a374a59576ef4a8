/* Copyright 2026 The SSF Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef SSF_NN_ADAM_HPP_
#define SSF_NN_ADAM_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ssf/nn/layers.hpp"

namespace ssf::nn {

struct AdamConfig {
  double learning_rate = 1e-4;
  double weight_decay = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Bias-corrected Adam with decoupled weight decay: every trainable value is
// first shrunk by (1 - lr * wd), then moved by -lr * m_hat / (sqrt(v_hat) + eps).
class AdamState {
 public:
  explicit AdamState(AdamConfig config = {}) : config_(config) {}

  const AdamConfig& config() const { return config_; }
  std::uint64_t step_count() const { return step_; }

  // One update over `params` using their gradient slots. The parameter list
  // must be the same (same order and shapes) on every call. Frozen
  // parameters are left untouched.
  void step(const std::vector<Parameter*>& params);

 private:
  struct Moments {
    std::vector<double> first;
    std::vector<double> second;
  };

  AdamConfig config_;
  std::uint64_t step_ = 0;
  std::vector<Moments> moments_;
};

// Raw single-block update for step number `step` (1-based).
void adam_update(std::span<double> values, std::span<const double> grads,
                 std::span<double> first, std::span<double> second,
                 std::uint64_t step, const AdamConfig& config);

inline void adam_step(const std::vector<Parameter*>& params, AdamState& state) {
  state.step(params);
}

}  // namespace ssf::nn

#endif  // SSF_NN_ADAM_HPP_
