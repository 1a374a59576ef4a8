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

#include "ssf/nn/adam.hpp"

#include <cmath>
#include <string>

#include "ssf/common/error.hpp"

namespace ssf::nn {

void adam_update(std::span<double> values, std::span<const double> grads,
                 std::span<double> first, std::span<double> second,
                 std::uint64_t step, const AdamConfig& config) {
  if (grads.size() != values.size() || first.size() != values.size() ||
      second.size() != values.size()) {
    throw ShapeError("adam: parameter, gradient and moment sizes differ (" +
                     std::to_string(values.size()) + " vs " +
                     std::to_string(grads.size()) + ")");
  }
  const double lr = config.learning_rate;
  const double b1 = config.beta1;
  const double b2 = config.beta2;
  const double t = static_cast<double>(step);
  const double correction1 = 1.0 - std::pow(b1, t);
  const double correction2 = 1.0 - std::pow(b2, t);
  const double shrink = 1.0 - lr * config.weight_decay;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double g = grads[k];
    first[k] = b1 * first[k] + (1.0 - b1) * g;
    second[k] = b2 * second[k] + (1.0 - b2) * g * g;
    const double m_hat = first[k] / correction1;
    const double v_hat = second[k] / correction2;
    values[k] = values[k] * shrink - lr * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
}

void AdamState::step(const std::vector<Parameter*>& params) {
  if (moments_.empty()) {
    moments_.resize(params.size());
    for (std::size_t k = 0; k < params.size(); ++k) {
      moments_[k].first.assign(params[k]->value.size(), 0.0);
      moments_[k].second.assign(params[k]->value.size(), 0.0);
    }
  }
  if (moments_.size() != params.size()) {
    throw ShapeError("adam: parameter list changed between steps");
  }
  ++step_;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = *params[k];
    if (moments_[k].first.size() != p.value.size()) {
      throw ShapeError("adam: moment shape mismatch for '" + p.name + "'");
    }
    if (p.frozen) continue;
    adam_update(p.value.values(), p.value.grad(), moments_[k].first,
                moments_[k].second, step_, config_);
  }
}

}  // namespace ssf::nn
