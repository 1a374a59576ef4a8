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

#include "ssf/nn/layers.hpp"

#include <algorithm>
#include <cmath>

#include "ssf/common/error.hpp"

namespace ssf::nn {
namespace {

Tensor::Shape with_batch(std::size_t batch, const Tensor::Shape& sample) {
  Tensor::Shape s{batch};
  s.insert(s.end(), sample.begin(), sample.end());
  return s;
}

const Tensor& require_cache(const std::optional<Tensor>& cache, const char* who) {
  if (!cache) {
    throw UsageError(std::string(who) + ": backward called before forward");
  }
  return *cache;
}

void accumulate(Parameter& p, const Tensor& g) {
  auto dst = p.value.grad();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += g[k];
}

}  // namespace

void he_uniform(Tensor& weights, std::size_t fan_in, std::mt19937_64& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (double& w : weights.values()) w = dist(rng);
}

// ---------------------------------------------------------------------------
// Conv2d

Conv2d::Conv2d(std::string name, LayerSpec spec, std::mt19937_64& rng)
    : spec_(spec),
      weight_{name + ".weight",
              Tensor({spec.out, spec.in, spec.kernel, spec.kernel})},
      bias_{name + ".bias", Tensor({spec.out})} {
  if (spec_.kind != LayerKind::kConv2d) throw ShapeError("Conv2d needs a conv2d spec");
  spec_.validate();
  he_uniform(weight_.value, spec.in * spec.kernel * spec.kernel, rng);
}

Tensor Conv2d::forward(const Tensor& input) {
  cached_input_ = input;
  return infer(input);
}

Tensor Conv2d::infer(const Tensor& input) const {
  return conv2d_forward(input, weight_.value, bias_.value, spec_);
}

Tensor Conv2d::backward(const Tensor& grad_output) {
  const Tensor& input = require_cache(cached_input_, "conv2d");
  ParamGrads g = conv2d_backward(grad_output, input, weight_.value, spec_);
  accumulate(weight_, g.weights);
  accumulate(bias_, g.bias);
  return std::move(g.input);
}

Tensor::Shape Conv2d::output_shape(const Tensor::Shape& input) const {
  if (input.size() != 4) throw ShapeError("conv2d expects rank-4 input");
  return {input[0], spec_.out,
          conv_output_size(input[2], spec_.kernel, spec_.stride, spec_.padding),
          conv_output_size(input[3], spec_.kernel, spec_.stride, spec_.padding)};
}

std::uint64_t Conv2d::flops(const Tensor::Shape& sample_shape) const {
  const auto out = output_shape(with_batch(1, sample_shape));
  return conv2d_flops(spec_, out[2], out[3]);
}

// ---------------------------------------------------------------------------
// Conv1d

Conv1d::Conv1d(std::string name, LayerSpec spec, std::mt19937_64& rng)
    : spec_(spec),
      weight_{name + ".weight", Tensor({spec.out, spec.in, spec.kernel})},
      bias_{name + ".bias", Tensor({spec.out})} {
  if (spec_.kind != LayerKind::kConv1d) throw ShapeError("Conv1d needs a conv1d spec");
  spec_.validate();
  he_uniform(weight_.value, spec.in * spec.kernel, rng);
}

Tensor Conv1d::forward(const Tensor& input) {
  cached_input_ = input;
  return infer(input);
}

Tensor Conv1d::infer(const Tensor& input) const {
  return conv1d_forward(input, weight_.value, bias_.value, spec_);
}

Tensor Conv1d::backward(const Tensor& grad_output) {
  const Tensor& input = require_cache(cached_input_, "conv1d");
  ParamGrads g = conv1d_backward(grad_output, input, weight_.value, spec_);
  accumulate(weight_, g.weights);
  accumulate(bias_, g.bias);
  return std::move(g.input);
}

Tensor::Shape Conv1d::output_shape(const Tensor::Shape& input) const {
  if (input.size() != 3) throw ShapeError("conv1d expects rank-3 input");
  return {input[0], spec_.out,
          conv_output_size(input[2], spec_.kernel, spec_.stride, spec_.padding)};
}

std::uint64_t Conv1d::flops(const Tensor::Shape& sample_shape) const {
  const auto out = output_shape(with_batch(1, sample_shape));
  return conv2d_flops(spec_, 1, out[2]);
}

// ---------------------------------------------------------------------------
// Linear

Linear::Linear(std::string name, std::size_t in, std::size_t out,
               std::mt19937_64& rng)
    : spec_(LayerSpec::fully_connected(in, out)),
      weight_{name + ".weight", Tensor({out, in})},
      bias_{name + ".bias", Tensor({out})} {
  spec_.validate();
  he_uniform(weight_.value, in, rng);
}

Tensor Linear::forward(const Tensor& input) {
  cached_input_ = input;
  return infer(input);
}

Tensor Linear::infer(const Tensor& input) const {
  return fc_forward(input, weight_.value, bias_.value);
}

Tensor Linear::backward(const Tensor& grad_output) {
  const Tensor& input = require_cache(cached_input_, "fully_connected");
  ParamGrads g = fc_backward(grad_output, input, weight_.value);
  accumulate(weight_, g.weights);
  accumulate(bias_, g.bias);
  return std::move(g.input);
}

Tensor::Shape Linear::output_shape(const Tensor::Shape& input) const {
  if (input.empty()) throw ShapeError("fully_connected expects a batch axis");
  const std::size_t features = shape_size(input) / std::max<std::size_t>(input[0], 1);
  if (input[0] != 0 && features != spec_.in) {
    throw ShapeError("fully_connected expects " + std::to_string(spec_.in) +
                     " features, got " + std::to_string(features));
  }
  return {input[0], spec_.out};
}

std::uint64_t Linear::flops(const Tensor::Shape&) const { return fc_flops(spec_); }

// ---------------------------------------------------------------------------
// Relu / Flatten

Tensor Relu::forward(const Tensor& input) {
  cached_input_ = input;
  return relu_forward(input);
}

Tensor Relu::backward(const Tensor& grad_output) {
  return relu_backward(grad_output, require_cache(cached_input_, "relu"));
}

Tensor Flatten::forward(const Tensor& input) {
  cached_shape_ = input.shape();
  return infer(input);
}

Tensor Flatten::infer(const Tensor& input) const {
  return input.reshaped(output_shape(input.shape()));
}

Tensor Flatten::backward(const Tensor& grad_output) {
  if (!cached_shape_) throw UsageError("flatten: backward called before forward");
  return grad_output.reshaped(*cached_shape_);
}

Tensor::Shape Flatten::output_shape(const Tensor::Shape& input) const {
  if (input.empty()) throw ShapeError("flatten expects a batch axis");
  const std::size_t batch = input[0];
  return {batch, batch == 0 ? 0 : shape_size(input) / batch};
}

// ---------------------------------------------------------------------------
// Sequential

Sequential& Sequential::add(std::unique_ptr<Layer> layer) {
  layers_.push_back(std::move(layer));
  return *this;
}

Tensor Sequential::forward(const Tensor& input) {
  Tensor x = input;
  for (auto& layer : layers_) x = layer->forward(x);
  return x;
}

Tensor Sequential::backward(const Tensor& grad_output) {
  Tensor g = grad_output;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) {
    g = (*it)->backward(g);
  }
  return g;
}

Tensor Sequential::infer(const Tensor& input) const {
  Tensor x = input;
  for (const auto& layer : layers_) x = layer->infer(x);
  return x;
}

std::vector<Parameter*> Sequential::parameters() {
  std::vector<Parameter*> out;
  for (auto& layer : layers_) {
    auto p = layer->parameters();
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

Tensor::Shape Sequential::output_shape(const Tensor::Shape& input) const {
  Tensor::Shape s = input;
  for (const auto& layer : layers_) s = layer->output_shape(s);
  return s;
}

std::uint64_t Sequential::flops(const Tensor::Shape& sample_shape) const {
  std::uint64_t total = 0;
  Tensor::Shape s = with_batch(1, sample_shape);
  for (const auto& layer : layers_) {
    const Tensor::Shape sample(s.begin() + 1, s.end());
    total += layer->flops(sample);
    s = layer->output_shape(s);
  }
  return total;
}

std::size_t parameter_count(const std::vector<Parameter*>& params) {
  std::size_t n = 0;
  for (const Parameter* p : params) n += p->value.size();
  return n;
}

}  // namespace ssf::nn
