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

#ifndef SSF_NN_LAYERS_HPP_
#define SSF_NN_LAYERS_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ssf/nn/ops.hpp"
#include "ssf/nn/tensor.hpp"

namespace ssf::nn {

// Trainable block. Frozen parameters still receive gradients but are skipped
// by the optimizer.
struct Parameter {
  std::string name;
  Tensor value;
  bool frozen = false;
};

// He-uniform initialization: U(-sqrt(6/fan_in), sqrt(6/fan_in)).
void he_uniform(Tensor& weights, std::size_t fan_in, std::mt19937_64& rng);

class Layer {
 public:
  virtual ~Layer() = default;

  // Training path: caches what backward needs.
  virtual Tensor forward(const Tensor& input) = 0;
  // Accumulates parameter gradients, returns the input gradient. Throws
  // UsageError when forward has not run.
  virtual Tensor backward(const Tensor& grad_output) = 0;
  // Stateless inference path, safe to call concurrently.
  virtual Tensor infer(const Tensor& input) const = 0;

  virtual std::vector<Parameter*> parameters() { return {}; }
  virtual LayerSpec spec() const = 0;
  virtual Tensor::Shape output_shape(const Tensor::Shape& input) const = 0;
  // Analytic forward FLOPs for one sample of the given (batch-free) shape.
  virtual std::uint64_t flops(const Tensor::Shape& sample_shape) const {
    (void)sample_shape;
    return 0;
  }
};

class Conv2d final : public Layer {
 public:
  Conv2d(std::string name, LayerSpec spec, std::mt19937_64& rng);

  Tensor forward(const Tensor& input) override;
  Tensor backward(const Tensor& grad_output) override;
  Tensor infer(const Tensor& input) const override;
  std::vector<Parameter*> parameters() override { return {&weight_, &bias_}; }
  LayerSpec spec() const override { return spec_; }
  Tensor::Shape output_shape(const Tensor::Shape& input) const override;
  std::uint64_t flops(const Tensor::Shape& sample_shape) const override;

 private:
  LayerSpec spec_;
  Parameter weight_;
  Parameter bias_;
  std::optional<Tensor> cached_input_;
};

class Conv1d final : public Layer {
 public:
  Conv1d(std::string name, LayerSpec spec, std::mt19937_64& rng);

  Tensor forward(const Tensor& input) override;
  Tensor backward(const Tensor& grad_output) override;
  Tensor infer(const Tensor& input) const override;
  std::vector<Parameter*> parameters() override { return {&weight_, &bias_}; }
  LayerSpec spec() const override { return spec_; }
  Tensor::Shape output_shape(const Tensor::Shape& input) const override;
  std::uint64_t flops(const Tensor::Shape& sample_shape) const override;

 private:
  LayerSpec spec_;
  Parameter weight_;
  Parameter bias_;
  std::optional<Tensor> cached_input_;
};

class Linear final : public Layer {
 public:
  Linear(std::string name, std::size_t in, std::size_t out,
         std::mt19937_64& rng);

  Tensor forward(const Tensor& input) override;
  Tensor backward(const Tensor& grad_output) override;
  Tensor infer(const Tensor& input) const override;
  std::vector<Parameter*> parameters() override { return {&weight_, &bias_}; }
  LayerSpec spec() const override { return spec_; }
  Tensor::Shape output_shape(const Tensor::Shape& input) const override;
  std::uint64_t flops(const Tensor::Shape& sample_shape) const override;

 private:
  LayerSpec spec_;
  Parameter weight_;
  Parameter bias_;
  std::optional<Tensor> cached_input_;
};

class Relu final : public Layer {
 public:
  Tensor forward(const Tensor& input) override;
  Tensor backward(const Tensor& grad_output) override;
  Tensor infer(const Tensor& input) const override { return relu_forward(input); }
  LayerSpec spec() const override { return {LayerKind::kRelu}; }
  Tensor::Shape output_shape(const Tensor::Shape& input) const override {
    return input;
  }

 private:
  std::optional<Tensor> cached_input_;
};

// [B, ...] -> [B, prod(...)]
class Flatten final : public Layer {
 public:
  Tensor forward(const Tensor& input) override;
  Tensor backward(const Tensor& grad_output) override;
  Tensor infer(const Tensor& input) const override;
  LayerSpec spec() const override { return {LayerKind::kFlatten}; }
  Tensor::Shape output_shape(const Tensor::Shape& input) const override;

 private:
  std::optional<Tensor::Shape> cached_shape_;
};

class Sequential {
 public:
  Sequential() = default;
  Sequential(Sequential&&) = default;
  Sequential& operator=(Sequential&&) = default;

  Sequential& add(std::unique_ptr<Layer> layer);
  template <typename L, typename... Args>
  Sequential& emplace(Args&&... args) {
    return add(std::make_unique<L>(std::forward<Args>(args)...));
  }

  Tensor forward(const Tensor& input);
  Tensor backward(const Tensor& grad_output);
  Tensor infer(const Tensor& input) const;

  std::vector<Parameter*> parameters();
  std::size_t size() const { return layers_.size(); }
  Layer& layer(std::size_t k) { return *layers_[k]; }
  const Layer& layer(std::size_t k) const { return *layers_[k]; }
  Tensor::Shape output_shape(const Tensor::Shape& input) const;
  // Sum of per-layer analytic FLOPs for one sample.
  std::uint64_t flops(const Tensor::Shape& sample_shape) const;

 private:
  std::vector<std::unique_ptr<Layer>> layers_;
};

std::size_t parameter_count(const std::vector<Parameter*>& params);

}  // namespace ssf::nn

#endif  // SSF_NN_LAYERS_HPP_
