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

#ifndef SSF_NN_OPS_HPP_
#define SSF_NN_OPS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "ssf/nn/tensor.hpp"

namespace ssf::nn {

enum class LayerKind { kConv2d, kConv1d, kFullyConnected, kRelu, kFlatten };

std::string to_string(LayerKind kind);

// Static description of one layer. For convolutions in/out are channels,
// for fully-connected layers they are features.
struct LayerSpec {
  LayerKind kind = LayerKind::kRelu;
  std::size_t in = 0;
  std::size_t out = 0;
  std::size_t kernel = 0;
  std::size_t stride = 1;
  std::size_t padding = 0;

  static LayerSpec conv2d(std::size_t in, std::size_t out, std::size_t kernel,
                          std::size_t stride, std::size_t padding) {
    return {LayerKind::kConv2d, in, out, kernel, stride, padding};
  }
  static LayerSpec conv1d(std::size_t in, std::size_t out, std::size_t kernel,
                          std::size_t stride, std::size_t padding) {
    return {LayerKind::kConv1d, in, out, kernel, stride, padding};
  }
  static LayerSpec fully_connected(std::size_t in, std::size_t out) {
    return {LayerKind::kFullyConnected, in, out, 0, 1, 0};
  }

  // Throws ShapeError on zero sizes or stride.
  void validate() const;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

// floor((dim + 2*pad - kernel) / stride) + 1; throws if the window does not fit.
std::size_t conv_output_size(std::size_t dim, std::size_t kernel,
                             std::size_t stride, std::size_t padding);

struct ParamGrads {
  Tensor input;
  Tensor weights;
  Tensor bias;
};

// Cross-correlation with zero padding.
// input [B, Cin, H, W], weights [Cout, Cin, k, k], bias [Cout].
Tensor conv2d_forward(const Tensor& input, const Tensor& weights,
                      const Tensor& bias, const LayerSpec& spec);
ParamGrads conv2d_backward(const Tensor& grad_output, const Tensor& input,
                           const Tensor& weights, const LayerSpec& spec);

// input [B, Cin, L], weights [Cout, Cin, k], bias [Cout].
Tensor conv1d_forward(const Tensor& input, const Tensor& weights,
                      const Tensor& bias, const LayerSpec& spec);
ParamGrads conv1d_backward(const Tensor& grad_output, const Tensor& input,
                           const Tensor& weights, const LayerSpec& spec);

// y = W x + b per batch row. input [B, ...] is flattened past the batch
// axis; weights [out, in]; bias [out]; output [B, out].
Tensor fc_forward(const Tensor& input, const Tensor& weights,
                  const Tensor& bias);
ParamGrads fc_backward(const Tensor& grad_output, const Tensor& input,
                       const Tensor& weights);

Tensor relu_forward(const Tensor& input);
// Passes the gradient where input > 0; zero elsewhere, including at 0.
Tensor relu_backward(const Tensor& grad_output, const Tensor& input);

struct LossResult {
  double loss = 0.0;   // mean over the batch
  Tensor grad_logits;  // d(mean loss)/d(logits)
};

// logits [B, C]; labels.size() == B, each in [0, C).
LossResult softmax_cross_entropy(const Tensor& logits,
                                 std::span<const std::size_t> labels);

// Analytic forward FLOPs for a 1-sample pass, multiply-accumulate = 2 FLOPs.
std::uint64_t conv2d_flops(const LayerSpec& spec, std::size_t out_h,
                           std::size_t out_w);
std::uint64_t fc_flops(const LayerSpec& spec);

}  // namespace ssf::nn

#endif  // SSF_NN_OPS_HPP_
