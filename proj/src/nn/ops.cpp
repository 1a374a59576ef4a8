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

#include "ssf/nn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ssf/common/error.hpp"
#include "ssf/nn/kernels.hpp"

namespace ssf::nn {
namespace {

struct Geometry {
  std::size_t batch, in_c, in_h, in_w;
  std::size_t out_c, k_h, k_w, s_h, s_w, p_h, p_w;
  std::size_t out_h, out_w;

  std::size_t patch() const { return in_c * k_h * k_w; }
  std::size_t plane() const { return out_h * out_w; }
  std::size_t columns() const { return batch * plane(); }
};

void expect_shape(const Tensor& t, const Tensor::Shape& expected,
                  const char* what) {
  if (t.shape() != expected) {
    throw ShapeError(std::string(what) + ": expected shape " +
                     shape_to_string(expected) + ", got " + t.shape_string());
  }
}

Geometry make_geometry(const Tensor& input, const Tensor& weights,
                       const Tensor& bias, const LayerSpec& spec, bool one_d) {
  spec.validate();
  Geometry g{};
  if (one_d) {
    if (input.rank() != 3) {
      throw ShapeError("conv1d input must be [B, C, L], got " + input.shape_string());
    }
    g.batch = input.dim(0);
    g.in_c = input.dim(1);
    g.in_h = 1;
    g.in_w = input.dim(2);
    g.k_h = 1;
    g.s_h = 1;
    g.p_h = 0;
    expect_shape(weights, {spec.out, spec.in, spec.kernel}, "conv1d weights");
  } else {
    if (input.rank() != 4) {
      throw ShapeError("conv2d input must be [B, C, H, W], got " + input.shape_string());
    }
    g.batch = input.dim(0);
    g.in_c = input.dim(1);
    g.in_h = input.dim(2);
    g.in_w = input.dim(3);
    g.k_h = spec.kernel;
    g.s_h = spec.stride;
    g.p_h = spec.padding;
    expect_shape(weights, {spec.out, spec.in, spec.kernel, spec.kernel},
                 "conv2d weights");
  }
  if (g.in_c != spec.in) {
    throw ShapeError("input has " + std::to_string(g.in_c) +
                     " channels, layer expects " + std::to_string(spec.in));
  }
  expect_shape(bias, {spec.out}, "conv bias");
  g.out_c = spec.out;
  g.k_w = spec.kernel;
  g.s_w = spec.stride;
  g.p_w = spec.padding;
  g.out_h = conv_output_size(g.in_h, g.k_h, g.s_h, g.p_h);
  g.out_w = conv_output_size(g.in_w, g.k_w, g.s_w, g.p_w);
  return g;
}

// col[patch][batch * plane]
void im2col(const double* in, const Geometry& g, double* col) {
  const std::size_t n_cols = g.columns();
  for (std::size_t c = 0; c < g.in_c; ++c) {
    for (std::size_t ky = 0; ky < g.k_h; ++ky) {
      for (std::size_t kx = 0; kx < g.k_w; ++kx) {
        double* row = col + ((c * g.k_h + ky) * g.k_w + kx) * n_cols;
        for (std::size_t b = 0; b < g.batch; ++b) {
          const double* src = in + (b * g.in_c + c) * g.in_h * g.in_w;
          double* dst = row + b * g.plane();
          for (std::size_t oy = 0; oy < g.out_h; ++oy) {
            const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy * g.s_h + ky) -
                                      static_cast<std::ptrdiff_t>(g.p_h);
            const bool row_ok = iy >= 0 && iy < static_cast<std::ptrdiff_t>(g.in_h);
            for (std::size_t ox = 0; ox < g.out_w; ++ox) {
              const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox * g.s_w + kx) -
                                        static_cast<std::ptrdiff_t>(g.p_w);
              const bool ok = row_ok && ix >= 0 &&
                              ix < static_cast<std::ptrdiff_t>(g.in_w);
              dst[oy * g.out_w + ox] =
                  ok ? src[static_cast<std::size_t>(iy) * g.in_w +
                           static_cast<std::size_t>(ix)]
                     : 0.0;
            }
          }
        }
      }
    }
  }
}

// Scatter-add of col back into an input-shaped gradient.
void col2im(const double* col, const Geometry& g, double* grad_in) {
  const std::size_t n_cols = g.columns();
  for (std::size_t c = 0; c < g.in_c; ++c) {
    for (std::size_t ky = 0; ky < g.k_h; ++ky) {
      for (std::size_t kx = 0; kx < g.k_w; ++kx) {
        const double* row = col + ((c * g.k_h + ky) * g.k_w + kx) * n_cols;
        for (std::size_t b = 0; b < g.batch; ++b) {
          double* dst = grad_in + (b * g.in_c + c) * g.in_h * g.in_w;
          const double* src = row + b * g.plane();
          for (std::size_t oy = 0; oy < g.out_h; ++oy) {
            const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy * g.s_h + ky) -
                                      static_cast<std::ptrdiff_t>(g.p_h);
            if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.in_h)) continue;
            for (std::size_t ox = 0; ox < g.out_w; ++ox) {
              const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox * g.s_w + kx) -
                                        static_cast<std::ptrdiff_t>(g.p_w);
              if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(g.in_w)) continue;
              dst[static_cast<std::size_t>(iy) * g.in_w + static_cast<std::size_t>(ix)] +=
                  src[oy * g.out_w + ox];
            }
          }
        }
      }
    }
  }
}

Tensor::Shape output_shape(const Geometry& g, bool one_d) {
  if (one_d) return {g.batch, g.out_c, g.out_w};
  return {g.batch, g.out_c, g.out_h, g.out_w};
}

Tensor conv_forward(const Tensor& input, const Tensor& weights,
                    const Tensor& bias, const Geometry& g, bool one_d) {
  const std::size_t n_cols = g.columns();
  std::vector<double> col(g.patch() * n_cols);
  im2col(input.data(), g, col.data());
  std::vector<double> tmp(g.out_c * n_cols, 0.0);
  gemm_nn(g.out_c, n_cols, g.patch(), weights.data(), col.data(), tmp.data());

  Tensor out(output_shape(g, one_d));
  const std::size_t plane = g.plane();
  for (std::size_t b = 0; b < g.batch; ++b) {
    for (std::size_t o = 0; o < g.out_c; ++o) {
      const double* src = tmp.data() + o * n_cols + b * plane;
      double* dst = out.data() + (b * g.out_c + o) * plane;
      const double bo = bias[o];
      for (std::size_t p = 0; p < plane; ++p) dst[p] = src[p] + bo;
    }
  }
  return out;
}

ParamGrads conv_backward(const Tensor& grad_output, const Tensor& input,
                         const Tensor& weights, const Geometry& g, bool one_d) {
  expect_shape(grad_output, output_shape(g, one_d), "conv grad_output");
  const std::size_t n_cols = g.columns();
  const std::size_t plane = g.plane();
  const std::size_t patch = g.patch();

  // grad_output as [Cout][B * plane]
  std::vector<double> go(g.out_c * n_cols);
  for (std::size_t b = 0; b < g.batch; ++b) {
    for (std::size_t o = 0; o < g.out_c; ++o) {
      std::copy_n(grad_output.data() + (b * g.out_c + o) * plane, plane,
                  go.data() + o * n_cols + b * plane);
    }
  }

  ParamGrads grads{Tensor(input.shape()), Tensor(weights.shape()),
                   Tensor({g.out_c})};
  for (std::size_t o = 0; o < g.out_c; ++o) {
    double s = 0.0;
    const double* row = go.data() + o * n_cols;
    for (std::size_t n = 0; n < n_cols; ++n) s += row[n];
    grads.bias[o] = s;
  }

  std::vector<double> col(patch * n_cols);
  im2col(input.data(), g, col.data());
  std::vector<double> col_t(n_cols * patch);
  transpose(patch, n_cols, col.data(), col_t.data());
  gemm_nn(g.out_c, patch, n_cols, go.data(), col_t.data(), grads.weights.data());

  std::vector<double> w_t(patch * g.out_c);
  transpose(g.out_c, patch, weights.data(), w_t.data());
  std::fill(col.begin(), col.end(), 0.0);
  gemm_nn(patch, n_cols, g.out_c, w_t.data(), go.data(), col.data());
  col2im(col.data(), g, grads.input.data());
  return grads;
}

std::size_t feature_width(const Tensor& input) {
  if (input.rank() < 2) {
    throw ShapeError("fully-connected input needs a batch axis, got " +
                     input.shape_string());
  }
  return input.size() / input.dim(0);
}

}  // namespace

std::string to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::kConv2d: return "conv2d";
    case LayerKind::kConv1d: return "conv1d";
    case LayerKind::kFullyConnected: return "fully_connected";
    case LayerKind::kRelu: return "relu";
    case LayerKind::kFlatten: return "flatten";
  }
  return "unknown";
}

void LayerSpec::validate() const {
  switch (kind) {
    case LayerKind::kConv2d:
    case LayerKind::kConv1d:
      if (in == 0 || out == 0 || kernel == 0 || stride == 0) {
        throw ShapeError(to_string(kind) +
                         ": channels, kernel and stride must be positive");
      }
      break;
    case LayerKind::kFullyConnected:
      if (in == 0 || out == 0) {
        throw ShapeError("fully_connected: features must be positive");
      }
      break;
    case LayerKind::kRelu:
    case LayerKind::kFlatten:
      break;
  }
}

std::size_t conv_output_size(std::size_t dim, std::size_t kernel,
                             std::size_t stride, std::size_t padding) {
  if (stride == 0) throw ShapeError("stride must be positive");
  if (dim + 2 * padding < kernel) {
    throw ShapeError("kernel " + std::to_string(kernel) +
                     " larger than padded input " +
                     std::to_string(dim + 2 * padding));
  }
  return (dim + 2 * padding - kernel) / stride + 1;
}

Tensor conv2d_forward(const Tensor& input, const Tensor& weights,
                      const Tensor& bias, const LayerSpec& spec) {
  return conv_forward(input, weights, bias,
                      make_geometry(input, weights, bias, spec, false), false);
}

ParamGrads conv2d_backward(const Tensor& grad_output, const Tensor& input,
                           const Tensor& weights, const LayerSpec& spec) {
  const Tensor bias({spec.out});
  return conv_backward(grad_output, input, weights,
                       make_geometry(input, weights, bias, spec, false), false);
}

Tensor conv1d_forward(const Tensor& input, const Tensor& weights,
                      const Tensor& bias, const LayerSpec& spec) {
  return conv_forward(input, weights, bias,
                      make_geometry(input, weights, bias, spec, true), true);
}

ParamGrads conv1d_backward(const Tensor& grad_output, const Tensor& input,
                           const Tensor& weights, const LayerSpec& spec) {
  const Tensor bias({spec.out});
  return conv_backward(grad_output, input, weights,
                       make_geometry(input, weights, bias, spec, true), true);
}

Tensor fc_forward(const Tensor& input, const Tensor& weights,
                  const Tensor& bias) {
  const std::size_t in = feature_width(input);
  const std::size_t batch = input.dim(0);
  if (weights.rank() != 2 || weights.dim(1) != in) {
    throw ShapeError("fully_connected weights " + weights.shape_string() +
                     " incompatible with " + std::to_string(in) +
                     " input features");
  }
  const std::size_t out = weights.dim(0);
  expect_shape(bias, {out}, "fully_connected bias");

  std::vector<double> x_t(in * batch);
  transpose(batch, in, input.data(), x_t.data());
  std::vector<double> y_t(out * batch, 0.0);
  gemm_nn(out, batch, in, weights.data(), x_t.data(), y_t.data());
  Tensor y({batch, out});
  transpose(out, batch, y_t.data(), y.data());
  for (std::size_t b = 0; b < batch; ++b) {
    double* row = y.data() + b * out;
    for (std::size_t o = 0; o < out; ++o) row[o] += bias[o];
  }
  return y;
}

ParamGrads fc_backward(const Tensor& grad_output, const Tensor& input,
                       const Tensor& weights) {
  const std::size_t in = feature_width(input);
  const std::size_t batch = input.dim(0);
  if (weights.rank() != 2 || weights.dim(1) != in) {
    throw ShapeError("fully_connected weights " + weights.shape_string() +
                     " incompatible with " + std::to_string(in) +
                     " input features");
  }
  const std::size_t out = weights.dim(0);
  expect_shape(grad_output, {batch, out}, "fully_connected grad_output");

  ParamGrads grads{Tensor(input.shape()), Tensor(weights.shape()), Tensor({out})};
  for (std::size_t b = 0; b < batch; ++b) {
    const double* row = grad_output.data() + b * out;
    for (std::size_t o = 0; o < out; ++o) grads.bias[o] += row[o];
  }
  std::vector<double> g_t(out * batch);
  transpose(batch, out, grad_output.data(), g_t.data());
  gemm_nn(out, in, batch, g_t.data(), input.data(), grads.weights.data());
  gemm_nn(batch, in, out, grad_output.data(), weights.data(), grads.input.data());
  return grads;
}

Tensor relu_forward(const Tensor& input) {
  Tensor out(input.shape());
  for (std::size_t k = 0; k < input.size(); ++k) {
    out[k] = input[k] > 0.0 ? input[k] : 0.0;
  }
  return out;
}

Tensor relu_backward(const Tensor& grad_output, const Tensor& input) {
  expect_shape(grad_output, input.shape(), "relu grad_output");
  Tensor out(input.shape());
  for (std::size_t k = 0; k < input.size(); ++k) {
    out[k] = input[k] > 0.0 ? grad_output[k] : 0.0;
  }
  return out;
}

LossResult softmax_cross_entropy(const Tensor& logits,
                                 std::span<const std::size_t> labels) {
  if (logits.rank() != 2) {
    throw ShapeError("logits must be [B, C], got " + logits.shape_string());
  }
  const std::size_t batch = logits.dim(0);
  const std::size_t classes = logits.dim(1);
  if (labels.size() != batch) {
    throw ShapeError("got " + std::to_string(labels.size()) + " labels for batch of " +
                     std::to_string(batch));
  }
  LossResult result{0.0, Tensor(logits.shape())};
  if (batch == 0) return result;
  const double inv_batch = 1.0 / static_cast<double>(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    if (labels[b] >= classes) {
      throw ValidationError("label " + std::to_string(labels[b]) +
                            " outside [0, " + std::to_string(classes) + ")");
    }
    const double* z = logits.data() + b * classes;
    double* g = result.grad_logits.data() + b * classes;
    const double zmax = *std::max_element(z, z + classes);
    double sum = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
      g[c] = std::exp(z[c] - zmax);
      sum += g[c];
    }
    const double log_sum = std::log(sum) + zmax;
    result.loss += (log_sum - z[labels[b]]) * inv_batch;
    for (std::size_t c = 0; c < classes; ++c) {
      g[c] = (g[c] / sum - (c == labels[b] ? 1.0 : 0.0)) * inv_batch;
    }
  }
  return result;
}

std::uint64_t conv2d_flops(const LayerSpec& spec, std::size_t out_h,
                           std::size_t out_w) {
  const std::uint64_t k_area = spec.kind == LayerKind::kConv1d
                                   ? spec.kernel
                                   : static_cast<std::uint64_t>(spec.kernel) * spec.kernel;
  return 2ull * k_area * spec.in * spec.out * out_h * out_w;
}

std::uint64_t fc_flops(const LayerSpec& spec) {
  return 2ull * spec.in * spec.out;
}

}  // namespace ssf::nn
