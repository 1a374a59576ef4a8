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

#ifndef SSF_NN_TENSOR_HPP_
#define SSF_NN_TENSOR_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ssf::nn {

// Dense f64 array of rank 1..4, laid out (batch, channels, height, width)
// when rank 4. The gradient slot is allocated on first use.
class Tensor {
 public:
  using Shape = std::vector<std::size_t>;

  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> values);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const { return values_.size(); }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  bool has_grad() const { return !grad_.empty() || values_.empty(); }
  // Allocates a zero gradient on first call.
  std::span<double> grad();
  std::span<const double> grad() const { return grad_; }
  void zero_grad();

  // Copy of the values with a new shape of the same element count.
  Tensor reshaped(Shape shape) const;

  std::string shape_string() const;

 private:
  Shape shape_;
  std::vector<double> values_;
  std::vector<double> grad_;
};

std::size_t shape_size(const Tensor::Shape& shape);
std::string shape_to_string(const Tensor::Shape& shape);

}  // namespace ssf::nn

#endif  // SSF_NN_TENSOR_HPP_
