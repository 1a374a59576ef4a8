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

#ifndef SSF_CORE_MASK_HPP_
#define SSF_CORE_MASK_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ssf {

// Largest supported mask side. Keeps the f64 moment sums exact enough for the
// single-pass variance identity.
inline constexpr std::size_t kMaxMaskSide = 16384;

using CategoryIndex = std::uint16_t;

// Semantic segmentation mask: an h x w row-major grid of category indices in
// [1, L], plus an optional void index for unlabeled pixels.
class SegmentationMask {
 public:
  // Validates every invariant; throws ValidationError naming the first
  // offending pixel (flat row-major index) and its value.
  SegmentationMask(std::size_t height, std::size_t width,
                   std::vector<CategoryIndex> data,
                   std::size_t num_categories,
                   std::optional<CategoryIndex> void_value = 0);

  // Mask of `height` x `width` filled with `value`.
  static SegmentationMask filled(std::size_t height, std::size_t width,
                                 CategoryIndex value,
                                 std::size_t num_categories,
                                 std::optional<CategoryIndex> void_value = 0);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t num_categories() const { return num_categories_; }
  std::size_t area() const { return height_ * width_; }
  const std::optional<CategoryIndex>& void_value() const {
    return void_value_;
  }

  std::span<const CategoryIndex> data() const { return data_; }

  // 0-based storage access.
  CategoryIndex at(std::size_t row, std::size_t col) const {
    return data_[row * width_ + col];
  }

  bool is_void(CategoryIndex v) const {
    return void_value_.has_value() && v == *void_value_;
  }

  friend bool operator==(const SegmentationMask&,
                         const SegmentationMask&) = default;

 private:
  std::size_t height_;
  std::size_t width_;
  std::size_t num_categories_;
  std::optional<CategoryIndex> void_value_;
  std::vector<CategoryIndex> data_;
};

}  // namespace ssf

#endif  // SSF_CORE_MASK_HPP_
