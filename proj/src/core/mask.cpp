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

#include "ssf/core/mask.hpp"

#include <string>

#include "ssf/common/error.hpp"

namespace ssf {

SegmentationMask::SegmentationMask(std::size_t height, std::size_t width,
                                   std::vector<CategoryIndex> data,
                                   std::size_t num_categories,
                                   std::optional<CategoryIndex> void_value)
    : height_(height),
      width_(width),
      num_categories_(num_categories),
      void_value_(void_value),
      data_(std::move(data)) {
  if (height_ == 0 || width_ == 0) {
    throw ValidationError("mask dimensions must be >= 1, got " +
                          std::to_string(height_) + "x" +
                          std::to_string(width_));
  }
  if (height_ > kMaxMaskSide || width_ > kMaxMaskSide) {
    throw ValidationError("mask side exceeds " + std::to_string(kMaxMaskSide) +
                          ": " + std::to_string(height_) + "x" +
                          std::to_string(width_));
  }
  if (num_categories_ == 0 || num_categories_ > 0xFFFF) {
    throw ValidationError("number of categories must be in [1, 65535], got " +
                          std::to_string(num_categories_));
  }
  if (data_.size() != height_ * width_) {
    throw ValidationError("mask data holds " + std::to_string(data_.size()) +
                          " values, expected " +
                          std::to_string(height_ * width_));
  }
  if (void_value_ && *void_value_ >= 1 && *void_value_ <= num_categories_) {
    throw ValidationError("void value " + std::to_string(*void_value_) +
                          " collides with category range [1, " +
                          std::to_string(num_categories_) + "]");
  }
  for (std::size_t idx = 0; idx < data_.size(); ++idx) {
    const CategoryIndex v = data_[idx];
    if (is_void(v)) continue;
    if (v < 1 || v > num_categories_) {
      throw ValidationError("pixel " + std::to_string(idx) + " (row " +
                            std::to_string(idx / width_) + ", col " +
                            std::to_string(idx % width_) + ") has value " +
                            std::to_string(v) + " outside [1, " +
                            std::to_string(num_categories_) + "]");
    }
  }
}

SegmentationMask SegmentationMask::filled(
    std::size_t height, std::size_t width, CategoryIndex value,
    std::size_t num_categories, std::optional<CategoryIndex> void_value) {
  return SegmentationMask(height, width,
                          std::vector<CategoryIndex>(height * width, value),
                          num_categories, void_value);
}

}  // namespace ssf
