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

#ifndef SSF_CORE_SSF_HPP_
#define SSF_CORE_SSF_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ssf/core/mask.hpp"

namespace ssf {

// Normalized features of one category. Absent categories are all zero.
struct SsfRow {
  double pc = 0.0;       // pixel fraction over the full image area
  double mu_x = 0.0;     // mean 1-based column / w
  double mu_y = 0.0;     // mean 1-based row / h
  double sigma_x = 0.0;  // population column deviation / w
  double sigma_y = 0.0;  // population row deviation / h

  std::array<double, 5> as_array() const {
    return {pc, mu_x, mu_y, sigma_x, sigma_y};
  }
  friend bool operator==(const SsfRow&, const SsfRow&) = default;
};

inline constexpr std::size_t kSsfColumns = 5;

// L x 5 matrix of segmentation-based semantic features. Row n-1 describes
// category n.
struct SsfMatrix {
  std::vector<SsfRow> rows;
  std::vector<std::uint64_t> raw_counts;

  std::size_t num_categories() const { return rows.size(); }
  const SsfRow& row(std::size_t category) const { return rows[category - 1]; }

  // Row-major L*5 copy.
  std::vector<double> flatten() const;

  friend bool operator==(const SsfMatrix&, const SsfMatrix&) = default;
};

// Unnormalized (x, y) pair in 1-based pixel units.
struct PositionPair {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const PositionPair&, const PositionPair&) = default;
};

// Selection of SSF column groups: PC (1 column), AP (mu_x, mu_y) and
// SD (sigma_x, sigma_y).
class FeatureSubset {
 public:
  // Full set.
  FeatureSubset() : FeatureSubset(true, true, true) {}
  // Throws ValidationError when no group is selected.
  FeatureSubset(bool pc, bool ap, bool sd);

  static FeatureSubset full() { return FeatureSubset(true, true, true); }
  // Parses "pc,ap,sd" style lists (case-insensitive, any order) or "ssfs".
  static FeatureSubset parse(std::string_view text);

  bool pc() const { return pc_; }
  bool ap() const { return ap_; }
  bool sd() const { return sd_; }
  std::size_t column_count() const {
    return (pc_ ? 1 : 0) + (ap_ ? 2 : 0) + (sd_ ? 2 : 0);
  }
  bool is_full() const { return pc_ && ap_ && sd_; }

  // Table label: "PC", "AP&SD", ..., "SSFs" for the full set.
  std::string label() const;
  // Flag form accepted by parse(): "pc,ap".
  std::string flags() const;

  friend bool operator==(const FeatureSubset&, const FeatureSubset&) = default;

 private:
  bool pc_;
  bool ap_;
  bool sd_;
};

// Dense row-major L x k matrix produced by select_subset.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;
};

// Multi-pass building blocks. Index 0 of every result is category 1.
std::vector<std::uint64_t> compute_pixel_counts(const SegmentationMask& mask);
std::vector<double> normalize_pixel_counts(
    std::span<const std::uint64_t> counts, std::size_t height,
    std::size_t width);
std::vector<PositionPair> compute_mean_positions(
    const SegmentationMask& mask, std::span<const std::uint64_t> counts);
std::vector<PositionPair> compute_std_positions(
    const SegmentationMask& mask, std::span<const std::uint64_t> counts,
    std::span<const PositionPair> means);
std::vector<PositionPair> normalize_positions(
    std::span<const PositionPair> pairs, std::size_t height,
    std::size_t width);

// Composition of the four operations above; reference path for extract_ssf.
SsfMatrix extract_ssf_multipass(const SegmentationMask& mask);

// Single pass over the pixels accumulating (count, sum j, sum i, sum j^2,
// sum i^2) per category. Thread-safe for distinct masks.
SsfMatrix extract_ssf(const SegmentationMask& mask);

// Extracts many masks, optionally on `threads` workers. Output order matches
// input order. Per-mask failures are not possible here since masks are
// validated on construction.
std::vector<SsfMatrix> extract_ssf_batch(
    std::span<const SegmentationMask> masks, std::size_t threads = 1);

// Columns in canonical order (pc, mu_x, mu_y, sigma_x, sigma_y) filtered by
// the subset flags.
FeatureMatrix select_subset(const SsfMatrix& ssf, const FeatureSubset& subset);

}  // namespace ssf

#endif  // SSF_CORE_SSF_HPP_
