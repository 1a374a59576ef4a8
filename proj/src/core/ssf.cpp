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

#include "ssf/core/ssf.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <thread>

#include "ssf/common/error.hpp"

namespace ssf {
namespace {

void check_dims(std::size_t height, std::size_t width) {
  if (height == 0 || width == 0) {
    throw ValidationError("invalid dimensions " + std::to_string(height) +
                          "x" + std::to_string(width) +
                          ": both must be >= 1");
  }
}

void check_counts(const SegmentationMask& mask,
                  std::span<const std::uint64_t> counts) {
  if (counts.size() != mask.num_categories()) {
    throw ValidationError("count vector has " + std::to_string(counts.size()) +
                          " entries, mask has " +
                          std::to_string(mask.num_categories()) +
                          " categories");
  }
}

// Radicands below this are treated as accumulated rounding, not as a bug.
constexpr double kRadicandFloor = -1e-9;

double guarded_sqrt(double radicand) {
  if (radicand < 0.0) {
    if (radicand < kRadicandFloor) {
      throw std::logic_error("negative variance " + std::to_string(radicand));
    }
    return 0.0;
  }
  return std::sqrt(radicand);
}

}  // namespace

std::vector<double> SsfMatrix::flatten() const {
  std::vector<double> out;
  out.reserve(rows.size() * kSsfColumns);
  for (const SsfRow& r : rows) {
    const auto a = r.as_array();
    out.insert(out.end(), a.begin(), a.end());
  }
  return out;
}

FeatureSubset::FeatureSubset(bool pc, bool ap, bool sd)
    : pc_(pc), ap_(ap), sd_(sd) {
  if (!pc && !ap && !sd) {
    throw ValidationError("feature subset must select at least one of PC, AP, SD");
  }
}

FeatureSubset FeatureSubset::parse(std::string_view text) {
  bool pc = false, ap = false, sd = false;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    if (token == "pc") {
      pc = true;
    } else if (token == "ap") {
      ap = true;
    } else if (token == "sd") {
      sd = true;
    } else if (token == "ssfs" || token == "ssf" || token == "all") {
      pc = ap = sd = true;
    } else {
      throw ValidationError("unknown feature group '" + token +
                            "' (expected pc, ap, sd or ssfs)");
    }
    token.clear();
  };
  for (char ch : text) {
    if (ch == ',' || ch == '&' || ch == ' ') {
      flush();
    } else {
      token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
  }
  flush();
  return FeatureSubset(pc, ap, sd);
}

std::string FeatureSubset::label() const {
  if (is_full()) return "SSFs";
  std::string out;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += '&';
    out += name;
  };
  add(pc_, "PC");
  add(ap_, "AP");
  add(sd_, "SD");
  return out;
}

std::string FeatureSubset::flags() const {
  std::string out;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += ',';
    out += name;
  };
  add(pc_, "pc");
  add(ap_, "ap");
  add(sd_, "sd");
  return out;
}

std::vector<std::uint64_t> compute_pixel_counts(const SegmentationMask& mask) {
  std::vector<std::uint64_t> counts(mask.num_categories(), 0);
  for (CategoryIndex v : mask.data()) {
    if (mask.is_void(v)) continue;
    ++counts[v - 1];
  }
  return counts;
}

std::vector<double> normalize_pixel_counts(
    std::span<const std::uint64_t> counts, std::size_t height,
    std::size_t width) {
  check_dims(height, width);
  const std::uint64_t area = static_cast<std::uint64_t>(height) * width;
  const double denom = static_cast<double>(area);
  std::vector<double> out(counts.size());
  for (std::size_t n = 0; n < counts.size(); ++n) {
    if (counts[n] > area) {
      throw ValidationError("count " + std::to_string(counts[n]) +
                            " for category " + std::to_string(n + 1) +
                            " exceeds image area " + std::to_string(area));
    }
    out[n] = static_cast<double>(counts[n]) / denom;
  }
  return out;
}

std::vector<PositionPair> compute_mean_positions(
    const SegmentationMask& mask, std::span<const std::uint64_t> counts) {
  check_counts(mask, counts);
  std::vector<PositionPair> sums(counts.size());
  for (std::size_t i = 0; i < mask.height(); ++i) {
    for (std::size_t j = 0; j < mask.width(); ++j) {
      const CategoryIndex v = mask.at(i, j);
      if (mask.is_void(v)) continue;
      sums[v - 1].x += static_cast<double>(j + 1);
      sums[v - 1].y += static_cast<double>(i + 1);
    }
  }
  for (std::size_t n = 0; n < counts.size(); ++n) {
    if (counts[n] == 0) {
      sums[n] = {};
      continue;
    }
    const double c = static_cast<double>(counts[n]);
    sums[n].x /= c;
    sums[n].y /= c;
  }
  return sums;
}

std::vector<PositionPair> compute_std_positions(
    const SegmentationMask& mask, std::span<const std::uint64_t> counts,
    std::span<const PositionPair> means) {
  check_counts(mask, counts);
  if (means.size() != counts.size()) {
    throw ValidationError("mean vector size does not match count vector");
  }
  std::vector<PositionPair> sq(counts.size());
  for (std::size_t i = 0; i < mask.height(); ++i) {
    for (std::size_t j = 0; j < mask.width(); ++j) {
      const CategoryIndex v = mask.at(i, j);
      if (mask.is_void(v)) continue;
      const double dx = static_cast<double>(j + 1) - means[v - 1].x;
      const double dy = static_cast<double>(i + 1) - means[v - 1].y;
      sq[v - 1].x += dx * dx;
      sq[v - 1].y += dy * dy;
    }
  }
  for (std::size_t n = 0; n < counts.size(); ++n) {
    if (counts[n] == 0) {
      sq[n] = {};
      continue;
    }
    const double c = static_cast<double>(counts[n]);
    sq[n].x = std::sqrt(sq[n].x / c);
    sq[n].y = std::sqrt(sq[n].y / c);
  }
  return sq;
}

std::vector<PositionPair> normalize_positions(
    std::span<const PositionPair> pairs, std::size_t height,
    std::size_t width) {
  check_dims(height, width);
  std::vector<PositionPair> out(pairs.size());
  const double w = static_cast<double>(width);
  const double h = static_cast<double>(height);
  for (std::size_t n = 0; n < pairs.size(); ++n) {
    out[n].x = pairs[n].x / w;
    out[n].y = pairs[n].y / h;
  }
  return out;
}

SsfMatrix extract_ssf_multipass(const SegmentationMask& mask) {
  const auto counts = compute_pixel_counts(mask);
  const auto pc = normalize_pixel_counts(counts, mask.height(), mask.width());
  const auto means = compute_mean_positions(mask, counts);
  const auto stds = compute_std_positions(mask, counts, means);
  const auto nmeans = normalize_positions(means, mask.height(), mask.width());
  const auto nstds = normalize_positions(stds, mask.height(), mask.width());

  SsfMatrix out;
  out.raw_counts = counts;
  out.rows.resize(counts.size());
  for (std::size_t n = 0; n < counts.size(); ++n) {
    out.rows[n] = {pc[n], nmeans[n].x, nmeans[n].y, nstds[n].x, nstds[n].y};
  }
  return out;
}

SsfMatrix extract_ssf(const SegmentationMask& mask) {
  struct Moments {
    std::uint64_t count = 0;
    std::uint64_t sum_j = 0;
    std::uint64_t sum_i = 0;
    std::uint64_t sum_jj = 0;
    std::uint64_t sum_ii = 0;
  };
  const std::size_t num_categories = mask.num_categories();
  const std::size_t height = mask.height();
  const std::size_t width = mask.width();
  // Slot 0 absorbs void pixels so the inner loop stays branch-light.
  std::vector<Moments> acc(num_categories + 1);
  const auto data = mask.data();
  const bool has_void = mask.void_value().has_value();
  const CategoryIndex void_value = has_void ? *mask.void_value() : 0;

  for (std::size_t i = 0; i < height; ++i) {
    const std::uint64_t row = i + 1;
    const CategoryIndex* line = data.data() + i * width;
    for (std::size_t j = 0; j < width; ++j) {
      const CategoryIndex v = line[j];
      const std::size_t slot = (has_void && v == void_value) ? 0 : v;
      const std::uint64_t col = j + 1;
      Moments& m = acc[slot];
      ++m.count;
      m.sum_j += col;
      m.sum_i += row;
      m.sum_jj += col * col;
      m.sum_ii += row * row;
    }
  }

  const double w = static_cast<double>(width);
  const double h = static_cast<double>(height);
  const double area = w * h;
  SsfMatrix out;
  out.rows.resize(num_categories);
  out.raw_counts.resize(num_categories);
  for (std::size_t n = 1; n <= num_categories; ++n) {
    const Moments& m = acc[n];
    out.raw_counts[n - 1] = m.count;
    if (m.count == 0) continue;
    const double c = static_cast<double>(m.count);
    const double mean_x = static_cast<double>(m.sum_j) / c;
    const double mean_y = static_cast<double>(m.sum_i) / c;
    const double var_x = static_cast<double>(m.sum_jj) / c - mean_x * mean_x;
    const double var_y = static_cast<double>(m.sum_ii) / c - mean_y * mean_y;
    SsfRow& r = out.rows[n - 1];
    r.pc = c / area;
    r.mu_x = mean_x / w;
    r.mu_y = mean_y / h;
    r.sigma_x = guarded_sqrt(var_x) / w;
    r.sigma_y = guarded_sqrt(var_y) / h;
  }
  return out;
}

std::vector<SsfMatrix> extract_ssf_batch(
    std::span<const SegmentationMask> masks, std::size_t threads) {
  std::vector<SsfMatrix> out(masks.size());
  threads = std::max<std::size_t>(1, std::min(threads, masks.size()));
  if (threads == 1) {
    for (std::size_t k = 0; k < masks.size(); ++k) out[k] = extract_ssf(masks[k]);
    return out;
  }
  {
    // Strided assignment; each slot is written by exactly one worker.
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      workers.emplace_back([&, t] {
        for (std::size_t k = t; k < masks.size(); k += threads) {
          out[k] = extract_ssf(masks[k]);
        }
      });
    }
  }
  return out;
}

FeatureMatrix select_subset(const SsfMatrix& ssf, const FeatureSubset& subset) {
  FeatureMatrix out;
  out.rows = ssf.num_categories();
  out.cols = subset.column_count();
  out.values.reserve(out.rows * out.cols);
  for (const SsfRow& r : ssf.rows) {
    if (subset.pc()) out.values.push_back(r.pc);
    if (subset.ap()) {
      out.values.push_back(r.mu_x);
      out.values.push_back(r.mu_y);
    }
    if (subset.sd()) {
      out.values.push_back(r.sigma_x);
      out.values.push_back(r.sigma_y);
    }
  }
  return out;
}

}  // namespace ssf
