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

#include "ssf/data/dataset.hpp"

#include <cmath>

#include "ssf/core/io.hpp"

namespace ssf::data {

GlobalFeatureVector read_global_vector(const std::filesystem::path& path,
                                       std::string source) {
  F64Grid grid = read_f64_grid(path);
  if (grid.rows != 1) {
    throw ValidationError(path.string() + ": global feature container must have 1 row, has " +
                          std::to_string(grid.rows));
  }
  for (std::size_t k = 0; k < grid.values.size(); ++k) {
    if (!std::isfinite(grid.values[k])) {
      throw ValidationError(path.string() + ": global feature " + std::to_string(k) +
                            " is not finite");
    }
  }
  return {std::move(grid.values), std::move(source)};
}

void write_global_vector(const std::filesystem::path& path,
                         const GlobalFeatureVector& vec) {
  write_f64_grid(path, F64Grid{1, vec.values.size(), vec.values});
}

std::vector<std::size_t> Dataset::indices(Split which) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (samples[k].split == which) out.push_back(k);
  }
  return out;
}

Dataset load_dataset(const DatasetManifest& manifest, std::size_t threads) {
  Dataset ds;
  ds.num_classes = manifest.num_classes;
  ds.num_categories = manifest.num_categories;

  std::vector<SegmentationMask> masks;
  masks.reserve(manifest.entries.size());
  for (const auto& e : manifest.entries) {
    masks.push_back(read_mask(manifest.resolve(e.mask), manifest.num_categories,
                              manifest.void_value));
  }
  auto features = extract_ssf_batch(masks, threads);

  bool width_known = false;
  ds.samples.reserve(manifest.entries.size());
  for (std::size_t k = 0; k < manifest.entries.size(); ++k) {
    const auto& e = manifest.entries[k];
    Sample s;
    s.id = e.id;
    s.ssf = std::move(features[k]);
    s.label = e.label;
    s.split = e.split;
    if (e.global) {
      s.global = read_global_vector(manifest.resolve(*e.global), manifest.global_source).values;
    }
    if (!width_known) {
      ds.global_width = s.global.size();
      width_known = true;
    } else if (s.global.size() != ds.global_width) {
      throw ValidationError("sample '" + e.id + "' has global width " +
                            std::to_string(s.global.size()) + ", expected " +
                            std::to_string(ds.global_width));
    }
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

}  // namespace ssf::data
