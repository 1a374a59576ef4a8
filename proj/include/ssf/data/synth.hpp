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

#ifndef SSF_DATA_SYNTH_HPP_
#define SSF_DATA_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ssf/core/io.hpp"
#include "ssf/core/mask.hpp"
#include "ssf/core/ssf.hpp"
#include "ssf/data/dataset.hpp"
#include "ssf/data/manifest.hpp"

namespace ssf::data {

// One rectangular region of a category. Coordinates are normalized to the
// image; the rectangle is sized so that its population deviation matches
// (sigma_x, sigma_y).
struct Blob {
  CategoryIndex category = 0;
  double center_x = 0.5;
  double center_y = 0.5;
  double sigma_x = 0.1;
  double sigma_y = 0.1;
  friend bool operator==(const Blob&, const Blob&) = default;
};

struct ClassRecipe {
  std::vector<Blob> blobs;
  // Index of the class-conditioned Gaussian used for the global vector.
  std::size_t global_group = 0;
  friend bool operator==(const ClassRecipe&, const ClassRecipe&) = default;
};

struct SynthSpec {
  std::size_t num_classes = 6;
  std::size_t num_categories = 8;
  std::size_t height = 32;
  std::size_t width = 32;
  CategoryIndex background = 1;
  std::vector<ClassRecipe> recipes;
  // In [0, 1): scales center jitter, size jitter and salt-pixel rate. Salt
  // pixels take the background or one of the class's blob categories.
  double noise = 0.1;
  std::size_t samples_per_class = 100;
  double train_fraction = 0.7;
  std::uint64_t seed = 0;
  // 0 disables global vectors.
  std::size_t global_width = 32;
  // Standard deviation of the per-sample Gaussian around its group mean;
  // group means have unit-variance components.
  double global_spread = 1.0;

  // Throws ValidationError for out-of-range fields, blobs leaving the image,
  // overlapping blobs within a recipe, or indistinguishable classes.
  void validate() const;
};

// Six classes over 8 categories on 32x32 masks; at noise 0 every pair of
// classes differs in at least one SSF entry by >= 0.08.
SynthSpec standard_synth_spec(std::uint64_t seed = 0);

// Six classes where the SSF layout encodes (class % 2) and the global vector
// encodes (class / 2): masks alone identify the class with probability 1/3,
// global vectors alone with probability 1/2.
SynthSpec split_information_spec(std::uint64_t seed = 0);

struct SyntheticSet {
  std::vector<std::string> ids;
  std::vector<SegmentationMask> masks;
  std::vector<std::vector<double>> globals;
  std::vector<std::size_t> labels;
  std::vector<Split> splits;
};

// In-memory generation. Deterministic in the spec (including seed).
SyntheticSet generate_synthetic_set(const SynthSpec& spec);

// Extracts SSFs and packages the set as a Dataset.
Dataset to_dataset(const SyntheticSet& set, const SynthSpec& spec);

// Writes masks, global vectors, `manifest.jsonl` and `synth_spec.json` under
// `out_dir` and returns the manifest.
DatasetManifest generate_synthetic(const SynthSpec& spec,
                                   const std::filesystem::path& out_dir,
                                   MaskFormat format = MaskFormat::kContainer);

// Nominal SSF rows (pc = 12 sigma_x sigma_y, centers, sigmas) of the recipe's
// blob categories at noise 0, paired with their category index.
std::vector<std::pair<CategoryIndex, SsfRow>> recipe_targets(
    const ClassRecipe& recipe);

std::string synth_spec_to_json(const SynthSpec& spec);

}  // namespace ssf::data

#endif  // SSF_DATA_SYNTH_HPP_
