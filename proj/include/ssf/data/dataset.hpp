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

#ifndef SSF_DATA_DATASET_HPP_
#define SSF_DATA_DATASET_HPP_

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "ssf/core/ssf.hpp"
#include "ssf/data/manifest.hpp"

namespace ssf::data {

// Precomputed global (backbone) feature vector, stored as a 1 x width f64
// container.
struct GlobalFeatureVector {
  std::vector<double> values;
  std::string source;

  std::size_t width() const { return values.size(); }
};

// Throws ValidationError on non-finite values.
GlobalFeatureVector read_global_vector(const std::filesystem::path& path,
                                       std::string source = {});
void write_global_vector(const std::filesystem::path& path,
                         const GlobalFeatureVector& vec);

struct Sample {
  std::string id;
  SsfMatrix ssf;
  std::vector<double> global;  // empty when the dataset has no global branch
  std::size_t label = 0;
  Split split = Split::kTrain;
};

// In-memory dataset with SSFs already extracted.
struct Dataset {
  std::size_t num_classes = 0;
  std::size_t num_categories = 0;
  std::size_t global_width = 0;
  std::vector<Sample> samples;

  // Sample indices of one split, in dataset order.
  std::vector<std::size_t> indices(Split which) const;
};

// Reads every mask and global vector referenced by the manifest, extracting
// SSFs on `threads` workers. Order follows the manifest.
Dataset load_dataset(const DatasetManifest& manifest, std::size_t threads = 1);

}  // namespace ssf::data

#endif  // SSF_DATA_DATASET_HPP_
