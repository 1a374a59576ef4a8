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

#ifndef SSF_DATA_MANIFEST_HPP_
#define SSF_DATA_MANIFEST_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssf/common/error.hpp"
#include "ssf/core/mask.hpp"

namespace ssf::data {

enum class Split { kTrain, kTest };

std::string to_string(Split split);
Split parse_split(std::string_view text);

class MissingFileError : public IoError {
 public:
  using IoError::IoError;
};

class DuplicateIdError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class LabelRangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct ManifestEntry {
  std::string id;
  std::filesystem::path mask;                   // relative to base_dir unless absolute
  std::optional<std::filesystem::path> global;  // precomputed global feature vector
  std::size_t label = 0;
  Split split = Split::kTrain;
};

// JSON-lines manifest. Line 1 is a header object:
//   {"format":"ssf-manifest","version":1,"num_classes":C,
//    "num_categories":L,"void_value":V|null,"global_source":"..."}
// every following line is one entry:
//   {"id":"...","mask":"masks/x.ssfm","global":"global/x.f64",
//    "label":k,"split":"train"|"test"}
// ("global" is optional.)
struct DatasetManifest {
  std::size_t num_classes = 0;
  std::size_t num_categories = 0;
  std::optional<CategoryIndex> void_value = 0;
  std::string global_source;
  std::filesystem::path base_dir;
  std::vector<ManifestEntry> entries;

  std::filesystem::path resolve(const std::filesystem::path& p) const;
  std::vector<const ManifestEntry*> split(Split which) const;
};

// Parses and validates (unique ids, labels in range). When `check_files` is
// set, every referenced file must exist.
DatasetManifest parse_manifest(std::string_view text,
                               const std::filesystem::path& base_dir,
                               bool check_files);
DatasetManifest load_manifest(const std::filesystem::path& path);

std::string serialize_manifest(const DatasetManifest& manifest);
void save_manifest(const std::filesystem::path& path,
                   const DatasetManifest& manifest);

}  // namespace ssf::data

#endif  // SSF_DATA_MANIFEST_HPP_
