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

#ifndef SSF_NN_CHECKPOINT_HPP_
#define SSF_NN_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ssf/nn/layers.hpp"

namespace ssf::nn {

// Binary layout, little-endian:
//   "SSFC" | u32 version | u32 len | architecture text
//   u32 block count, then per block:
//   u32 len | name | u32 rank | u64 dims[rank] | f64 values
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointBlock {
  std::string name;
  Tensor::Shape shape;
  std::vector<double> values;
  friend bool operator==(const CheckpointBlock&, const CheckpointBlock&) = default;
};

struct Checkpoint {
  std::string architecture;
  std::vector<CheckpointBlock> blocks;

  const CheckpointBlock* find(std::string_view name) const;
  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

Checkpoint snapshot(std::string architecture,
                    const std::vector<Parameter*>& params);

// Copies matching blocks into `params`. Every parameter must be present with
// an identical shape unless `allow_missing`; mismatches throw ValidationError.
void restore(const Checkpoint& checkpoint,
             const std::vector<Parameter*>& params, bool allow_missing = false);

std::string encode_checkpoint(const Checkpoint& checkpoint);
Checkpoint decode_checkpoint(std::string_view bytes);

// Writes the binary file and a `<path>.meta.json` sidecar holding
// `metadata_json` verbatim.
void save_checkpoint(const std::filesystem::path& path,
                     const Checkpoint& checkpoint,
                     const std::string& metadata_json);
Checkpoint load_checkpoint(const std::filesystem::path& path);
std::filesystem::path metadata_path(const std::filesystem::path& path);

// FNV-1a over name, shape and exact value bytes of the selected parameters.
std::uint64_t parameter_hash(const std::vector<const Parameter*>& params);
std::uint64_t block_hash(const std::vector<const CheckpointBlock*>& blocks);

}  // namespace ssf::nn

#endif  // SSF_NN_CHECKPOINT_HPP_
