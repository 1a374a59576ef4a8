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

#ifndef SSF_MODELS_CONFIG_HPP_
#define SSF_MODELS_CONFIG_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ssf/core/ssf.hpp"
#include "ssf/nn/layers.hpp"

namespace ssf::models {

inline constexpr std::size_t kHeadFeatures = 1024;

enum class HeadKind { kCnn, kNn, kPcConv1d };
enum class ModelKind { kSemantic, kGlobal, kFusion };

std::string to_string(HeadKind head);
std::string to_string(ModelKind kind);
HeadKind parse_head(std::string_view text);
ModelKind parse_model_kind(std::string_view text);

// Three 3x3 convolutions (stride 1, padding 1) with 64, 128, 64 channels
// over a 1 x L x k image, then FC to 1024. ReLU after every layer.
struct SsfCnnConfig {
  std::size_t num_categories = 0;
  std::size_t columns = kSsfColumns;
  std::array<std::size_t, 3> channels{64, 128, 64};
  std::size_t head_features = kHeadFeatures;
  std::size_t num_classes = 0;

  void validate() const;
};

// Flatten then FC-ReLU stack; the last hidden width is the head output.
struct SsfNnConfig {
  std::size_t num_categories = 0;
  std::size_t columns = kSsfColumns;
  std::vector<std::size_t> hidden{512, 1024};
  std::size_t num_classes = 0;

  void validate() const;
};

// Two 1D convolutions over the length-L pixel-count vector, then FC to 1024.
struct PcHeadConfig {
  std::size_t num_categories = 0;
  std::array<std::size_t, 2> channels{64, 64};
  std::size_t head_features = kHeadFeatures;

  void validate() const;
};

// Concatenation head: [global (l_G) || semantic (l_SSFs)] -> FC3 -> ReLU -> FC4.
struct FusionConfig {
  std::size_t global_width = 0;
  std::size_t semantic_width = kHeadFeatures;
  std::size_t fc3_width = 512;
  std::size_t num_classes = 0;

  std::size_t fused_width() const { return global_width + semantic_width; }
  void validate() const;
};

nn::Sequential build_ssf_cnn(const SsfCnnConfig& cfg, std::mt19937_64& rng);
nn::Sequential build_ssf_nn(const SsfNnConfig& cfg, std::mt19937_64& rng);
nn::Sequential build_pc_conv1d_head(const PcHeadConfig& cfg, std::mt19937_64& rng);

// Closed-form parameter counts of the heads above.
std::size_t ssf_cnn_param_count(const SsfCnnConfig& cfg);
std::size_t ssf_nn_param_count(const SsfNnConfig& cfg);
std::size_t pc_head_param_count(const PcHeadConfig& cfg);

// Architecture descriptor; serialized into checkpoints.
struct ModelSpec {
  ModelKind kind = ModelKind::kSemantic;
  HeadKind head = HeadKind::kCnn;
  FeatureSubset subset = FeatureSubset::full();
  std::size_t num_categories = 0;
  std::size_t num_classes = 0;
  std::size_t global_in = 0;       // width of the ingested global vector
  std::size_t global_width = 256;  // FC1 output, l_G
  std::size_t fc3_width = 512;
  std::vector<std::size_t> nn_hidden{512, 1024};

  bool uses_semantic() const { return kind != ModelKind::kGlobal; }
  bool uses_global() const { return kind != ModelKind::kSemantic; }
  // Throws ValidationError for inconsistent fields.
  void validate() const;

  std::string to_json() const;
  static ModelSpec from_json(std::string_view text);

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

}  // namespace ssf::models

#endif  // SSF_MODELS_CONFIG_HPP_
