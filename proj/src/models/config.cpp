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

#include "ssf/models/config.hpp"

#include "json.hpp"
#include "ssf/common/error.hpp"

namespace ssf::models {
namespace {

using nn::Conv1d;
using nn::Conv2d;
using nn::Flatten;
using nn::LayerSpec;
using nn::Linear;
using nn::Relu;

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace

std::string to_string(HeadKind head) {
  switch (head) {
    case HeadKind::kCnn: return "cnn";
    case HeadKind::kNn: return "nn";
    case HeadKind::kPcConv1d: return "pc-conv1d";
  }
  return "?";
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kSemantic: return "semantic";
    case ModelKind::kGlobal: return "global";
    case ModelKind::kFusion: return "fusion";
  }
  return "?";
}

HeadKind parse_head(std::string_view text) {
  if (text == "cnn") return HeadKind::kCnn;
  if (text == "nn") return HeadKind::kNn;
  if (text == "pc-conv1d" || text == "pc") return HeadKind::kPcConv1d;
  throw ValidationError("unknown head '" + std::string(text) + "' (cnn, nn, pc-conv1d)");
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "semantic") return ModelKind::kSemantic;
  if (text == "global") return ModelKind::kGlobal;
  if (text == "fusion") return ModelKind::kFusion;
  throw ValidationError("unknown model kind '" + std::string(text) + "'");
}

void SsfCnnConfig::validate() const {
  require(num_categories >= 1, "SSFs-CNN: L must be >= 1");
  require(columns >= 1 && columns <= kSsfColumns, "SSFs-CNN: k must be in [1, 5]");
  require(channels == std::array<std::size_t, 3>{64, 128, 64},
          "SSFs-CNN: conv channels must be (64, 128, 64)");
  require(head_features == kHeadFeatures, "SSFs-CNN: head width must be 1024");
}

void SsfNnConfig::validate() const {
  require(num_categories >= 1, "SSFs-NN: L must be >= 1");
  require(columns >= 1 && columns <= kSsfColumns, "SSFs-NN: k must be in [1, 5]");
  require(!hidden.empty(), "SSFs-NN: needs at least one hidden layer");
  for (std::size_t h : hidden) require(h >= 1, "SSFs-NN: hidden widths must be >= 1");
  require(hidden.back() == kHeadFeatures, "SSFs-NN: final hidden width must be 1024");
}

void PcHeadConfig::validate() const {
  require(num_categories >= 1, "PC head: L must be >= 1");
  require(channels[0] >= 1 && channels[1] >= 1, "PC head: channels must be >= 1");
  require(head_features >= 1, "PC head: head width must be >= 1");
}

void FusionConfig::validate() const {
  require(global_width >= 1, "fusion: global width must be >= 1");
  require(semantic_width >= 1, "fusion: semantic width must be >= 1");
  require(fc3_width >= 1, "fusion: FC3 width must be >= 1");
  require(num_classes >= 1, "fusion: num_classes must be >= 1");
}

nn::Sequential build_ssf_cnn(const SsfCnnConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  nn::Sequential s;
  std::size_t in = 1;
  for (std::size_t k = 0; k < cfg.channels.size(); ++k) {
    s.emplace<Conv2d>("ssf.conv" + std::to_string(k + 1),
                      LayerSpec::conv2d(in, cfg.channels[k], 3, 1, 1), rng);
    s.emplace<Relu>();
    in = cfg.channels[k];
  }
  s.emplace<Flatten>();
  s.emplace<Linear>("ssf.fc", in * cfg.num_categories * cfg.columns, cfg.head_features, rng);
  s.emplace<Relu>();
  return s;
}

nn::Sequential build_ssf_nn(const SsfNnConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  nn::Sequential s;
  s.emplace<Flatten>();
  std::size_t in = cfg.num_categories * cfg.columns;
  for (std::size_t k = 0; k < cfg.hidden.size(); ++k) {
    s.emplace<Linear>("ssf.fc" + std::to_string(k + 1), in, cfg.hidden[k], rng);
    s.emplace<Relu>();
    in = cfg.hidden[k];
  }
  return s;
}

nn::Sequential build_pc_conv1d_head(const PcHeadConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  nn::Sequential s;
  s.emplace<Conv1d>("pc.conv1", LayerSpec::conv1d(1, cfg.channels[0], 3, 1, 1), rng);
  s.emplace<Relu>();
  s.emplace<Conv1d>("pc.conv2", LayerSpec::conv1d(cfg.channels[0], cfg.channels[1], 3, 1, 1),
                    rng);
  s.emplace<Relu>();
  s.emplace<Flatten>();
  s.emplace<Linear>("pc.fc", cfg.channels[1] * cfg.num_categories, cfg.head_features, rng);
  s.emplace<Relu>();
  return s;
}

std::size_t ssf_cnn_param_count(const SsfCnnConfig& cfg) {
  std::size_t total = 0;
  std::size_t in = 1;
  for (std::size_t c : cfg.channels) {
    total += c * in * 9 + c;
    in = c;
  }
  const std::size_t flat = in * cfg.num_categories * cfg.columns;
  return total + flat * cfg.head_features + cfg.head_features;
}

std::size_t ssf_nn_param_count(const SsfNnConfig& cfg) {
  std::size_t total = 0;
  std::size_t in = cfg.num_categories * cfg.columns;
  for (std::size_t h : cfg.hidden) {
    total += in * h + h;
    in = h;
  }
  return total;
}

std::size_t pc_head_param_count(const PcHeadConfig& cfg) {
  const std::size_t c1 = cfg.channels[0], c2 = cfg.channels[1];
  return (c1 * 3 + c1) + (c2 * c1 * 3 + c2) +
         (c2 * cfg.num_categories * cfg.head_features + cfg.head_features);
}

void ModelSpec::validate() const {
  require(num_classes >= 1, "model: num_classes must be >= 1");
  if (uses_semantic()) {
    require(num_categories >= 1, "model: num_categories must be >= 1");
    if (head == HeadKind::kPcConv1d) {
      require(subset == FeatureSubset(true, false, false),
              "model: the pc-conv1d head consumes the PC subset only");
    }
    if (head == HeadKind::kNn) {
      require(!nn_hidden.empty() && nn_hidden.back() == kHeadFeatures,
              "model: SSFs-NN final hidden width must be 1024");
    }
  }
  if (uses_global()) {
    require(global_in >= 1, "model: global input width must be >= 1");
    require(global_width >= 1, "model: global branch width must be >= 1");
  }
  if (kind == ModelKind::kFusion) require(fc3_width >= 1, "model: FC3 width must be >= 1");
}

std::string ModelSpec::to_json() const {
  nlohmann::json j = {{"kind", to_string(kind)},
                      {"head", to_string(head)},
                      {"subset", subset.flags()},
                      {"num_categories", num_categories},
                      {"num_classes", num_classes},
                      {"global_in", global_in},
                      {"global_width", global_width},
                      {"fc3_width", fc3_width},
                      {"nn_hidden", nn_hidden}};
  return j.dump();
}

ModelSpec ModelSpec::from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    ModelSpec s;
    s.kind = parse_model_kind(j.at("kind").get<std::string>());
    s.head = parse_head(j.at("head").get<std::string>());
    s.subset = FeatureSubset::parse(j.at("subset").get<std::string>());
    s.num_categories = j.at("num_categories").get<std::size_t>();
    s.num_classes = j.at("num_classes").get<std::size_t>();
    s.global_in = j.at("global_in").get<std::size_t>();
    s.global_width = j.at("global_width").get<std::size_t>();
    s.fc3_width = j.at("fc3_width").get<std::size_t>();
    s.nn_hidden = j.at("nn_hidden").get<std::vector<std::size_t>>();
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid architecture descriptor: ") + e.what());
  }
}

}  // namespace ssf::models
