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

#ifndef SSF_MODELS_SCENE_MODEL_HPP_
#define SSF_MODELS_SCENE_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ssf/data/dataset.hpp"
#include "ssf/models/config.hpp"
#include "ssf/nn/checkpoint.hpp"
#include "ssf/nn/layers.hpp"

namespace ssf::models {

// Batched model input. `ssf` is [B,1,L,k] for the CNN head, [B,L*k] for the
// NN head and [B,1,L] for the pixel-count head. `global` is [B,global_in].
struct ModelInput {
  nn::Tensor ssf;
  nn::Tensor global;
  std::size_t batch() const;
};

// Concatenates a global vector and a semantic vector, global first. Throws
// ValidationError for an empty semantic part or non-finite values.
std::vector<double> fuse_concat(std::span<const double> global,
                                std::span<const double> semantic);

struct Prediction {
  std::size_t label = 0;
  std::vector<double> logits;
};

// Index of the largest value; ties go to the lowest index.
std::size_t argmax(std::span<const double> values);

// One of three graphs:
//   semantic: head -> FC(1024 -> C)
//   global:   FC1(global_in -> l_G) -> ReLU -> FC2(l_G -> C)
//   fusion:   [FC1 -> ReLU || head] -> FC3 -> ReLU -> FC4
class SceneModel {
 public:
  SceneModel(ModelSpec spec, std::uint64_t seed);

  const ModelSpec& spec() const { return spec_; }

  ModelInput make_input(const data::Dataset& dataset,
                        std::span<const std::size_t> indices) const;
  ModelInput make_input(std::span<const data::Sample* const> samples) const;

  // Training path; returns logits [B, C].
  nn::Tensor forward(const ModelInput& input);
  // Accumulates parameter gradients. Gradients are not propagated into the
  // global branch while it is frozen.
  void backward(const nn::Tensor& grad_logits);
  // Const, re-entrant inference.
  nn::Tensor infer(const ModelInput& input) const;

  std::vector<nn::Parameter*> parameters();
  std::vector<const nn::Parameter*> parameters() const;
  // FC1 weight and bias; empty for semantic-only models.
  std::vector<nn::Parameter*> global_branch_parameters();
  std::vector<const nn::Parameter*> global_branch_parameters() const;
  void set_global_frozen(bool frozen);
  // Names of currently frozen parameters.
  std::vector<std::string> frozen_names() const;

  // Copies FC1 from a step-1 (global) checkpoint. Throws ValidationError
  // when the checkpoint architecture does not match this model's branch.
  void load_global_branch(const nn::Checkpoint& step1);

  nn::Checkpoint checkpoint() const;
  // Throws ValidationError on architecture or block mismatch.
  void load(const nn::Checkpoint& checkpoint);

  std::size_t parameter_count() const;
  // Analytic forward FLOPs for one sample.
  std::uint64_t flops() const;
  nn::Tensor::Shape ssf_sample_shape() const;

 private:
  ModelSpec spec_;
  std::size_t columns_ = 0;
  std::optional<nn::Sequential> global_branch_;
  std::optional<nn::Sequential> global_classifier_;
  std::optional<nn::Sequential> semantic_head_;
  std::optional<nn::Sequential> semantic_classifier_;
  std::optional<nn::Sequential> fusion_head_;
};

Prediction predict(const SceneModel& model, const data::Sample& sample);
std::vector<std::size_t> predict_labels(const SceneModel& model,
                                        const data::Dataset& dataset,
                                        std::span<const std::size_t> indices,
                                        std::size_t batch_size = 64);

}  // namespace ssf::models

#endif  // SSF_MODELS_SCENE_MODEL_HPP_
