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

#ifndef SSF_MODELS_TRAIN_HPP_
#define SSF_MODELS_TRAIN_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "ssf/data/dataset.hpp"
#include "ssf/models/scene_model.hpp"
#include "ssf/nn/adam.hpp"
#include "ssf/nn/checkpoint.hpp"
#include "ssf/nn/gradcheck.hpp"

namespace ssf::models {

enum class Stage { kStep1Global, kStep2Fusion, kSemanticOnly };

std::string to_string(Stage stage);
Stage parse_stage(std::string_view text);

struct TrainPlan {
  Stage stage = Stage::kSemanticOnly;
  std::size_t epochs = 100;
  std::size_t batch_size = 32;
  nn::AdamConfig optimizer;
  std::uint64_t seed = 0;
  // Parameter names excluded from updates. For step 2 this must cover the
  // global branch; make_plan fills it in.
  std::vector<std::string> frozen;
  // Evaluate the test split after every epoch.
  bool evaluate_test = true;
};

// Plan with the frozen set required by `stage` for `model`.
TrainPlan make_plan(Stage stage, const SceneModel& model);

struct EpochMetrics {
  std::size_t epoch = 0;  // 1-based
  data::Split split = data::Split::kTrain;
  double loss = 0.0;
  double accuracy = 0.0;
};

// {"epoch":..,"split":"train","loss":..,"accuracy":..}
std::string to_jsonl(const EpochMetrics& m);

struct TrainResult {
  nn::Checkpoint checkpoint;
  std::vector<EpochMetrics> metrics;
  // Step 2 only: hashes of the frozen blocks in the step-1 checkpoint, after
  // loading, and after training.
  std::uint64_t step1_hash = 0;
  std::uint64_t frozen_hash_before = 0;
  std::uint64_t frozen_hash_after = 0;

  // Last recorded metrics for a split; zeros when absent.
  EpochMetrics final_metrics(data::Split split) const;
};

using MetricsSink = std::function<void(const EpochMetrics&)>;

// Trains `model` in place. Stage/model pairings: step1 needs a global model,
// step2 a fusion model plus the step-1 checkpoint, semantic_only a semantic
// model. Throws ValidationError for mismatched checkpoints, pairings, a
// frozen set missing the global branch, or labels outside num_classes.
TrainResult train(const TrainPlan& plan, const data::Dataset& dataset,
                  SceneModel& model, const nn::Checkpoint* step1 = nullptr,
                  const MetricsSink& sink = {});

// Mean loss and accuracy over a split without updating the model.
EpochMetrics measure(const SceneModel& model, const data::Dataset& dataset,
                     data::Split split, std::size_t batch_size = 64);

// Finite-difference check of the batch-mean cross-entropy with respect to
// every non-frozen parameter of `model`.
nn::GradCheckReport check_model_gradients(SceneModel& model, const ModelInput& input,
                                          std::span<const std::size_t> labels,
                                          const nn::GradCheckOptions& options = {});

}  // namespace ssf::models

#endif  // SSF_MODELS_TRAIN_HPP_
