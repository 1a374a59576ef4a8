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

#include "ssf/models/train.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"
#include "ssf/common/error.hpp"
#include "ssf/data/batch.hpp"

namespace ssf::models {
namespace {

std::vector<const nn::Parameter*> const_view(const std::vector<nn::Parameter*>& params) {
  return {params.begin(), params.end()};
}

void check_pairing(Stage stage, const SceneModel& model, const nn::Checkpoint* step1) {
  const ModelKind kind = model.spec().kind;
  const ModelKind want = stage == Stage::kStep1Global    ? ModelKind::kGlobal
                         : stage == Stage::kStep2Fusion ? ModelKind::kFusion
                                                        : ModelKind::kSemantic;
  if (kind != want) {
    throw ValidationError("stage " + to_string(stage) + " needs a " + to_string(want) +
                          " model, got " + to_string(kind));
  }
  if (stage == Stage::kStep2Fusion && step1 == nullptr) {
    throw ValidationError("stage step2_fusion needs a step1 checkpoint");
  }
}

void check_labels(const data::Dataset& dataset, const SceneModel& model) {
  if (dataset.samples.empty()) throw ValidationError("train: dataset is empty");
  const std::size_t classes = model.spec().num_classes;
  for (const data::Sample& s : dataset.samples) {
    if (s.label >= classes) {
      throw ValidationError("sample " + s.id + ": label " + std::to_string(s.label) +
                            " outside num_classes " + std::to_string(classes));
    }
  }
}

std::vector<std::size_t> labels_of(const data::Dataset& dataset,
                                   std::span<const std::size_t> indices) {
  std::vector<std::size_t> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(dataset.samples[i].label);
  return out;
}

std::size_t count_correct(const nn::Tensor& logits, std::span<const std::size_t> labels) {
  const std::size_t classes = logits.dim(1);
  std::size_t correct = 0;
  for (std::size_t r = 0; r < labels.size(); ++r) {
    if (argmax(logits.values().subspan(r * classes, classes)) == labels[r]) ++correct;
  }
  return correct;
}

}  // namespace

std::string to_string(Stage stage) {
  switch (stage) {
    case Stage::kStep1Global: return "step1_global";
    case Stage::kStep2Fusion: return "step2_fusion";
    case Stage::kSemanticOnly: return "semantic_only";
  }
  return "?";
}

Stage parse_stage(std::string_view text) {
  if (text == "step1_global" || text == "step1") return Stage::kStep1Global;
  if (text == "step2_fusion" || text == "step2") return Stage::kStep2Fusion;
  if (text == "semantic_only" || text == "semantic") return Stage::kSemanticOnly;
  throw ValidationError("unknown stage '" + std::string(text) +
                        "' (step1_global, step2_fusion, semantic_only)");
}

TrainPlan make_plan(Stage stage, const SceneModel& model) {
  TrainPlan plan;
  plan.stage = stage;
  if (stage == Stage::kStep2Fusion) {
    for (const nn::Parameter* p : model.global_branch_parameters()) plan.frozen.push_back(p->name);
  }
  return plan;
}

std::string to_jsonl(const EpochMetrics& m) {
  nlohmann::json j = {{"epoch", m.epoch},
                      {"split", data::to_string(m.split)},
                      {"loss", m.loss},
                      {"accuracy", m.accuracy}};
  return j.dump();
}

EpochMetrics TrainResult::final_metrics(data::Split split) const {
  for (auto it = metrics.rbegin(); it != metrics.rend(); ++it) {
    if (it->split == split) return *it;
  }
  return {0, split, 0.0, 0.0};
}

EpochMetrics measure(const SceneModel& model, const data::Dataset& dataset, data::Split split,
                     std::size_t batch_size) {
  EpochMetrics m;
  m.split = split;
  const std::vector<std::size_t> idx = dataset.indices(split);
  if (idx.empty()) return m;
  double loss_sum = 0.0;
  std::size_t correct = 0;
  batch_size = std::max<std::size_t>(batch_size, 1);
  for (std::size_t start = 0; start < idx.size(); start += batch_size) {
    const auto chunk =
        std::span(idx).subspan(start, std::min(batch_size, idx.size() - start));
    const nn::Tensor logits = model.infer(model.make_input(dataset, chunk));
    const auto labels = labels_of(dataset, chunk);
    loss_sum += nn::softmax_cross_entropy(logits, labels).loss * static_cast<double>(chunk.size());
    correct += count_correct(logits, labels);
  }
  m.loss = loss_sum / static_cast<double>(idx.size());
  m.accuracy = static_cast<double>(correct) / static_cast<double>(idx.size());
  return m;
}

TrainResult train(const TrainPlan& plan, const data::Dataset& dataset, SceneModel& model,
                  const nn::Checkpoint* step1, const MetricsSink& sink) {
  check_pairing(plan.stage, model, step1);
  check_labels(dataset, model);
  if (plan.batch_size == 0) throw ValidationError("train: batch size must be >= 1");
  if (dataset.indices(data::Split::kTrain).empty()) {
    throw ValidationError("train: no training samples");
  }

  TrainResult result;
  const std::set<std::string> frozen(plan.frozen.begin(), plan.frozen.end());
  if (plan.stage == Stage::kStep2Fusion) {
    for (const nn::Parameter* p : model.global_branch_parameters()) {
      if (!frozen.contains(p->name)) {
        throw ValidationError("step2_fusion: global-branch parameter " + p->name +
                              " missing from the frozen set");
      }
    }
    model.load_global_branch(*step1);
    std::vector<const nn::CheckpointBlock*> blocks;
    for (const nn::Parameter* p : model.global_branch_parameters()) {
      blocks.push_back(step1->find(p->name));
    }
    result.step1_hash = nn::block_hash(blocks);
    result.frozen_hash_before = nn::parameter_hash(const_view(model.global_branch_parameters()));
  }
  const std::vector<nn::Parameter*> params = model.parameters();
  std::set<std::string> known;
  for (nn::Parameter* p : params) {
    p->frozen = frozen.contains(p->name);
    known.insert(p->name);
  }
  for (const std::string& name : frozen) {
    if (!known.contains(name)) throw ValidationError("frozen set names unknown parameter " + name);
  }

  nn::AdamState adam(plan.optimizer);
  const std::uint64_t shuffle_seed = data::derive_seed(plan.seed, 2);
  const bool has_test = !dataset.indices(data::Split::kTest).empty();
  const std::size_t train_count = dataset.indices(data::Split::kTrain).size();

  for (std::size_t epoch = 1; epoch <= plan.epochs; ++epoch) {
    const data::Batches batches =
        data::batch_iter(dataset, data::Split::kTrain, plan.batch_size, shuffle_seed, epoch);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (const auto& batch : batches) {
      for (nn::Parameter* p : params) p->value.zero_grad();
      const nn::Tensor logits = model.forward(model.make_input(dataset, batch));
      const auto labels = labels_of(dataset, batch);
      const nn::LossResult loss = nn::softmax_cross_entropy(logits, labels);
      if (!std::isfinite(loss.loss)) {
        throw Error("train: non-finite loss at epoch " + std::to_string(epoch));
      }
      loss_sum += loss.loss * static_cast<double>(batch.size());
      correct += count_correct(logits, labels);
      model.backward(loss.grad_logits);
      adam.step(params);
    }
    EpochMetrics tm{epoch, data::Split::kTrain, loss_sum / static_cast<double>(train_count),
                    static_cast<double>(correct) / static_cast<double>(train_count)};
    result.metrics.push_back(tm);
    if (sink) sink(tm);
    if (plan.evaluate_test && has_test) {
      EpochMetrics em = measure(model, dataset, data::Split::kTest);
      em.epoch = epoch;
      result.metrics.push_back(em);
      if (sink) sink(em);
    }
  }

  if (plan.stage == Stage::kStep2Fusion) {
    result.frozen_hash_after = nn::parameter_hash(const_view(model.global_branch_parameters()));
  }
  result.checkpoint = model.checkpoint();
  return result;
}

nn::GradCheckReport check_model_gradients(SceneModel& model, const ModelInput& input,
                                          std::span<const std::size_t> labels,
                                          const nn::GradCheckOptions& options) {
  std::vector<nn::Parameter*> params;
  for (nn::Parameter* p : model.parameters()) {
    if (!p->frozen) params.push_back(p);
  }
  const std::vector<std::size_t> owned(labels.begin(), labels.end());
  auto objective = [&](bool compute_grad) {
    if (!compute_grad) return nn::softmax_cross_entropy(model.infer(input), owned).loss;
    const nn::LossResult loss = nn::softmax_cross_entropy(model.forward(input), owned);
    model.backward(loss.grad_logits);
    return loss.loss;
  };
  return nn::grad_check(params, objective, options);
}

}  // namespace ssf::models
