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

#include "ssf/models/scene_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ssf/common/error.hpp"

namespace ssf::models {
namespace {

using nn::Tensor;

std::mt19937_64 seeded(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 step keeps per-component streams apart.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return std::mt19937_64(z ^ (z >> 31));
}

void append(std::vector<nn::Parameter*>& out, std::optional<nn::Sequential>& s) {
  if (!s) return;
  for (nn::Parameter* p : s->parameters()) out.push_back(p);
}

Tensor concat_rows(const Tensor& a, const Tensor& b) {
  const std::size_t batch = a.dim(0);
  const std::size_t wa = a.size() / batch, wb = b.size() / batch;
  Tensor out({batch, wa + wb});
  for (std::size_t r = 0; r < batch; ++r) {
    std::copy_n(a.data() + r * wa, wa, out.data() + r * (wa + wb));
    std::copy_n(b.data() + r * wb, wb, out.data() + r * (wa + wb) + wa);
  }
  return out;
}

void split_rows(const Tensor& joined, std::size_t wa, Tensor& a, Tensor& b) {
  const std::size_t batch = joined.dim(0);
  const std::size_t w = joined.size() / batch, wb = w - wa;
  a = Tensor({batch, wa});
  b = Tensor({batch, wb});
  for (std::size_t r = 0; r < batch; ++r) {
    std::copy_n(joined.data() + r * w, wa, a.data() + r * wa);
    std::copy_n(joined.data() + r * w + wa, wb, b.data() + r * wb);
  }
}

}  // namespace

std::size_t ModelInput::batch() const {
  if (ssf.rank() > 0) return ssf.dim(0);
  if (global.rank() > 0) return global.dim(0);
  return 0;
}

std::vector<double> fuse_concat(std::span<const double> global,
                                std::span<const double> semantic) {
  if (semantic.empty()) throw ValidationError("fuse_concat: semantic vector is empty");
  std::vector<double> out;
  out.reserve(global.size() + semantic.size());
  out.insert(out.end(), global.begin(), global.end());
  out.insert(out.end(), semantic.begin(), semantic.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!std::isfinite(out[i])) {
      throw ValidationError("fuse_concat: non-finite value at index " + std::to_string(i));
    }
  }
  return out;
}

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

SceneModel::SceneModel(ModelSpec spec, std::uint64_t seed) : spec_(std::move(spec)) {
  spec_.validate();
  columns_ = spec_.subset.column_count();
  if (spec_.uses_global()) {
    auto rng = seeded(seed, 1);
    global_branch_.emplace();
    global_branch_->emplace<nn::Linear>("global.fc1", spec_.global_in, spec_.global_width, rng);
    global_branch_->emplace<nn::Relu>();
  }
  if (spec_.uses_semantic()) {
    auto rng = seeded(seed, 2);
    switch (spec_.head) {
      case HeadKind::kCnn:
        semantic_head_ = build_ssf_cnn(
            {.num_categories = spec_.num_categories, .columns = columns_}, rng);
        break;
      case HeadKind::kNn: {
        SsfNnConfig cfg;
        cfg.num_categories = spec_.num_categories;
        cfg.columns = columns_;
        cfg.hidden = spec_.nn_hidden;
        semantic_head_ = build_ssf_nn(cfg, rng);
        break;
      }
      case HeadKind::kPcConv1d:
        semantic_head_ = build_pc_conv1d_head({.num_categories = spec_.num_categories}, rng);
        break;
    }
  }
  auto rng = seeded(seed, 3);
  switch (spec_.kind) {
    case ModelKind::kSemantic:
      semantic_classifier_.emplace();
      semantic_classifier_->emplace<nn::Linear>("cls.fc", kHeadFeatures, spec_.num_classes, rng);
      break;
    case ModelKind::kGlobal:
      global_classifier_.emplace();
      global_classifier_->emplace<nn::Linear>("global.fc2", spec_.global_width,
                                              spec_.num_classes, rng);
      break;
    case ModelKind::kFusion:
      fusion_head_.emplace();
      fusion_head_->emplace<nn::Linear>("fusion.fc3", spec_.global_width + kHeadFeatures,
                                        spec_.fc3_width, rng);
      fusion_head_->emplace<nn::Relu>();
      fusion_head_->emplace<nn::Linear>("fusion.fc4", spec_.fc3_width, spec_.num_classes, rng);
      break;
  }
}

Tensor::Shape SceneModel::ssf_sample_shape() const {
  switch (spec_.head) {
    case HeadKind::kCnn: return {1, spec_.num_categories, columns_};
    case HeadKind::kNn: return {spec_.num_categories * columns_};
    case HeadKind::kPcConv1d: return {1, spec_.num_categories};
  }
  return {};
}

ModelInput SceneModel::make_input(const data::Dataset& dataset,
                                  std::span<const std::size_t> indices) const {
  std::vector<const data::Sample*> samples;
  samples.reserve(indices.size());
  for (std::size_t i : indices) samples.push_back(&dataset.samples.at(i));
  return make_input(samples);
}

ModelInput SceneModel::make_input(std::span<const data::Sample* const> samples) const {
  if (samples.empty()) throw ShapeError("model input: empty batch");
  const std::size_t batch = samples.size();
  ModelInput in;
  if (spec_.uses_semantic()) {
    Tensor::Shape shape = ssf_sample_shape();
    const std::size_t per = nn::shape_size(shape);
    shape.insert(shape.begin(), batch);
    in.ssf = Tensor(shape);
    for (std::size_t b = 0; b < batch; ++b) {
      const data::Sample& s = *samples[b];
      if (s.ssf.num_categories() != spec_.num_categories) {
        throw ShapeError("sample " + s.id + ": SSF has " + std::to_string(s.ssf.num_categories()) +
                         " rows, model expects L=" + std::to_string(spec_.num_categories));
      }
      const FeatureMatrix fm = select_subset(s.ssf, spec_.subset);
      std::copy(fm.values.begin(), fm.values.end(), in.ssf.data() + b * per);
    }
  }
  if (spec_.uses_global()) {
    in.global = Tensor({batch, spec_.global_in});
    for (std::size_t b = 0; b < batch; ++b) {
      const data::Sample& s = *samples[b];
      if (s.global.size() != spec_.global_in) {
        throw ShapeError("sample " + s.id + ": global vector has width " +
                         std::to_string(s.global.size()) + ", model expects " +
                         std::to_string(spec_.global_in));
      }
      std::copy(s.global.begin(), s.global.end(), in.global.data() + b * spec_.global_in);
    }
  }
  return in;
}

Tensor SceneModel::forward(const ModelInput& input) {
  switch (spec_.kind) {
    case ModelKind::kSemantic:
      return semantic_classifier_->forward(semantic_head_->forward(input.ssf));
    case ModelKind::kGlobal:
      return global_classifier_->forward(global_branch_->forward(input.global));
    case ModelKind::kFusion: {
      const Tensor g = global_branch_->forward(input.global);
      const Tensor s = semantic_head_->forward(input.ssf);
      return fusion_head_->forward(concat_rows(g, s));
    }
  }
  return {};
}

void SceneModel::backward(const Tensor& grad_logits) {
  switch (spec_.kind) {
    case ModelKind::kSemantic:
      semantic_head_->backward(semantic_classifier_->backward(grad_logits));
      return;
    case ModelKind::kGlobal:
      global_branch_->backward(global_classifier_->backward(grad_logits));
      return;
    case ModelKind::kFusion: {
      const Tensor joined = fusion_head_->backward(grad_logits);
      Tensor gg, gs;
      split_rows(joined, spec_.global_width, gg, gs);
      semantic_head_->backward(gs);
      const auto branch = global_branch_parameters();
      const bool frozen = std::all_of(branch.begin(), branch.end(),
                                      [](const nn::Parameter* p) { return p->frozen; });
      if (!frozen) global_branch_->backward(gg);
      return;
    }
  }
}

Tensor SceneModel::infer(const ModelInput& input) const {
  switch (spec_.kind) {
    case ModelKind::kSemantic:
      return semantic_classifier_->infer(semantic_head_->infer(input.ssf));
    case ModelKind::kGlobal:
      return global_classifier_->infer(global_branch_->infer(input.global));
    case ModelKind::kFusion:
      return fusion_head_->infer(
          concat_rows(global_branch_->infer(input.global), semantic_head_->infer(input.ssf)));
  }
  return {};
}

std::vector<nn::Parameter*> SceneModel::parameters() {
  std::vector<nn::Parameter*> out;
  append(out, global_branch_);
  append(out, global_classifier_);
  append(out, semantic_head_);
  append(out, semantic_classifier_);
  append(out, fusion_head_);
  return out;
}

std::vector<const nn::Parameter*> SceneModel::parameters() const {
  auto all = const_cast<SceneModel*>(this)->parameters();
  return {all.begin(), all.end()};
}

std::vector<nn::Parameter*> SceneModel::global_branch_parameters() {
  std::vector<nn::Parameter*> out;
  append(out, global_branch_);
  return out;
}

std::vector<const nn::Parameter*> SceneModel::global_branch_parameters() const {
  auto all = const_cast<SceneModel*>(this)->global_branch_parameters();
  return {all.begin(), all.end()};
}

void SceneModel::set_global_frozen(bool frozen) {
  for (nn::Parameter* p : global_branch_parameters()) p->frozen = frozen;
}

std::vector<std::string> SceneModel::frozen_names() const {
  std::vector<std::string> out;
  for (const nn::Parameter* p : parameters()) {
    if (p->frozen) out.push_back(p->name);
  }
  return out;
}

void SceneModel::load_global_branch(const nn::Checkpoint& step1) {
  if (!spec_.uses_global()) {
    throw ValidationError("load_global_branch: model has no global branch");
  }
  const ModelSpec other = ModelSpec::from_json(step1.architecture);
  if (other.kind != ModelKind::kGlobal) {
    throw ValidationError("checkpoint is a " + to_string(other.kind) +
                          " model, expected a global (step 1) model");
  }
  if (other.global_in != spec_.global_in || other.global_width != spec_.global_width) {
    throw ValidationError("checkpoint global branch is " + std::to_string(other.global_in) +
                          "->" + std::to_string(other.global_width) + ", model expects " +
                          std::to_string(spec_.global_in) + "->" +
                          std::to_string(spec_.global_width));
  }
  nn::restore(step1, global_branch_parameters());
}

nn::Checkpoint SceneModel::checkpoint() const {
  auto params = const_cast<SceneModel*>(this)->parameters();
  return nn::snapshot(spec_.to_json(), params);
}

void SceneModel::load(const nn::Checkpoint& checkpoint) {
  const ModelSpec other = ModelSpec::from_json(checkpoint.architecture);
  if (!(other == spec_)) {
    throw ValidationError("checkpoint architecture " + checkpoint.architecture +
                          " does not match model " + spec_.to_json());
  }
  nn::restore(checkpoint, parameters());
}

std::size_t SceneModel::parameter_count() const {
  return nn::parameter_count(const_cast<SceneModel*>(this)->parameters());
}

std::uint64_t SceneModel::flops() const {
  std::uint64_t total = 0;
  if (global_branch_) total += global_branch_->flops({spec_.global_in});
  if (global_classifier_) total += global_classifier_->flops({spec_.global_width});
  if (semantic_head_) total += semantic_head_->flops(ssf_sample_shape());
  if (semantic_classifier_) total += semantic_classifier_->flops({kHeadFeatures});
  if (fusion_head_) total += fusion_head_->flops({spec_.global_width + kHeadFeatures});
  return total;
}

Prediction predict(const SceneModel& model, const data::Sample& sample) {
  const data::Sample* ptr = &sample;
  const Tensor logits = model.infer(model.make_input(std::span(&ptr, 1)));
  Prediction p;
  p.logits.assign(logits.values().begin(), logits.values().end());
  p.label = argmax(p.logits);
  return p;
}

std::vector<std::size_t> predict_labels(const SceneModel& model, const data::Dataset& dataset,
                                        std::span<const std::size_t> indices,
                                        std::size_t batch_size) {
  std::vector<std::size_t> out;
  out.reserve(indices.size());
  batch_size = std::max<std::size_t>(batch_size, 1);
  for (std::size_t start = 0; start < indices.size(); start += batch_size) {
    const auto chunk = indices.subspan(start, std::min(batch_size, indices.size() - start));
    const Tensor logits = model.infer(model.make_input(dataset, chunk));
    const std::size_t classes = logits.dim(1);
    for (std::size_t r = 0; r < chunk.size(); ++r) {
      out.push_back(argmax(logits.values().subspan(r * classes, classes)));
    }
  }
  return out;
}

}  // namespace ssf::models
