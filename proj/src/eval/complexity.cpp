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

#include "ssf/eval/complexity.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "json.hpp"
#include "ssf/models/config.hpp"

namespace ssf::eval {

std::size_t closed_form_parameters(const models::ModelSpec& spec) {
  using models::HeadKind;
  const std::size_t classes = spec.num_classes;
  std::size_t head = 0;
  if (spec.uses_semantic()) {
    const std::size_t k = spec.subset.column_count();
    switch (spec.head) {
      case HeadKind::kCnn:
        head = models::ssf_cnn_param_count({.num_categories = spec.num_categories, .columns = k});
        break;
      case HeadKind::kNn: {
        models::SsfNnConfig cfg;
        cfg.num_categories = spec.num_categories;
        cfg.columns = k;
        cfg.hidden = spec.nn_hidden;
        head = models::ssf_nn_param_count(cfg);
        break;
      }
      case HeadKind::kPcConv1d:
        head = models::pc_head_param_count({.num_categories = spec.num_categories});
        break;
    }
  }
  const std::size_t fc1 = spec.global_in * spec.global_width + spec.global_width;
  const std::size_t feat = models::kHeadFeatures;
  switch (spec.kind) {
    case models::ModelKind::kSemantic:
      return head + feat * classes + classes;
    case models::ModelKind::kGlobal:
      return fc1 + spec.global_width * classes + classes;
    case models::ModelKind::kFusion:
      return fc1 + head + (spec.global_width + feat) * spec.fc3_width + spec.fc3_width +
             spec.fc3_width * classes + classes;
  }
  return 0;
}

ComplexityReport measure_complexity(const models::SceneModel& model, std::string name,
                                    const BenchOptions& options) {
  ComplexityReport r;
  r.name = std::move(name);
  r.flops = model.flops();
  r.parameters = model.parameter_count();
  r.closed_form_parameters = closed_form_parameters(model.spec());
  r.iterations = std::max<std::size_t>(options.iterations, 1);

  models::ModelInput input;
  if (model.spec().uses_semantic()) {
    nn::Tensor::Shape shape = model.ssf_sample_shape();
    shape.insert(shape.begin(), 1);
    input.ssf = nn::Tensor(shape, 0.25);
  }
  if (model.spec().uses_global()) input.global = nn::Tensor({1, model.spec().global_in}, 0.25);

  double sink = 0.0;
  for (std::size_t i = 0; i < options.warmup; ++i) sink += model.infer(input)[0];
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < r.iterations; ++i) sink += model.infer(input)[0];
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  // Keeps the loop observable.
  if (sink == -1.0) std::fputc(' ', stderr);
  r.samples_per_second = static_cast<double>(r.iterations) / std::max(elapsed.count(), 1e-12);
  return r;
}

std::string complexity_table(const std::vector<ComplexityReport>& reports) {
  std::size_t width = 5;
  for (const auto& r : reports) width = std::max(width, r.name.size());
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %12s  %12s  %10s\n", static_cast<int>(width), "model",
                "FLOPs (B)", "Params (M)", "FPS");
  out += buf;
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%-*s  %12.6f  %12.6f  %10.1f\n", static_cast<int>(width),
                  r.name.c_str(), static_cast<double>(r.flops) / 1e9,
                  static_cast<double>(r.parameters) / 1e6, r.samples_per_second);
    out += buf;
  }
  return out;
}

std::string complexity_json(const std::vector<ComplexityReport>& reports) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : reports) {
    rows.push_back({{"model", r.name},
                    {"flops", r.flops},
                    {"parameters", r.parameters},
                    {"closed_form_parameters", r.closed_form_parameters},
                    {"samples_per_second", r.samples_per_second},
                    {"iterations", r.iterations}});
  }
  return nlohmann::json{{"models", rows}}.dump(2);
}

}  // namespace ssf::eval
