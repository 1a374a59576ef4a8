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

#ifndef SSF_EVAL_METRICS_HPP_
#define SSF_EVAL_METRICS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ssf/data/dataset.hpp"
#include "ssf/data/manifest.hpp"
#include "ssf/models/scene_model.hpp"

namespace ssf::eval {

struct SamplePrediction {
  std::string id;
  std::size_t label = 0;
  std::size_t predicted = 0;
};

struct EvalReport {
  std::size_t num_classes = 0;
  std::size_t sample_count = 0;
  double accuracy = 0.0;
  // Zero for classes without support.
  std::vector<double> per_class_accuracy;
  // confusion[true * num_classes + predicted]
  std::vector<std::size_t> confusion;
  std::vector<SamplePrediction> predictions;

  std::size_t cell(std::size_t truth, std::size_t predicted) const {
    return confusion[truth * num_classes + predicted];
  }
  std::size_t support(std::size_t truth) const;
  std::size_t trace() const;

  std::string to_json() const;
  std::string to_text() const;
  std::string confusion_csv() const;
};

// Builds a report from stored predictions. Throws ValidationError for
// out-of-range labels.
EvalReport make_report(std::size_t num_classes, std::span<const SamplePrediction> predictions);

// Predicts every sample of `split`; `threads` workers shard the split and
// their counts are merged in sample order. Throws ValidationError when the
// model's output width differs from the dataset's class count.
EvalReport evaluate(const models::SceneModel& model, const data::Dataset& dataset,
                    data::Split split, std::size_t threads = 1);
EvalReport evaluate(const models::SceneModel& model, const data::DatasetManifest& manifest,
                    data::Split split, std::size_t threads = 1);

}  // namespace ssf::eval

#endif  // SSF_EVAL_METRICS_HPP_
