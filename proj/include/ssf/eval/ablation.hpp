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

#ifndef SSF_EVAL_ABLATION_HPP_
#define SSF_EVAL_ABLATION_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "ssf/core/ssf.hpp"
#include "ssf/data/dataset.hpp"
#include "ssf/models/config.hpp"
#include "ssf/models/train.hpp"

namespace ssf::eval {

// Head kinds of the grid. The CNN head over the PC subset is the 1D
// convolution head.
enum class GridHead { kCnn, kNn };

struct AblationCell {
  FeatureSubset subset;
  GridHead head = GridHead::kCnn;

  models::HeadKind model_head() const;
  // "PC-CNN", "AP&SD-NN", "SSFs-CNN", ...
  std::string label() const;
};

struct AblationResult {
  AblationCell cell;
  bool ok = false;
  std::string error;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  std::size_t parameters = 0;
};

struct AblationGrid {
  std::vector<AblationCell> cells;
  std::vector<AblationResult> results;  // filled by run_ablation, cell order

  // The 14 rows {PC, AP, SD, AP&SD, PC&AP, PC&SD, SSFs} x {CNN, NN}.
  static AblationGrid full();

  std::string to_text() const;
  std::string to_json() const;
};

struct AblationConfig {
  models::TrainPlan plan;  // stage is forced to semantic_only
  std::vector<std::size_t> nn_hidden{512, 1024};
  std::size_t threads = 1;
};

// Trains one semantic-only model per cell with the same seed and epochs.
// A failing cell records its error and the grid continues.
AblationGrid run_ablation(AblationGrid grid, const data::Dataset& dataset,
                          const AblationConfig& config);

}  // namespace ssf::eval

#endif  // SSF_EVAL_ABLATION_HPP_
