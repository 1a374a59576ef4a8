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

#include "ssf/eval/ablation.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <thread>

#include "json.hpp"
#include "ssf/common/error.hpp"

namespace ssf::eval {
namespace {

AblationResult run_cell(const AblationCell& cell, const data::Dataset& dataset,
                        const AblationConfig& config) {
  AblationResult r;
  r.cell = cell;
  try {
    models::ModelSpec spec;
    spec.kind = models::ModelKind::kSemantic;
    spec.head = cell.model_head();
    spec.subset = cell.subset;
    spec.num_categories = dataset.num_categories;
    spec.num_classes = dataset.num_classes;
    spec.nn_hidden = config.nn_hidden;
    models::SceneModel model(spec, config.plan.seed);
    models::TrainPlan plan = config.plan;
    plan.stage = models::Stage::kSemanticOnly;
    plan.evaluate_test = false;
    models::train(plan, dataset, model);
    r.parameters = model.parameter_count();
    r.train_accuracy = models::measure(model, dataset, data::Split::kTrain).accuracy;
    r.test_accuracy = models::measure(model, dataset, data::Split::kTest).accuracy;
    r.ok = true;
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
  }
  return r;
}

}  // namespace

models::HeadKind AblationCell::model_head() const {
  if (head == GridHead::kNn) return models::HeadKind::kNn;
  if (subset == FeatureSubset(true, false, false)) return models::HeadKind::kPcConv1d;
  return models::HeadKind::kCnn;
}

std::string AblationCell::label() const {
  return subset.label() + (head == GridHead::kCnn ? "-CNN" : "-NN");
}

AblationGrid AblationGrid::full() {
  const FeatureSubset subsets[] = {
      {true, false, false}, {false, true, false}, {false, false, true}, {false, true, true},
      {true, true, false},  {true, false, true},  {true, true, true},
  };
  AblationGrid g;
  for (const FeatureSubset& s : subsets) {
    g.cells.push_back({s, GridHead::kCnn});
    g.cells.push_back({s, GridHead::kNn});
  }
  return g;
}

std::string AblationGrid::to_text() const {
  std::size_t width = 7;
  for (const AblationCell& c : cells) width = std::max(width, c.label().size());
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %9s  %9s  %10s\n", static_cast<int>(width), "feature",
                "train_acc", "test_acc", "params");
  out += buf;
  for (const AblationResult& r : results) {
    if (r.ok) {
      std::snprintf(buf, sizeof buf, "%-*s  %9.4f  %9.4f  %10zu\n", static_cast<int>(width),
                    r.cell.label().c_str(), r.train_accuracy, r.test_accuracy, r.parameters);
    } else {
      std::snprintf(buf, sizeof buf, "%-*s  error: %.180s\n", static_cast<int>(width),
                    r.cell.label().c_str(), r.error.c_str());
    }
    out += buf;
  }
  return out;
}

std::string AblationGrid::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const AblationResult& r : results) {
    nlohmann::json row = {{"feature", r.cell.label()},
                          {"subset", r.cell.subset.flags()},
                          {"head", r.cell.head == GridHead::kCnn ? "cnn" : "nn"},
                          {"ok", r.ok}};
    if (r.ok) {
      row["train_accuracy"] = r.train_accuracy;
      row["test_accuracy"] = r.test_accuracy;
      row["parameters"] = r.parameters;
    } else {
      row["error"] = r.error;
    }
    rows.push_back(row);
  }
  return nlohmann::json{{"rows", rows}}.dump(2);
}

AblationGrid run_ablation(AblationGrid grid, const data::Dataset& dataset,
                          const AblationConfig& config) {
  grid.results.assign(grid.cells.size(), {});
  const std::size_t threads = std::clamp<std::size_t>(config.threads, 1, grid.cells.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
      grid.results[i] = run_cell(grid.cells[i], dataset, config);
    }
    return grid;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < grid.cells.size(); i = next++) {
          grid.results[i] = run_cell(grid.cells[i], dataset, config);
        }
      });
    }
  }
  return grid;
}

}  // namespace ssf::eval
