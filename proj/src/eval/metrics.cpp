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

#include "ssf/eval/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <thread>

#include "json.hpp"
#include "ssf/common/error.hpp"

namespace ssf::eval {

std::size_t EvalReport::support(std::size_t truth) const {
  std::size_t total = 0;
  for (std::size_t p = 0; p < num_classes; ++p) total += cell(truth, p);
  return total;
}

std::size_t EvalReport::trace() const {
  std::size_t total = 0;
  for (std::size_t c = 0; c < num_classes; ++c) total += cell(c, c);
  return total;
}

std::string EvalReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t t = 0; t < num_classes; ++t) {
    rows.push_back(std::vector<std::size_t>(confusion.begin() + t * num_classes,
                                            confusion.begin() + (t + 1) * num_classes));
  }
  nlohmann::json preds = nlohmann::json::array();
  for (const SamplePrediction& p : predictions) {
    preds.push_back({{"id", p.id}, {"label", p.label}, {"predicted", p.predicted}});
  }
  nlohmann::json j = {{"num_classes", num_classes},   {"sample_count", sample_count},
                      {"accuracy", accuracy},         {"per_class_accuracy", per_class_accuracy},
                      {"confusion", rows},            {"predictions", preds}};
  return j.dump(2);
}

std::string EvalReport::to_text() const {
  std::string out;
  char buf[96];
  std::snprintf(buf, sizeof buf, "samples   %zu\naccuracy  %.4f\n", sample_count, accuracy);
  out += buf;
  out += "class  support  accuracy\n";
  for (std::size_t c = 0; c < num_classes; ++c) {
    std::snprintf(buf, sizeof buf, "%5zu  %7zu  %8.4f\n", c, support(c), per_class_accuracy[c]);
    out += buf;
  }
  return out;
}

std::string EvalReport::confusion_csv() const {
  std::string out = "true\\pred";
  for (std::size_t p = 0; p < num_classes; ++p) out += "," + std::to_string(p);
  out += "\n";
  for (std::size_t t = 0; t < num_classes; ++t) {
    out += std::to_string(t);
    for (std::size_t p = 0; p < num_classes; ++p) out += "," + std::to_string(cell(t, p));
    out += "\n";
  }
  return out;
}

EvalReport make_report(std::size_t num_classes, std::span<const SamplePrediction> predictions) {
  if (num_classes == 0) throw ValidationError("report: num_classes must be >= 1");
  EvalReport r;
  r.num_classes = num_classes;
  r.sample_count = predictions.size();
  r.confusion.assign(num_classes * num_classes, 0);
  r.predictions.assign(predictions.begin(), predictions.end());
  for (const SamplePrediction& p : predictions) {
    if (p.label >= num_classes || p.predicted >= num_classes) {
      throw ValidationError("report: sample " + p.id + " has class outside [0, " +
                            std::to_string(num_classes) + ")");
    }
    ++r.confusion[p.label * num_classes + p.predicted];
  }
  r.per_class_accuracy.assign(num_classes, 0.0);
  for (std::size_t c = 0; c < num_classes; ++c) {
    const std::size_t s = r.support(c);
    if (s > 0) r.per_class_accuracy[c] = static_cast<double>(r.cell(c, c)) / static_cast<double>(s);
  }
  if (r.sample_count > 0) {
    r.accuracy = static_cast<double>(r.trace()) / static_cast<double>(r.sample_count);
  }
  return r;
}

EvalReport evaluate(const models::SceneModel& model, const data::Dataset& dataset,
                    data::Split split, std::size_t threads) {
  if (model.spec().num_classes != dataset.num_classes) {
    throw ValidationError("evaluate: model emits " + std::to_string(model.spec().num_classes) +
                          " classes, dataset has " + std::to_string(dataset.num_classes));
  }
  const std::vector<std::size_t> idx = dataset.indices(split);
  std::vector<std::size_t> predicted(idx.size());
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(idx.size(), 1));
  const std::size_t chunk = (idx.size() + threads - 1) / std::max<std::size_t>(threads, 1);
  auto work = [&](std::size_t begin, std::size_t end) {
    const auto labels =
        models::predict_labels(model, dataset, std::span(idx).subspan(begin, end - begin));
    std::copy(labels.begin(), labels.end(), predicted.begin() + static_cast<std::ptrdiff_t>(begin));
  };
  if (threads <= 1) {
    if (!idx.empty()) work(0, idx.size());
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t b = 0; b < idx.size(); b += chunk) {
      pool.emplace_back(work, b, std::min(idx.size(), b + chunk));
    }
  }
  std::vector<SamplePrediction> preds;
  preds.reserve(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const data::Sample& s = dataset.samples[idx[k]];
    preds.push_back({s.id, s.label, predicted[k]});
  }
  return make_report(dataset.num_classes, preds);
}

EvalReport evaluate(const models::SceneModel& model, const data::DatasetManifest& manifest,
                    data::Split split, std::size_t threads) {
  return evaluate(model, data::load_dataset(manifest, threads), split, threads);
}

}  // namespace ssf::eval
