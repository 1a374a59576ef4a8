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

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "ssf/common/error.hpp"
#include "ssf/data/synth.hpp"
#include "ssf/eval/ablation.hpp"
#include "ssf/eval/complexity.hpp"
#include "ssf/eval/metrics.hpp"
#include "ssf/nn/kernels.hpp"

using namespace ssf::eval;
using ssf::FeatureSubset;
using ssf::data::Dataset;
using ssf::data::Split;
using ssf::models::HeadKind;
using ssf::models::ModelKind;
using ssf::models::ModelSpec;
using ssf::models::SceneModel;

namespace {

Dataset small_standard(std::size_t per_class, std::uint64_t seed = 1) {
  auto spec = ssf::data::standard_synth_spec(seed);
  spec.samples_per_class = per_class;
  spec.global_width = 0;
  return ssf::data::to_dataset(ssf::data::generate_synthetic_set(spec), spec);
}

ModelSpec semantic_spec(HeadKind head, std::size_t L, std::size_t classes) {
  ModelSpec s;
  s.head = head;
  s.num_categories = L;
  s.num_classes = classes;
  return s;
}

std::vector<SamplePrediction> labelled(const std::vector<std::size_t>& truth,
                                       const std::vector<std::size_t>& predicted) {
  std::vector<SamplePrediction> out;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    out.push_back({"s" + std::to_string(i), truth[i], predicted[i]});
  }
  return out;
}

}  // namespace

TEST_CASE("perfect and constant predictors") {
  std::vector<std::size_t> truth;
  for (std::size_t c = 0; c < 4; ++c) truth.insert(truth.end(), 5, c);
  const EvalReport perfect = make_report(4, labelled(truth, truth));
  CHECK(perfect.accuracy == 1.0);
  for (std::size_t t = 0; t < 4; ++t) {
    for (std::size_t p = 0; p < 4; ++p) CHECK(perfect.cell(t, p) == (t == p ? 5u : 0u));
  }
  const EvalReport constant = make_report(4, labelled(truth, std::vector<std::size_t>(20, 2)));
  CHECK(constant.accuracy == 0.25);
  CHECK(constant.per_class_accuracy == std::vector<double>{0.0, 0.0, 1.0, 0.0});
  CHECK_THROWS_AS(make_report(4, labelled({4}, {0})), ssf::ValidationError);
  CHECK_THROWS_AS(make_report(4, labelled({0}, {4})), ssf::ValidationError);
}

TEST_CASE("confusion invariants on random predictions") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const std::size_t c = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 60)(rng);
    std::uniform_int_distribution<std::size_t> cls(0, c - 1);
    std::vector<std::size_t> truth(n), pred(n);
    for (std::size_t i = 0; i < n; ++i) {
      truth[i] = cls(rng);
      pred[i] = cls(rng);
    }
    const EvalReport r = make_report(c, labelled(truth, pred));
    std::size_t correct = 0;
    for (const auto& p : r.predictions) correct += p.label == p.predicted;
    CHECK(r.accuracy == static_cast<double>(correct) / static_cast<double>(n));
    CHECK(r.accuracy == static_cast<double>(r.trace()) / static_cast<double>(r.sample_count));
    for (std::size_t k = 0; k < c; ++k) {
      std::size_t row = 0, support = 0;
      for (std::size_t p = 0; p < c; ++p) row += r.cell(k, p);
      for (std::size_t l : truth) support += l == k;
      CHECK(row == support);
      CHECK(r.support(k) == support);
      if (support == 0) CHECK(r.per_class_accuracy[k] == 0.0);
    }
  }
}

TEST_CASE("report serializations") {
  const EvalReport r = make_report(2, labelled({0, 1, 1}, {0, 0, 1}));
  const auto j = nlohmann::json::parse(r.to_json());
  CHECK(j.at("accuracy").get<double>() == doctest::Approx(2.0 / 3.0));
  CHECK(j.at("confusion").size() == 2);
  CHECK(j.at("sample_count").get<std::size_t>() == 3);
  CHECK(r.confusion_csv() == "true\\pred,0,1\n0,1,0\n1,1,1\n");
  CHECK(r.to_text().find("accuracy") != std::string::npos);
}

TEST_CASE("evaluate is deterministic across thread counts") {
  const Dataset ds = small_standard(10);
  SceneModel m(semantic_spec(HeadKind::kNn, 8, 6), 4);
  const EvalReport one = evaluate(m, ds, Split::kTest, 1);
  const EvalReport four = evaluate(m, ds, Split::kTest, 4);
  CHECK(one.confusion == four.confusion);
  CHECK(one.accuracy == four.accuracy);
  CHECK(one.sample_count == ds.indices(Split::kTest).size());
  for (std::size_t i = 0; i < one.predictions.size(); ++i) {
    CHECK(one.predictions[i].id == four.predictions[i].id);
    CHECK(one.predictions[i].predicted == four.predictions[i].predicted);
  }
  const auto recount = make_report(6, one.predictions);
  CHECK(recount.confusion == one.confusion);

  SceneModel wrong(semantic_spec(HeadKind::kNn, 8, 5), 4);
  CHECK_THROWS_AS(evaluate(wrong, ds, Split::kTest), ssf::ValidationError);
}

TEST_CASE("evaluate from a manifest") {
  const auto dir = std::filesystem::temp_directory_path() / "ssf_test_eval_manifest";
  std::filesystem::remove_all(dir);
  auto spec = ssf::data::standard_synth_spec(2);
  spec.samples_per_class = 4;
  const auto manifest = ssf::data::generate_synthetic(spec, dir);
  const Dataset ds = ssf::data::to_dataset(ssf::data::generate_synthetic_set(spec), spec);
  SceneModel m(semantic_spec(HeadKind::kCnn, 8, 6), 1);
  CHECK(evaluate(m, manifest, Split::kTrain, 2).confusion ==
        evaluate(m, ds, Split::kTrain).confusion);
  std::filesystem::remove_all(dir);
}

TEST_CASE("ablation grid layout") {
  const AblationGrid g = AblationGrid::full();
  std::vector<std::string> labels;
  for (const auto& c : g.cells) labels.push_back(c.label());
  CHECK(labels == std::vector<std::string>{"PC-CNN", "PC-NN", "AP-CNN", "AP-NN", "SD-CNN",
                                           "SD-NN", "AP&SD-CNN", "AP&SD-NN", "PC&AP-CNN",
                                           "PC&AP-NN", "PC&SD-CNN", "PC&SD-NN", "SSFs-CNN",
                                           "SSFs-NN"});
  CHECK(g.cells[0].model_head() == HeadKind::kPcConv1d);
  CHECK(g.cells[1].model_head() == HeadKind::kNn);
  CHECK(g.cells[12].model_head() == HeadKind::kCnn);
}

TEST_CASE("ablation runs are deterministic and isolate failures") {
  const Dataset ds = small_standard(4);
  AblationConfig cfg;
  cfg.plan.epochs = 1;
  cfg.plan.batch_size = 8;
  cfg.plan.seed = 7;
  cfg.nn_hidden = {16, 1024};
  const AblationGrid a = run_ablation(AblationGrid::full(), ds, cfg);
  cfg.threads = 3;
  const AblationGrid b = run_ablation(AblationGrid::full(), ds, cfg);
  REQUIRE(a.results.size() == 14);
  for (std::size_t i = 0; i < 14; ++i) {
    CHECK(a.results[i].ok);
    CHECK(a.results[i].cell.label() == a.cells[i].label());
    CHECK(a.results[i].train_accuracy == b.results[i].train_accuracy);
    CHECK(a.results[i].test_accuracy == b.results[i].test_accuracy);
    CHECK(a.results[i].parameters == b.results[i].parameters);
  }
  CHECK(a.to_json() == b.to_json());
  CHECK(nlohmann::json::parse(a.to_json()).at("rows").size() == 14);
  CHECK(a.to_text().find("AP&SD-NN") != std::string::npos);

  Dataset broken = ds;
  broken.samples[0].label = 99;
  const AblationGrid c = run_ablation(AblationGrid::full(), broken, cfg);
  REQUIRE(c.results.size() == 14);
  for (const auto& r : c.results) {
    CHECK_FALSE(r.ok);
    CHECK(r.error.find("label") != std::string::npos);
  }
  CHECK(c.to_text().find("error:") != std::string::npos);
}

TEST_CASE("closed-form parameters match built models") {
  std::vector<ModelSpec> specs;
  specs.push_back(semantic_spec(HeadKind::kCnn, 40, 10));
  specs.push_back(semantic_spec(HeadKind::kNn, 40, 10));
  ModelSpec pc = semantic_spec(HeadKind::kPcConv1d, 40, 10);
  pc.subset = FeatureSubset(true, false, false);
  specs.push_back(pc);
  ModelSpec sd = semantic_spec(HeadKind::kCnn, 13, 3);
  sd.subset = FeatureSubset(false, false, true);
  specs.push_back(sd);
  ModelSpec g = semantic_spec(HeadKind::kNn, 8, 6);
  g.kind = ModelKind::kGlobal;
  g.global_in = 64;
  specs.push_back(g);
  g.kind = ModelKind::kFusion;
  specs.push_back(g);
  g.head = HeadKind::kCnn;
  specs.push_back(g);
  for (const ModelSpec& s : specs) {
    const SceneModel m(s, 1);
    CHECK(m.parameter_count() == closed_form_parameters(s));
  }
  // Independent sum for the SSFs-NN classifier at L=40 with 10 classes.
  CHECK(closed_form_parameters(specs[1]) == 628224 + 1024 * 10 + 10);
}

TEST_CASE("model FLOPs equal twice the instrumented MAC count") {
  for (HeadKind head : {HeadKind::kCnn, HeadKind::kNn}) {
    const SceneModel m(semantic_spec(head, 12, 4), 1);
    ssf::models::ModelInput in;
    in.ssf = ssf::nn::Tensor([&] {
      auto shape = m.ssf_sample_shape();
      shape.insert(shape.begin(), 1);
      return shape;
    }(), 0.25);
    ssf::nn::MacCounterScope scope;
    m.infer(in);
    CHECK(m.flops() == 2 * scope.count());
  }
}

TEST_CASE("complexity report") {
  const SceneModel cnn(semantic_spec(HeadKind::kCnn, 8, 6), 1);
  const SceneModel nn(semantic_spec(HeadKind::kNn, 8, 6), 1);
  const BenchOptions opts{5, 20};
  const auto rc = measure_complexity(cnn, "SSFs-CNN", opts);
  const auto rn = measure_complexity(nn, "SSFs-NN", opts);
  CHECK(rc.parameters == rc.closed_form_parameters);
  CHECK(rn.parameters == rn.closed_form_parameters);
  CHECK(rc.iterations == 20);
  CHECK(rc.samples_per_second > 0.0);
  CHECK(rc.flops == cnn.flops());
  const std::string table = complexity_table({rc, rn});
  CHECK(table.find("FLOPs (B)") != std::string::npos);
  CHECK(table.find("SSFs-NN") != std::string::npos);
  CHECK(nlohmann::json::parse(complexity_json({rc, rn})).at("models").size() == 2);
}
