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

#ifndef SSF_EVAL_COMPLEXITY_HPP_
#define SSF_EVAL_COMPLEXITY_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ssf/models/scene_model.hpp"

namespace ssf::eval {

struct ComplexityReport {
  std::string name;
  std::uint64_t flops = 0;  // analytic, one sample
  std::size_t parameters = 0;
  std::size_t closed_form_parameters = 0;
  double samples_per_second = 0.0;  // batch 1, after warmup
  std::size_t iterations = 0;
};

struct BenchOptions {
  std::size_t warmup = 100;
  std::size_t iterations = 1000;
};

// Parameter count of the whole model from layer widths alone.
std::size_t closed_form_parameters(const models::ModelSpec& spec);

ComplexityReport measure_complexity(const models::SceneModel& model, std::string name,
                                    const BenchOptions& options = {});

std::string complexity_table(const std::vector<ComplexityReport>& reports);
std::string complexity_json(const std::vector<ComplexityReport>& reports);

}  // namespace ssf::eval

#endif  // SSF_EVAL_COMPLEXITY_HPP_
