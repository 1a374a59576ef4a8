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

#ifndef SSF_NN_GRADCHECK_HPP_
#define SSF_NN_GRADCHECK_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ssf/nn/layers.hpp"

namespace ssf::nn {

struct GradCheckOptions {
  double step = 1e-6;
  double tolerance = 1e-4;
  // 0 checks every entry; otherwise this many entries per block, drawn
  // without replacement from `seed`.
  std::size_t max_entries_per_block = 0;
  std::uint64_t seed = 0;
};

struct BlockReport {
  std::string name;
  std::size_t checked = 0;
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

struct GradCheckReport {
  std::vector<BlockReport> blocks;
  double tolerance = 0.0;
  bool passed = false;

  double max_error() const;
};

// Returns the loss. When called with compute_grad = true it must also leave
// d(loss)/d(param) in each parameter's gradient slot (zeroed beforehand).
using Objective = std::function<double(bool compute_grad)>;

// |a - n| / max(1e-8, |a| + |n|)
double relative_error(double analytic, double numeric);

// Central differences per sampled entry. Throws ssf::Error on a non-finite
// loss.
GradCheckReport grad_check(const std::vector<Parameter*>& params,
                           const Objective& objective,
                           const GradCheckOptions& options = {});

}  // namespace ssf::nn

#endif  // SSF_NN_GRADCHECK_HPP_
