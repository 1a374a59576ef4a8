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

#include "ssf/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ssf/common/error.hpp"

namespace ssf::nn {
namespace {

double checked(double loss, const std::string& where) {
  if (!std::isfinite(loss)) {
    throw Error("grad_check: non-finite loss (" + std::to_string(loss) +
                ") while " + where);
  }
  return loss;
}

}  // namespace

double GradCheckReport::max_error() const {
  double m = 0.0;
  for (const auto& b : blocks) m = std::max(m, b.max_relative_error);
  return m;
}

double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) /
         std::max(1e-8, std::abs(analytic) + std::abs(numeric));
}

GradCheckReport grad_check(const std::vector<Parameter*>& params,
                           const Objective& objective,
                           const GradCheckOptions& options) {
  for (Parameter* p : params) p->value.zero_grad();
  checked(objective(true), "evaluating the analytic gradient");
  std::vector<std::vector<double>> analytic;
  analytic.reserve(params.size());
  for (Parameter* p : params) {
    const auto g = p->value.grad();
    analytic.emplace_back(g.begin(), g.end());
  }

  std::mt19937_64 rng(options.seed);
  GradCheckReport report;
  report.tolerance = options.tolerance;
  for (std::size_t b = 0; b < params.size(); ++b) {
    Parameter& p = *params[b];
    std::vector<std::size_t> entries(p.value.size());
    std::iota(entries.begin(), entries.end(), std::size_t{0});
    if (options.max_entries_per_block != 0 &&
        entries.size() > options.max_entries_per_block) {
      std::shuffle(entries.begin(), entries.end(), rng);
      entries.resize(options.max_entries_per_block);
      std::sort(entries.begin(), entries.end());
    }
    BlockReport block;
    block.name = p.name;
    for (std::size_t idx : entries) {
      double& x = p.value[idx];
      const double saved = x;
      x = saved + options.step;
      const double plus = checked(objective(false), "perturbing " + p.name);
      x = saved - options.step;
      const double minus = checked(objective(false), "perturbing " + p.name);
      x = saved;
      const double numeric = (plus - minus) / (2.0 * options.step);
      const double err = relative_error(analytic[b][idx], numeric);
      if (block.checked == 0 || err > block.max_relative_error) {
        block.max_relative_error = err;
        block.worst_index = idx;
        block.analytic = analytic[b][idx];
        block.numeric = numeric;
      }
      ++block.checked;
    }
    report.blocks.push_back(std::move(block));
  }
  report.passed = std::all_of(report.blocks.begin(), report.blocks.end(),
                              [&](const BlockReport& r) {
                                return r.max_relative_error < options.tolerance;
                              });
  // Leave the analytic gradient in place for callers that inspect it.
  for (std::size_t b = 0; b < params.size(); ++b) {
    auto g = params[b]->value.grad();
    std::copy(analytic[b].begin(), analytic[b].end(), g.begin());
  }
  return report;
}

}  // namespace ssf::nn
