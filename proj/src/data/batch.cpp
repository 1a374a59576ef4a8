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

#include "ssf/data/batch.hpp"

#include <algorithm>
#include <random>

namespace ssf::data {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined words
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Batches make_batches(const std::vector<std::size_t>& indices,
                     std::size_t batch_size, std::uint64_t seed,
                     std::uint64_t epoch, bool shuffle) {
  if (batch_size == 0) throw ValidationError("batch size must be >= 1");
  std::vector<std::size_t> order = indices;
  if (shuffle) {
    std::mt19937_64 rng(derive_seed(seed, 0x5348554646ull + epoch));
    std::shuffle(order.begin(), order.end(), rng);
  }
  Batches out;
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    const std::size_t end = std::min(order.size(), start + batch_size);
    out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                     order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return out;
}

Batches batch_iter(const Dataset& dataset, Split split, std::size_t batch_size,
                   std::uint64_t seed, std::uint64_t epoch) {
  const auto idx = dataset.indices(split);
  if (idx.empty()) {
    throw ValidationError("split '" + to_string(split) + "' is empty");
  }
  return make_batches(idx, batch_size, seed, epoch, split == Split::kTrain);
}

}  // namespace ssf::data
