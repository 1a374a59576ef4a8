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

#ifndef SSF_DATA_BATCH_HPP_
#define SSF_DATA_BATCH_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ssf/data/dataset.hpp"

namespace ssf::data {

inline constexpr std::size_t kDefaultBatchSize = 32;

using Batches = std::vector<std::vector<std::size_t>>;

// Splits `indices` into batches of `batch_size`, keeping the last partial
// batch. When `shuffle` is set the order is permuted by a generator seeded
// from (seed, epoch); otherwise the input order is kept.
Batches make_batches(const std::vector<std::size_t>& indices,
                     std::size_t batch_size, std::uint64_t seed,
                     std::uint64_t epoch, bool shuffle);

// Batches of one split for one epoch. Training batches are shuffled, test
// batches never are. Throws ValidationError on an empty split.
Batches batch_iter(const Dataset& dataset, Split split,
                   std::size_t batch_size = kDefaultBatchSize,
                   std::uint64_t seed = 0, std::uint64_t epoch = 0);

// Derives an independent stream seed; used to fan one user seed out to
// initialization, shuffling and data generation.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace ssf::data

#endif  // SSF_DATA_BATCH_HPP_
