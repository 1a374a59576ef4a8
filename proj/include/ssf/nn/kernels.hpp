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

#ifndef SSF_NN_KERNELS_HPP_
#define SSF_NN_KERNELS_HPP_

#include <cstddef>
#include <cstdint>

namespace ssf::nn {

// C[M,N] += A[M,K] * B[K,N], all row-major and densely packed.
void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c);

// dst[cols, rows] = src[rows, cols]^T
void transpose(std::size_t rows, std::size_t cols, const double* src,
               double* dst);

// Multiply-accumulate instrumentation. While a MacCounterScope is alive on
// the current thread, every gemm_nn call adds m*n*k to the counter.
class MacCounterScope {
 public:
  MacCounterScope();
  ~MacCounterScope();
  MacCounterScope(const MacCounterScope&) = delete;
  MacCounterScope& operator=(const MacCounterScope&) = delete;

  std::uint64_t count() const;

 private:
  bool previous_enabled_;
  std::uint64_t previous_count_;
};

}  // namespace ssf::nn

#endif  // SSF_NN_KERNELS_HPP_
