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

#include "ssf/nn/kernels.hpp"

#include <algorithm>

#if defined(__x86_64__) && defined(__GNUC__) && !defined(__AVX2__)
#define SSF_GEMM_DISPATCH 1
#endif

namespace ssf::nn {
namespace {

thread_local bool g_count_macs = false;
thread_local std::uint64_t g_mac_count = 0;

// Register block of C is kRows x kCols; the depth tile keeps a kCols-wide
// strip of B cache resident while it is swept by every row block.
constexpr std::size_t kRows = 4;
constexpr std::size_t kCols = 8;
constexpr std::size_t kDepthTile = 256;

// Unaligned, aliasing 4-lane view over plain double arrays.
typedef double Vec4 __attribute__((vector_size(32), aligned(8), may_alias));

// C[0:4, 0:8] += A[0:4, p0:p1] * B[p0:p1, 0:8]; rows of A have stride k,
// rows of B and C stride n.
[[gnu::always_inline]] inline void micro_kernel(std::size_t n, std::size_t k,
                                                std::size_t p0, std::size_t p1,
                                                const double* a, const double* b,
                                                double* c) {
  Vec4 acc[kRows][2];
  for (std::size_t r = 0; r < kRows; ++r) {
    acc[r][0] = *reinterpret_cast<const Vec4*>(c + r * n);
    acc[r][1] = *reinterpret_cast<const Vec4*>(c + r * n + 4);
  }
  for (std::size_t p = p0; p < p1; ++p) {
    const Vec4 b0 = *reinterpret_cast<const Vec4*>(b + p * n);
    const Vec4 b1 = *reinterpret_cast<const Vec4*>(b + p * n + 4);
    for (std::size_t r = 0; r < kRows; ++r) {
      const double s = a[r * k + p];
      acc[r][0] += s * b0;
      acc[r][1] += s * b1;
    }
  }
  for (std::size_t r = 0; r < kRows; ++r) {
    *reinterpret_cast<Vec4*>(c + r * n) = acc[r][0];
    *reinterpret_cast<Vec4*>(c + r * n + 4) = acc[r][1];
  }
}

}  // namespace

MacCounterScope::MacCounterScope()
    : previous_enabled_(g_count_macs), previous_count_(g_mac_count) {
  g_count_macs = true;
  g_mac_count = 0;
}

MacCounterScope::~MacCounterScope() {
  g_count_macs = previous_enabled_;
  g_mac_count = previous_count_;
}

std::uint64_t MacCounterScope::count() const { return g_mac_count; }

namespace {

[[gnu::always_inline]] inline void gemm_body(std::size_t m, std::size_t n,
                                             std::size_t k, const double* a,
                                             const double* b, double* c) {
  const std::size_t m_main = m - m % kRows;
  const std::size_t n_main = n - n % kCols;
  for (std::size_t p0 = 0; p0 < k; p0 += kDepthTile) {
    const std::size_t p1 = std::min(k, p0 + kDepthTile);
    for (std::size_t j = 0; j < n_main; j += kCols) {
      for (std::size_t i = 0; i < m_main; i += kRows) {
        micro_kernel(n, k, p0, p1, a + i * k, b + j, c + i * n + j);
      }
    }
    // Ragged edges: leftover rows over all columns, leftover columns over
    // the main rows.
    for (std::size_t i = m_main; i < m; ++i) {
      for (std::size_t p = p0; p < p1; ++p) {
        const double s = a[i * k + p];
        const double* bp = b + p * n;
        double* ci = c + i * n;
        for (std::size_t j = 0; j < n; ++j) ci[j] += s * bp[j];
      }
    }
    for (std::size_t i = 0; i < m_main; ++i) {
      for (std::size_t p = p0; p < p1; ++p) {
        const double s = a[i * k + p];
        const double* bp = b + p * n;
        double* ci = c + i * n;
        for (std::size_t j = n_main; j < n; ++j) ci[j] += s * bp[j];
      }
    }
  }
}

#ifdef SSF_GEMM_DISPATCH
__attribute__((target("avx2,fma"))) void gemm_avx2(std::size_t m, std::size_t n,
                                                   std::size_t k, const double* a,
                                                   const double* b, double* c) {
  gemm_body(m, n, k, a, b, c);
}

void gemm_generic(std::size_t m, std::size_t n, std::size_t k, const double* a,
                  const double* b, double* c) {
  gemm_body(m, n, k, a, b, c);
}

using GemmFn = void (*)(std::size_t, std::size_t, std::size_t, const double*,
                        const double*, double*);

GemmFn pick_gemm() {
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return gemm_avx2;
  return gemm_generic;
}
#endif

}  // namespace

void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c) {
  if (g_count_macs) g_mac_count += static_cast<std::uint64_t>(m) * n * k;
#ifdef SSF_GEMM_DISPATCH
  static const GemmFn impl = pick_gemm();
  impl(m, n, k, a, b, c);
#else
  gemm_body(m, n, k, a, b, c);
#endif
}

void transpose(std::size_t rows, std::size_t cols, const double* src,
               double* dst) {
  constexpr std::size_t kBlock = 32;
  for (std::size_t r0 = 0; r0 < rows; r0 += kBlock) {
    const std::size_t r1 = std::min(rows, r0 + kBlock);
    for (std::size_t c0 = 0; c0 < cols; c0 += kBlock) {
      const std::size_t c1 = std::min(cols, c0 + kBlock);
      for (std::size_t r = r0; r < r1; ++r) {
        for (std::size_t col = c0; col < c1; ++col) {
          dst[col * rows + r] = src[r * cols + col];
        }
      }
    }
  }
}

}  // namespace ssf::nn
