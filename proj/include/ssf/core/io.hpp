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

#ifndef SSF_CORE_IO_HPP_
#define SSF_CORE_IO_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssf/core/mask.hpp"
#include "ssf/core/ssf.hpp"

namespace ssf {

// Binary grid container: 16-byte little-endian header
//   magic "SSFM" | u16 version (=1) | u16 reserved (=0) | u32 h | u32 w
// followed by h*w payload cells, either u16 (masks) or f64 (features,
// global vectors). The payload type is implied by the file size.
inline constexpr char kContainerMagic[4] = {'S', 'S', 'F', 'M'};
inline constexpr std::uint16_t kContainerVersion = 1;
inline constexpr std::size_t kContainerHeaderSize = 16;

enum class MaskFormat { kPgm, kContainer };

// Dense f64 grid stored in the container format.
struct F64Grid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  friend bool operator==(const F64Grid&, const F64Grid&) = default;
};

std::string read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::string_view bytes);

// Decodes either a binary PGM (P5, maxval <= 255) or a u16 container.
// L and the void value come from the caller.
SegmentationMask decode_mask(std::string_view bytes, std::size_t num_categories,
                             std::optional<CategoryIndex> void_value);
SegmentationMask read_mask(const std::filesystem::path& path,
                           std::size_t num_categories,
                           std::optional<CategoryIndex> void_value);

std::string encode_mask(const SegmentationMask& mask, MaskFormat format);
void write_mask(const std::filesystem::path& path, const SegmentationMask& mask,
                MaskFormat format);

std::string encode_f64_grid(const F64Grid& grid);
F64Grid decode_f64_grid(std::string_view bytes);
void write_f64_grid(const std::filesystem::path& path, const F64Grid& grid);
F64Grid read_f64_grid(const std::filesystem::path& path);

// CSV with header `category,pc,mu_x,mu_y,sigma_x,sigma_y`, 17 significant
// digits, one row per category (1-based).
std::string ssf_to_csv(const SsfMatrix& ssf);
F64Grid ssf_to_grid(const SsfMatrix& ssf);

}  // namespace ssf

#endif  // SSF_CORE_IO_HPP_
