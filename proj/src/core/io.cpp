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

#include "ssf/core/io.hpp"

#include <bit>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ssf/common/bytes.hpp"
#include "ssf/common/error.hpp"

namespace ssf {
namespace {

template <typename T>
T get_le(std::string_view bytes, std::size_t offset) {
  using U = std::make_unsigned_t<T>;
  U u = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) {
    u |= static_cast<U>(static_cast<unsigned char>(bytes[offset + b])) << (8 * b);
  }
  return static_cast<T>(u);
}

struct ContainerHeader {
  std::uint32_t height;
  std::uint32_t width;
  std::size_t cells;
};

void put_header(std::string& out, std::size_t height, std::size_t width) {
  out.append(kContainerMagic, 4);
  put_le<std::uint16_t>(out, kContainerVersion);
  put_le<std::uint16_t>(out, 0);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(height));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(width));
}

bool has_container_magic(std::string_view bytes) {
  return bytes.size() >= 4 && std::memcmp(bytes.data(), kContainerMagic, 4) == 0;
}

ContainerHeader parse_header(std::string_view bytes) {
  if (bytes.size() < kContainerHeaderSize || !has_container_magic(bytes)) {
    throw IoError("not an SSFM container (bad magic or truncated header)");
  }
  const auto version = get_le<std::uint16_t>(bytes, 4);
  if (version != kContainerVersion) {
    throw IoError("unsupported container version " + std::to_string(version));
  }
  ContainerHeader h;
  h.height = get_le<std::uint32_t>(bytes, 8);
  h.width = get_le<std::uint32_t>(bytes, 12);
  h.cells = static_cast<std::size_t>(h.height) * h.width;
  return h;
}

SegmentationMask decode_pgm(std::string_view bytes, std::size_t num_categories,
                            std::optional<CategoryIndex> void_value) {
  std::size_t pos = 2;
  auto skip_space_and_comments = [&] {
    while (pos < bytes.size()) {
      const char c = bytes[pos];
      if (c == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_uint = [&](const char* what) {
    skip_space_and_comments();
    if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      throw IoError(std::string("PGM header: missing ") + what);
    }
    std::size_t v = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      v = v * 10 + static_cast<std::size_t>(bytes[pos] - '0');
      if (v > (1u << 30)) throw IoError(std::string("PGM header: ") + what + " too large");
      ++pos;
    }
    return v;
  };
  const std::size_t width = read_uint("width");
  const std::size_t height = read_uint("height");
  const std::size_t maxval = read_uint("maxval");
  if (maxval == 0 || maxval > 255) {
    throw IoError("PGM maxval must be in [1, 255], got " + std::to_string(maxval));
  }
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    throw IoError("PGM header: missing separator before raster");
  }
  ++pos;
  const std::size_t cells = width * height;
  if (bytes.size() - pos < cells) {
    throw IoError("PGM raster truncated: expected " + std::to_string(cells) +
                  " bytes, found " + std::to_string(bytes.size() - pos));
  }
  std::vector<CategoryIndex> data(cells);
  for (std::size_t k = 0; k < cells; ++k) {
    data[k] = static_cast<unsigned char>(bytes[pos + k]);
  }
  return SegmentationMask(height, width, std::move(data), num_categories, void_value);
}

}  // namespace

std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failure on '" + path.string() + "'");
  return std::move(ss).str();
}

void write_file_bytes(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

SegmentationMask decode_mask(std::string_view bytes, std::size_t num_categories,
                             std::optional<CategoryIndex> void_value) {
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') {
    return decode_pgm(bytes, num_categories, void_value);
  }
  const ContainerHeader h = parse_header(bytes);
  if (bytes.size() != kContainerHeaderSize + 2 * h.cells) {
    throw IoError("mask container payload size mismatch: expected " +
                  std::to_string(2 * h.cells) + " bytes of u16");
  }
  std::vector<CategoryIndex> data(h.cells);
  for (std::size_t k = 0; k < h.cells; ++k) {
    data[k] = get_le<std::uint16_t>(bytes, kContainerHeaderSize + 2 * k);
  }
  return SegmentationMask(h.height, h.width, std::move(data), num_categories,
                          void_value);
}

SegmentationMask read_mask(const std::filesystem::path& path,
                           std::size_t num_categories,
                           std::optional<CategoryIndex> void_value) {
  const std::string bytes = read_file_bytes(path);
  try {
    return decode_mask(bytes, num_categories, void_value);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string encode_mask(const SegmentationMask& mask, MaskFormat format) {
  std::string out;
  if (format == MaskFormat::kPgm) {
    out = "P5\n" + std::to_string(mask.width()) + " " +
          std::to_string(mask.height()) + "\n255\n";
    out.reserve(out.size() + mask.area());
    for (CategoryIndex v : mask.data()) {
      if (v > 255) {
        throw ValidationError("value " + std::to_string(v) +
                              " does not fit an 8-bit PGM");
      }
      out.push_back(static_cast<char>(v));
    }
    return out;
  }
  out.reserve(kContainerHeaderSize + 2 * mask.area());
  put_header(out, mask.height(), mask.width());
  for (CategoryIndex v : mask.data()) put_le<std::uint16_t>(out, v);
  return out;
}

void write_mask(const std::filesystem::path& path, const SegmentationMask& mask,
                MaskFormat format) {
  write_file_bytes(path, encode_mask(mask, format));
}

std::string encode_f64_grid(const F64Grid& grid) {
  if (grid.values.size() != grid.rows * grid.cols) {
    throw ShapeError("grid holds " + std::to_string(grid.values.size()) +
                     " values, expected " + std::to_string(grid.rows * grid.cols));
  }
  std::string out;
  out.reserve(kContainerHeaderSize + 8 * grid.values.size());
  put_header(out, grid.rows, grid.cols);
  for (double v : grid.values) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

F64Grid decode_f64_grid(std::string_view bytes) {
  const ContainerHeader h = parse_header(bytes);
  if (bytes.size() != kContainerHeaderSize + 8 * h.cells) {
    throw IoError("f64 container payload size mismatch: expected " +
                  std::to_string(8 * h.cells) + " bytes");
  }
  F64Grid grid{h.height, h.width, std::vector<double>(h.cells)};
  for (std::size_t k = 0; k < h.cells; ++k) {
    grid.values[k] = std::bit_cast<double>(
        get_le<std::uint64_t>(bytes, kContainerHeaderSize + 8 * k));
  }
  return grid;
}

void write_f64_grid(const std::filesystem::path& path, const F64Grid& grid) {
  write_file_bytes(path, encode_f64_grid(grid));
}

F64Grid read_f64_grid(const std::filesystem::path& path) {
  try {
    return decode_f64_grid(read_file_bytes(path));
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::string ssf_to_csv(const SsfMatrix& ssf) {
  std::string out = "category,pc,mu_x,mu_y,sigma_x,sigma_y\n";
  char buf[32];
  for (std::size_t n = 0; n < ssf.rows.size(); ++n) {
    out += std::to_string(n + 1);
    for (double v : ssf.rows[n].as_array()) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

F64Grid ssf_to_grid(const SsfMatrix& ssf) {
  return F64Grid{ssf.rows.size(), kSsfColumns, ssf.flatten()};
}

}  // namespace ssf
