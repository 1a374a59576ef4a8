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

#include "ssf/nn/checkpoint.hpp"

#include <bit>

#include "ssf/common/bytes.hpp"
#include "ssf/common/error.hpp"
#include "ssf/core/io.hpp"

namespace ssf::nn {
namespace {

constexpr char kMagic[4] = {'S', 'S', 'F', 'C'};

std::uint64_t hash_one(std::uint64_t h, std::string_view name,
                       const Tensor::Shape& shape,
                       std::span<const double> values) {
  h = fnv1a(name, h);
  std::string buf;
  for (std::size_t d : shape) put_le<std::uint64_t>(buf, d);
  for (double v : values) put_le<std::uint64_t>(buf, std::bit_cast<std::uint64_t>(v));
  return fnv1a(buf, h);
}

}  // namespace

const CheckpointBlock* Checkpoint::find(std::string_view name) const {
  for (const auto& b : blocks) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

Checkpoint snapshot(std::string architecture,
                    const std::vector<Parameter*>& params) {
  Checkpoint c{std::move(architecture), {}};
  c.blocks.reserve(params.size());
  for (const Parameter* p : params) {
    const auto v = p->value.values();
    c.blocks.push_back({p->name, p->value.shape(), {v.begin(), v.end()}});
  }
  return c;
}

void restore(const Checkpoint& checkpoint,
             const std::vector<Parameter*>& params, bool allow_missing) {
  for (Parameter* p : params) {
    const CheckpointBlock* b = checkpoint.find(p->name);
    if (b == nullptr) {
      if (allow_missing) continue;
      throw ValidationError("checkpoint has no block '" + p->name + "'");
    }
    if (b->shape != p->value.shape()) {
      throw ValidationError("checkpoint block '" + p->name + "' has shape " +
                            shape_to_string(b->shape) + ", model expects " +
                            p->value.shape_string());
    }
    std::copy(b->values.begin(), b->values.end(), p->value.values().begin());
  }
}

std::string encode_checkpoint(const Checkpoint& checkpoint) {
  std::string out(kMagic, 4);
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(checkpoint.architecture.size()));
  out += checkpoint.architecture;
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(checkpoint.blocks.size()));
  for (const auto& b : checkpoint.blocks) {
    if (shape_size(b.shape) != b.values.size()) {
      throw ShapeError("checkpoint block '" + b.name + "' shape/value mismatch");
    }
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(b.name.size()));
    out += b.name;
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(b.shape.size()));
    for (std::size_t d : b.shape) put_le<std::uint64_t>(out, d);
    for (double v : b.values) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  }
  return out;
}

Checkpoint decode_checkpoint(std::string_view bytes) {
  ByteReader r(bytes);
  if (r.take(4) != std::string_view(kMagic, 4)) {
    throw IoError("not a checkpoint (bad magic)");
  }
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw IoError("unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint c;
  c.architecture = std::string(r.take(r.get<std::uint32_t>()));
  const auto count = r.get<std::uint32_t>();
  for (std::uint32_t k = 0; k < count; ++k) {
    CheckpointBlock b;
    b.name = std::string(r.take(r.get<std::uint32_t>()));
    const auto rank = r.get<std::uint32_t>();
    if (rank == 0 || rank > 4) throw IoError("checkpoint block '" + b.name + "' has bad rank");
    for (std::uint32_t d = 0; d < rank; ++d) {
      b.shape.push_back(static_cast<std::size_t>(r.get<std::uint64_t>()));
    }
    const std::size_t n = shape_size(b.shape);
    if (r.remaining() / 8 < n) throw IoError("checkpoint block '" + b.name + "' truncated");
    b.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      b.values[i] = std::bit_cast<double>(r.get<std::uint64_t>());
    }
    c.blocks.push_back(std::move(b));
  }
  if (r.remaining() != 0) throw IoError("trailing bytes after checkpoint");
  return c;
}

std::filesystem::path metadata_path(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".meta.json");
}

void save_checkpoint(const std::filesystem::path& path,
                     const Checkpoint& checkpoint,
                     const std::string& metadata_json) {
  write_file_bytes(path, encode_checkpoint(checkpoint));
  write_file_bytes(metadata_path(path), metadata_json);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  try {
    return decode_checkpoint(read_file_bytes(path));
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::uint64_t parameter_hash(const std::vector<const Parameter*>& params) {
  std::uint64_t h = fnv1a("");
  for (const Parameter* p : params) {
    h = hash_one(h, p->name, p->value.shape(), p->value.values());
  }
  return h;
}

std::uint64_t block_hash(const std::vector<const CheckpointBlock*>& blocks) {
  std::uint64_t h = fnv1a("");
  for (const CheckpointBlock* b : blocks) h = hash_one(h, b->name, b->shape, b->values);
  return h;
}

}  // namespace ssf::nn
