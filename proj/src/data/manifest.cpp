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

#include "ssf/data/manifest.hpp"

#include <set>
#include <sstream>

#include "json.hpp"
#include "ssf/core/io.hpp"

namespace ssf::data {
namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "ssf-manifest";
constexpr int kManifestVersion = 1;

template <typename T>
T field(const json& obj, const char* key, std::size_t line) {
  if (!obj.contains(key)) {
    throw ValidationError("manifest line " + std::to_string(line) +
                          ": missing field '" + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError("manifest line " + std::to_string(line) +
                          ": field '" + key + "' has the wrong type");
  }
}

}  // namespace

std::string to_string(Split split) {
  return split == Split::kTrain ? "train" : "test";
}

Split parse_split(std::string_view text) {
  if (text == "train") return Split::kTrain;
  if (text == "test") return Split::kTest;
  throw ValidationError("unknown split '" + std::string(text) +
                        "' (expected train or test)");
}

std::filesystem::path DatasetManifest::resolve(
    const std::filesystem::path& p) const {
  return p.is_absolute() ? p : base_dir / p;
}

std::vector<const ManifestEntry*> DatasetManifest::split(Split which) const {
  std::vector<const ManifestEntry*> out;
  for (const auto& e : entries) {
    if (e.split == which) out.push_back(&e);
  }
  return out;
}

DatasetManifest parse_manifest(std::string_view text,
                               const std::filesystem::path& base_dir,
                               bool check_files) {
  DatasetManifest m;
  m.base_dir = base_dir;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::set<std::string> ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw IoError("manifest line " + std::to_string(line_no) +
                    ": invalid JSON (" + e.what() + ")");
    }
    if (!obj.is_object()) {
      throw ValidationError("manifest line " + std::to_string(line_no) +
                            ": expected a JSON object");
    }
    if (!have_header) {
      if (field<std::string>(obj, "format", line_no) != kFormatTag) {
        throw ValidationError("manifest header: format must be '" +
                              std::string(kFormatTag) + "'");
      }
      const int version = field<int>(obj, "version", line_no);
      if (version != kManifestVersion) {
        throw ValidationError("manifest header: unsupported version " +
                              std::to_string(version));
      }
      m.num_classes = field<std::size_t>(obj, "num_classes", line_no);
      m.num_categories = field<std::size_t>(obj, "num_categories", line_no);
      if (m.num_classes == 0 || m.num_categories == 0) {
        throw ValidationError("manifest header: num_classes and num_categories must be >= 1");
      }
      if (obj.contains("void_value") && !obj["void_value"].is_null()) {
        m.void_value = field<CategoryIndex>(obj, "void_value", line_no);
      } else {
        m.void_value.reset();
      }
      if (obj.contains("global_source")) {
        m.global_source = field<std::string>(obj, "global_source", line_no);
      }
      have_header = true;
      continue;
    }
    ManifestEntry e;
    e.id = field<std::string>(obj, "id", line_no);
    e.mask = field<std::string>(obj, "mask", line_no);
    if (obj.contains("global") && !obj["global"].is_null()) {
      e.global = field<std::string>(obj, "global", line_no);
    }
    e.label = field<std::size_t>(obj, "label", line_no);
    e.split = parse_split(field<std::string>(obj, "split", line_no));
    if (!ids.insert(e.id).second) {
      throw DuplicateIdError("manifest line " + std::to_string(line_no) +
                             ": duplicate sample id '" + e.id + "'");
    }
    if (e.label >= m.num_classes) {
      throw LabelRangeError("manifest line " + std::to_string(line_no) +
                            ": label " + std::to_string(e.label) +
                            " for '" + e.id + "' outside [0, " +
                            std::to_string(m.num_classes) + ")");
    }
    m.entries.push_back(std::move(e));
  }
  if (!have_header) throw ValidationError("manifest is empty (no header line)");
  if (check_files) {
    for (const auto& e : m.entries) {
      if (!std::filesystem::exists(m.resolve(e.mask))) {
        throw MissingFileError("sample '" + e.id + "': mask file '" +
                               m.resolve(e.mask).string() + "' does not exist");
      }
      if (e.global && !std::filesystem::exists(m.resolve(*e.global))) {
        throw MissingFileError("sample '" + e.id + "': global feature file '" +
                               m.resolve(*e.global).string() + "' does not exist");
      }
    }
  }
  return m;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw MissingFileError("manifest '" + path.string() + "' does not exist");
  }
  return parse_manifest(read_file_bytes(path), path.parent_path(), true);
}

std::string serialize_manifest(const DatasetManifest& manifest) {
  json header = {{"format", kFormatTag},
                 {"version", kManifestVersion},
                 {"num_classes", manifest.num_classes},
                 {"num_categories", manifest.num_categories}};
  header["void_value"] = manifest.void_value ? json(*manifest.void_value) : json(nullptr);
  if (!manifest.global_source.empty()) header["global_source"] = manifest.global_source;
  std::string out = header.dump() + "\n";
  for (const auto& e : manifest.entries) {
    json obj = {{"id", e.id}, {"mask", e.mask.generic_string()}};
    if (e.global) obj["global"] = e.global->generic_string();
    obj["label"] = e.label;
    obj["split"] = to_string(e.split);
    out += obj.dump() + "\n";
  }
  return out;
}

void save_manifest(const std::filesystem::path& path,
                   const DatasetManifest& manifest) {
  write_file_bytes(path, serialize_manifest(manifest));
}

}  // namespace ssf::data
