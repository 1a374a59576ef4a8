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

#include "ssf/data/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "json.hpp"
#include "ssf/data/batch.hpp"

namespace ssf::data {
namespace {

struct Rect {
  std::ptrdiff_t x0, y0;  // 0-based, inclusive
  std::ptrdiff_t w, h;

  bool overlaps(const Rect& o) const {
    return x0 < o.x0 + o.w && o.x0 < x0 + w && y0 < o.y0 + o.h && o.y0 < y0 + h;
  }
};

// Side length whose discrete-uniform deviation best matches sigma_px.
std::ptrdiff_t side_for_sigma(double sigma_px) {
  const double side = std::sqrt(12.0 * sigma_px * sigma_px + 1.0);
  return std::max<std::ptrdiff_t>(1, static_cast<std::ptrdiff_t>(std::lround(side)));
}

// Rectangle whose 1-based pixel mean lands nearest to the normalized center.
Rect blob_rect(double cx, double cy, double sx, double sy, std::size_t height,
               std::size_t width) {
  Rect r;
  r.w = side_for_sigma(sx * static_cast<double>(width));
  r.h = side_for_sigma(sy * static_cast<double>(height));
  r.x0 = static_cast<std::ptrdiff_t>(
      std::lround(cx * static_cast<double>(width) - (static_cast<double>(r.w) + 1.0) / 2.0));
  r.y0 = static_cast<std::ptrdiff_t>(
      std::lround(cy * static_cast<double>(height) - (static_cast<double>(r.h) + 1.0) / 2.0));
  return r;
}

bool inside(const Rect& r, std::size_t height, std::size_t width) {
  return r.x0 >= 0 && r.y0 >= 0 &&
         r.x0 + r.w <= static_cast<std::ptrdiff_t>(width) &&
         r.y0 + r.h <= static_cast<std::ptrdiff_t>(height);
}

Rect clamp_inside(Rect r, std::size_t height, std::size_t width) {
  const auto W = static_cast<std::ptrdiff_t>(width);
  const auto H = static_cast<std::ptrdiff_t>(height);
  r.w = std::clamp<std::ptrdiff_t>(r.w, 1, W);
  r.h = std::clamp<std::ptrdiff_t>(r.h, 1, H);
  r.x0 = std::clamp<std::ptrdiff_t>(r.x0, 0, W - r.w);
  r.y0 = std::clamp<std::ptrdiff_t>(r.y0, 0, H - r.h);
  return r;
}

std::string sample_id(std::size_t cls, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "c%zu_%04zu", cls, index);
  return buf;
}

std::vector<std::vector<double>> group_means(const SynthSpec& spec) {
  std::size_t groups = 0;
  for (const auto& r : spec.recipes) groups = std::max(groups, r.global_group + 1);
  std::vector<std::vector<double>> means(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    std::mt19937_64 rng(derive_seed(spec.seed, 0x6C0BA1ull + g));
    std::normal_distribution<double> unit(0.0, 1.0);
    means[g].resize(spec.global_width);
    for (double& v : means[g]) v = unit(rng);
  }
  return means;
}

}  // namespace

void SynthSpec::validate() const {
  if (num_classes == 0) throw ValidationError("synth: num_classes must be >= 1");
  if (num_categories == 0 || num_categories > 0xFFFE) {
    throw ValidationError("synth: num_categories must be in [1, 65534]");
  }
  if (height == 0 || width == 0 || height > kMaxMaskSide || width > kMaxMaskSide) {
    throw ValidationError("synth: invalid mask size");
  }
  if (background < 1 || background > num_categories) {
    throw ValidationError("synth: background category outside [1, L]");
  }
  if (!(noise >= 0.0 && noise < 1.0)) {
    throw ValidationError("synth: noise must be in [0, 1)");
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ValidationError("synth: train_fraction must be in (0, 1)");
  }
  if (samples_per_class == 0) throw ValidationError("synth: samples_per_class must be >= 1");
  if (!(global_spread >= 0.0)) throw ValidationError("synth: global_spread must be >= 0");
  if (recipes.size() != num_classes) {
    throw ValidationError("synth: expected " + std::to_string(num_classes) +
                          " recipes, got " + std::to_string(recipes.size()));
  }
  for (std::size_t c = 0; c < recipes.size(); ++c) {
    std::vector<Rect> rects;
    for (const Blob& b : recipes[c].blobs) {
      const std::string where = "synth: class " + std::to_string(c) + " category " +
                                std::to_string(b.category);
      if (b.category < 1 || b.category > num_categories || b.category == background) {
        throw ValidationError(where + ": category must be in [1, L] and differ from background");
      }
      if (!(b.sigma_x > 0.0 && b.sigma_y > 0.0)) {
        throw ValidationError(where + ": blob spread must be positive");
      }
      const Rect r = blob_rect(b.center_x, b.center_y, b.sigma_x, b.sigma_y, height, width);
      if (!inside(r, height, width)) {
        throw ValidationError(where + ": blob exceeds the " + std::to_string(height) +
                              "x" + std::to_string(width) + " image");
      }
      for (const Rect& o : rects) {
        if (r.overlaps(o)) throw ValidationError(where + ": blob overlaps another blob");
      }
      rects.push_back(r);
    }
    for (std::size_t d = 0; d < c; ++d) {
      if (recipes[d] == recipes[c]) {
        throw ValidationError("synth: classes " + std::to_string(d) + " and " +
                              std::to_string(c) + " share an identical recipe");
      }
    }
  }
}

SynthSpec standard_synth_spec(std::uint64_t seed) {
  SynthSpec s;
  s.seed = seed;
  s.recipes = {
      {{{2, 0.30, 0.30, 0.08, 0.08}, {3, 0.70, 0.70, 0.10, 0.05}}, 0},
      {{{2, 0.70, 0.70, 0.08, 0.08}, {3, 0.30, 0.30, 0.10, 0.05}}, 1},
      {{{2, 0.30, 0.30, 0.16, 0.08}, {3, 0.70, 0.70, 0.10, 0.05}}, 2},
      {{{4, 0.50, 0.25, 0.12, 0.06}, {5, 0.50, 0.75, 0.06, 0.06}}, 3},
      {{{6, 0.25, 0.50, 0.10, 0.10}, {7, 0.75, 0.50, 0.05, 0.10}}, 4},
      {{{6, 0.25, 0.50, 0.10, 0.10}, {8, 0.75, 0.50, 0.05, 0.10}}, 5},
  };
  return s;
}

SynthSpec split_information_spec(std::uint64_t seed) {
  SynthSpec s;
  s.seed = seed;
  s.global_spread = 0.3;
  const std::vector<Blob> layout_a{{2, 0.30, 0.30, 0.08, 0.08}, {3, 0.70, 0.70, 0.10, 0.05}};
  const std::vector<Blob> layout_b{{2, 0.70, 0.70, 0.08, 0.08}, {3, 0.30, 0.30, 0.10, 0.05}};
  for (std::size_t c = 0; c < s.num_classes; ++c) {
    s.recipes.push_back({c % 2 == 0 ? layout_a : layout_b, c / 2});
  }
  return s;
}

SyntheticSet generate_synthetic_set(const SynthSpec& spec) {
  spec.validate();
  const auto means = group_means(spec);
  const std::size_t n_train = static_cast<std::size_t>(
      std::lround(spec.train_fraction * static_cast<double>(spec.samples_per_class)));

  SyntheticSet set;
  const std::size_t total = spec.num_classes * spec.samples_per_class;
  set.ids.reserve(total);
  set.masks.reserve(total);
  set.labels.reserve(total);
  set.splits.reserve(total);

  const double jitter = 0.25 * spec.noise;
  const double size_jitter = 0.5 * spec.noise;
  const double salt_rate = 0.1 * spec.noise;

  for (std::size_t c = 0; c < spec.num_classes; ++c) {
    const ClassRecipe& recipe = spec.recipes[c];
    // Salt pixels relabel to a category the class layout already uses.
    std::vector<CategoryIndex> palette{spec.background};
    for (const Blob& b : recipe.blobs) palette.push_back(b.category);
    for (std::size_t k = 0; k < spec.samples_per_class; ++k) {
      std::mt19937_64 rng(derive_seed(derive_seed(spec.seed, c + 1), k + 1));
      std::uniform_real_distribution<double> unit(-1.0, 1.0);
      std::uniform_real_distribution<double> prob(0.0, 1.0);

      std::vector<CategoryIndex> pixels(spec.height * spec.width, spec.background);
      for (const Blob& b : recipe.blobs) {
        const double cx = b.center_x + jitter * unit(rng);
        const double cy = b.center_y + jitter * unit(rng);
        const double sx = b.sigma_x * (1.0 + size_jitter * unit(rng));
        const double sy = b.sigma_y * (1.0 + size_jitter * unit(rng));
        const Rect r = clamp_inside(blob_rect(cx, cy, sx, sy, spec.height, spec.width),
                                    spec.height, spec.width);
        for (std::ptrdiff_t y = r.y0; y < r.y0 + r.h; ++y) {
          for (std::ptrdiff_t x = r.x0; x < r.x0 + r.w; ++x) {
            pixels[static_cast<std::size_t>(y) * spec.width + static_cast<std::size_t>(x)] =
                b.category;
          }
        }
      }
      if (salt_rate > 0.0) {
        std::uniform_int_distribution<std::size_t> pick(0, palette.size() - 1);
        for (auto& p : pixels) {
          if (prob(rng) < salt_rate) p = palette[pick(rng)];
        }
      }
      set.ids.push_back(sample_id(c, k));
      set.masks.emplace_back(spec.height, spec.width, std::move(pixels), spec.num_categories,
                             CategoryIndex{0});
      if (spec.global_width > 0) {
        std::normal_distribution<double> spread(0.0, 1.0);
        std::vector<double> g = means[recipe.global_group];
        for (double& v : g) v += spec.global_spread * spread(rng);
        set.globals.push_back(std::move(g));
      }
      set.labels.push_back(c);
      set.splits.push_back(k < n_train ? Split::kTrain : Split::kTest);
    }
  }
  return set;
}

Dataset to_dataset(const SyntheticSet& set, const SynthSpec& spec) {
  Dataset ds;
  ds.num_classes = spec.num_classes;
  ds.num_categories = spec.num_categories;
  ds.global_width = set.globals.empty() ? 0 : spec.global_width;
  auto features = extract_ssf_batch(set.masks);
  ds.samples.reserve(set.masks.size());
  for (std::size_t k = 0; k < set.masks.size(); ++k) {
    Sample s;
    s.id = set.ids[k];
    s.ssf = std::move(features[k]);
    if (!set.globals.empty()) s.global = set.globals[k];
    s.label = set.labels[k];
    s.split = set.splits[k];
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

DatasetManifest generate_synthetic(const SynthSpec& spec,
                                   const std::filesystem::path& out_dir,
                                   MaskFormat format) {
  const SyntheticSet set = generate_synthetic_set(spec);
  DatasetManifest m;
  m.num_classes = spec.num_classes;
  m.num_categories = spec.num_categories;
  m.void_value = 0;
  m.global_source = set.globals.empty() ? "" : "synthetic-gaussian";
  m.base_dir = out_dir;
  const char* ext = format == MaskFormat::kPgm ? ".pgm" : ".ssfm";
  for (std::size_t k = 0; k < set.masks.size(); ++k) {
    ManifestEntry e;
    e.id = set.ids[k];
    e.mask = std::filesystem::path("masks") / (e.id + ext);
    write_mask(out_dir / e.mask, set.masks[k], format);
    if (!set.globals.empty()) {
      e.global = std::filesystem::path("global") / (e.id + ".f64");
      write_global_vector(out_dir / *e.global, {set.globals[k], m.global_source});
    }
    e.label = set.labels[k];
    e.split = set.splits[k];
    m.entries.push_back(std::move(e));
  }
  save_manifest(out_dir / "manifest.jsonl", m);
  write_file_bytes(out_dir / "synth_spec.json", synth_spec_to_json(spec));
  return m;
}

std::vector<std::pair<CategoryIndex, SsfRow>> recipe_targets(
    const ClassRecipe& recipe) {
  std::vector<std::pair<CategoryIndex, SsfRow>> out;
  for (const Blob& b : recipe.blobs) {
    out.emplace_back(b.category, SsfRow{12.0 * b.sigma_x * b.sigma_y, b.center_x,
                                        b.center_y, b.sigma_x, b.sigma_y});
  }
  return out;
}

std::string synth_spec_to_json(const SynthSpec& spec) {
  using nlohmann::json;
  json recipes = json::array();
  for (const auto& r : spec.recipes) {
    json blobs = json::array();
    for (const Blob& b : r.blobs) {
      blobs.push_back({{"category", b.category},
                       {"center_x", b.center_x},
                       {"center_y", b.center_y},
                       {"sigma_x", b.sigma_x},
                       {"sigma_y", b.sigma_y}});
    }
    recipes.push_back({{"blobs", blobs}, {"global_group", r.global_group}});
  }
  json j = {{"num_classes", spec.num_classes},
            {"num_categories", spec.num_categories},
            {"height", spec.height},
            {"width", spec.width},
            {"background", spec.background},
            {"noise", spec.noise},
            {"samples_per_class", spec.samples_per_class},
            {"train_fraction", spec.train_fraction},
            {"seed", spec.seed},
            {"global_width", spec.global_width},
            {"global_spread", spec.global_spread},
            {"recipes", recipes}};
  return j.dump(2) + "\n";
}

}  // namespace ssf::data
