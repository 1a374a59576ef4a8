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

#include <cmath>
#include <cstring>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "common/random_masks.hpp"
#include "doctest.h"
#include "oracle/naive_ssf.hpp"
#include "ssf/common/error.hpp"
#include "ssf/core/io.hpp"
#include "ssf/core/mask.hpp"
#include "ssf/core/ssf.hpp"

using ssf::CategoryIndex;
using ssf::SegmentationMask;

namespace {

SegmentationMask small_mask() {
  // [[1,1],[2,1]]
  return SegmentationMask(2, 2, {1, 1, 2, 1}, 2);
}

void check_against_oracle(const ssf_test::RandomMask& rm) {
  const ssf::SsfMatrix got = ssf::extract_ssf(rm.mask());
  const auto want = ssf_oracle::naive_ssf(rm.h, rm.w, rm.grid, rm.L, 0);
  REQUIRE(got.num_categories() == rm.L);
  for (std::size_t n = 0; n < rm.L; ++n) {
    const auto row = got.rows[n].as_array();
    for (std::size_t c = 0; c < 5; ++c) {
      INFO("h=" << rm.h << " w=" << rm.w << " L=" << rm.L << " n=" << n + 1 << " col=" << c);
      CHECK(std::abs(row[c] - want[n][c]) <= 1e-9);
    }
  }
}

}  // namespace

TEST_CASE("mask validation names the offending pixel") {
  try {
    SegmentationMask(2, 3, {1, 1, 1, 1, 7, 1}, 3);
    FAIL("expected ValidationError");
  } catch (const ssf::ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("pixel 4") != std::string::npos);
    CHECK(msg.find("7") != std::string::npos);
  }
  CHECK_THROWS_AS(SegmentationMask(2, 2, {1, 1, 1}, 2), ssf::ValidationError);
  CHECK_THROWS_AS(SegmentationMask(0, 2, {}, 2), ssf::ValidationError);
  CHECK_THROWS_AS(SegmentationMask(2, 2, {1, 1, 1, 1}, 0), ssf::ValidationError);
  CHECK_THROWS_AS(SegmentationMask(ssf::kMaxMaskSide + 1, 1,
                                   std::vector<CategoryIndex>(ssf::kMaxMaskSide + 1, 1), 1),
                  ssf::ValidationError);
  // Void value inside [1, L] is rejected.
  CHECK_THROWS_AS(SegmentationMask(1, 2, {1, 2}, 3, CategoryIndex{2}), ssf::ValidationError);
  // Without a void value, 0 is out of range.
  CHECK_THROWS_AS(SegmentationMask(1, 2, {0, 1}, 3, std::nullopt), ssf::ValidationError);
  CHECK_NOTHROW(SegmentationMask(1, 2, {255, 1}, 3, CategoryIndex{255}));
}

TEST_CASE("pixel counts") {
  CHECK(ssf::compute_pixel_counts(small_mask()) == std::vector<std::uint64_t>{3, 1});
  const auto uniform = SegmentationMask::filled(5, 7, 1, 3);
  CHECK(ssf::compute_pixel_counts(uniform) == std::vector<std::uint64_t>{35, 0, 0});
  const auto all_void = SegmentationMask::filled(4, 4, 0, 2);
  CHECK(ssf::compute_pixel_counts(all_void) == std::vector<std::uint64_t>{0, 0});
}

TEST_CASE("normalized pixel counts") {
  const std::vector<std::uint64_t> counts{3, 1};
  CHECK(ssf::normalize_pixel_counts(counts, 2, 2) == std::vector<double>{0.75, 0.25});
  const std::vector<std::uint64_t> full{12, 0};
  CHECK(ssf::normalize_pixel_counts(full, 3, 4) == std::vector<double>{1.0, 0.0});
  const std::vector<std::uint64_t> none{0, 0};
  CHECK(ssf::normalize_pixel_counts(none, 3, 4) == std::vector<double>{0.0, 0.0});
  CHECK_THROWS_AS(ssf::normalize_pixel_counts(none, 0, 4), ssf::ValidationError);
  const std::vector<std::uint64_t> too_many{13};
  CHECK_THROWS_AS(ssf::normalize_pixel_counts(too_many, 3, 4), ssf::ValidationError);
}

TEST_CASE("mean positions") {
  const auto mask = small_mask();
  const auto counts = ssf::compute_pixel_counts(mask);
  const auto means = ssf::compute_mean_positions(mask, counts);
  CHECK(means[1] == ssf::PositionPair{1.0, 2.0});
  CHECK(means[0].x == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
  CHECK(means[0].y == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

  const auto uniform = SegmentationMask::filled(6, 9, 2, 3);
  const auto u = ssf::compute_mean_positions(uniform, ssf::compute_pixel_counts(uniform));
  CHECK(u[1] == ssf::PositionPair{5.0, 3.5});
  CHECK(u[0] == ssf::PositionPair{0.0, 0.0});
}

TEST_CASE("std positions") {
  const auto mask = small_mask();
  const auto counts = ssf::compute_pixel_counts(mask);
  const auto sd = ssf::compute_std_positions(mask, counts, ssf::compute_mean_positions(mask, counts));
  CHECK(sd[0].x == doctest::Approx(std::sqrt(2.0 / 9.0)).epsilon(1e-14));
  CHECK(sd[0].y == doctest::Approx(std::sqrt(2.0 / 9.0)).epsilon(1e-14));
  CHECK(sd[0].x == doctest::Approx(0.4714).epsilon(1e-4));
  CHECK(sd[1] == ssf::PositionPair{0.0, 0.0});

  const auto uniform = SegmentationMask::filled(3, 10, 1, 1);
  const auto c = ssf::compute_pixel_counts(uniform);
  const auto u = ssf::compute_std_positions(uniform, c, ssf::compute_mean_positions(uniform, c));
  CHECK(u[0].x == doctest::Approx(std::sqrt((100.0 - 1.0) / 12.0)).epsilon(1e-14));
  CHECK(u[0].y == doctest::Approx(std::sqrt((9.0 - 1.0) / 12.0)).epsilon(1e-14));
}

TEST_CASE("normalize positions") {
  const std::vector<ssf::PositionPair> p{{1.0, 3.0}, {0.0, 0.0}};
  const auto n = ssf::normalize_positions(p, 4, 2);
  CHECK(n[0] == ssf::PositionPair{0.5, 0.75});
  CHECK(n[1] == ssf::PositionPair{0.0, 0.0});
  const std::vector<ssf::PositionPair> centre{{112.5, 112.5}};
  CHECK(ssf::normalize_positions(centre, 224, 224)[0].x == 225.0 / 448.0);
  CHECK_THROWS_AS(ssf::normalize_positions(p, 0, 2), ssf::ValidationError);
  CHECK_THROWS_AS(ssf::normalize_positions(p, 2, 0), ssf::ValidationError);
}

TEST_CASE("extract_ssf on the 2x2 example") {
  const ssf::SsfMatrix m = ssf::extract_ssf(small_mask());
  const auto oracle = ssf_oracle::naive_ssf(2, 2, {1, 1, 2, 1}, 2, 0);
  for (std::size_t n = 0; n < 2; ++n) {
    for (std::size_t c = 0; c < 5; ++c) CHECK(m.rows[n].as_array()[c] == doctest::Approx(oracle[n][c]).epsilon(1e-15));
  }
  CHECK(m.row(1).pc == 0.75);
  CHECK(m.row(1).mu_x == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(m.row(1).mu_y == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(m.row(1).sigma_x == doctest::Approx(0.23570).epsilon(1e-5));
  CHECK(m.row(1).sigma_y == doctest::Approx(0.23570).epsilon(1e-5));
  CHECK(m.row(2).as_array() == std::array<double, 5>{0.25, 0.5, 1.0, 0.0, 0.0});
  CHECK(m.raw_counts == std::vector<std::uint64_t>{3, 1});
}

TEST_CASE("extract_ssf closed forms") {
  SUBCASE("all void") {
    const auto m = ssf::extract_ssf(SegmentationMask::filled(9, 5, 0, 4));
    for (const auto& r : m.rows) CHECK(r == ssf::SsfRow{});
  }
  SUBCASE("uniform 224x224, L=5") {
    const auto m = ssf::extract_ssf(SegmentationMask::filled(224, 224, 3, 5));
    const double sigma = std::sqrt((224.0 * 224.0 - 1.0) / 12.0) / 224.0;
    CHECK(m.row(3).pc == 1.0);
    CHECK(std::abs(m.row(3).mu_x - 225.0 / 448.0) <= 1e-12);
    CHECK(std::abs(m.row(3).mu_y - 225.0 / 448.0) <= 1e-12);
    CHECK(std::abs(m.row(3).sigma_x - sigma) <= 1e-12);
    CHECK(std::abs(m.row(3).sigma_y - sigma) <= 1e-12);
    CHECK(m.row(3).sigma_x == doctest::Approx(0.28866).epsilon(1e-5));
    for (std::size_t n : {1, 2, 4, 5}) CHECK(m.row(n) == ssf::SsfRow{});
  }
}

TEST_CASE("single pass agrees with the multi-pass composition") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const auto rm = ssf_test::random_mask(rng);
    const auto a = ssf::extract_ssf(rm.mask());
    const auto b = ssf::extract_ssf_multipass(rm.mask());
    CHECK(a.raw_counts == b.raw_counts);
    for (std::size_t n = 0; n < rm.L; ++n) {
      for (std::size_t c = 0; c < 5; ++c) {
        CHECK(std::abs(a.rows[n].as_array()[c] - b.rows[n].as_array()[c]) <= 1e-9);
      }
    }
  }
}

TEST_CASE("oracle equivalence on random masks") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 200; ++t) check_against_oracle(ssf_test::random_mask(rng));
  // Degenerate shapes.
  ssf_test::RandomMask line{1, 64, 3, {}};
  for (std::size_t j = 0; j < 64; ++j) line.grid.push_back(static_cast<int>(j % 4));
  check_against_oracle(line);
  ssf_test::RandomMask column{64, 1, 2, {}};
  for (std::size_t i = 0; i < 64; ++i) column.grid.push_back(static_cast<int>(i % 3));
  check_against_oracle(column);
}

TEST_CASE("translation covariance") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const std::size_t h = std::uniform_int_distribution<std::size_t>(1, 40)(rng);
    const std::size_t w = std::uniform_int_distribution<std::size_t>(2, 40)(rng);
    const std::size_t d = std::uniform_int_distribution<std::size_t>(1, w - 1)(rng);
    const std::size_t L = 4;
    std::uniform_int_distribution<int> other(2, 4);
    std::bernoulli_distribution take(0.3);
    std::vector<CategoryIndex> a(h * w), b(h * w);
    for (std::size_t k = 0; k < h * w; ++k) {
      a[k] = static_cast<CategoryIndex>(other(rng));
      b[k] = static_cast<CategoryIndex>(other(rng));
    }
    bool any = false;
    for (std::size_t i = 0; i < h; ++i) {
      for (std::size_t j = 0; j + d < w; ++j) {
        if (take(rng)) {
          a[i * w + j] = 1;
          b[i * w + j + d] = 1;
          any = true;
        }
      }
    }
    if (!any) {
      a[0] = 1;
      b[d] = 1;
    }
    const auto ra = ssf::extract_ssf(SegmentationMask(h, w, a, L)).row(1);
    const auto rb = ssf::extract_ssf(SegmentationMask(h, w, b, L)).row(1);
    CHECK(std::abs((rb.mu_x - ra.mu_x) - static_cast<double>(d) / static_cast<double>(w)) <= 1e-12);
    CHECK(rb.mu_y == doctest::Approx(ra.mu_y).epsilon(1e-12));
    CHECK(std::abs(rb.sigma_x - ra.sigma_x) <= 1e-12);
    CHECK(std::abs(rb.sigma_y - ra.sigma_y) <= 1e-12);
    CHECK(rb.pc == ra.pc);
  }
}

TEST_CASE("horizontal mirror") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 50; ++t) {
    const auto rm = ssf_test::random_mask(rng);
    auto flipped = rm;
    for (std::size_t i = 0; i < rm.h; ++i) {
      for (std::size_t j = 0; j < rm.w; ++j) {
        flipped.grid[i * rm.w + j] = rm.grid[i * rm.w + (rm.w - 1 - j)];
      }
    }
    const auto a = ssf::extract_ssf(rm.mask());
    const auto b = ssf::extract_ssf(flipped.mask());
    const double w = static_cast<double>(rm.w);
    for (std::size_t n = 0; n < rm.L; ++n) {
      if (a.raw_counts[n] == 0) {
        CHECK(b.rows[n] == ssf::SsfRow{});
        continue;
      }
      CHECK(std::abs(b.rows[n].mu_x - ((w + 1.0) / w - a.rows[n].mu_x)) <= 1e-12);
      CHECK(b.rows[n].pc == a.rows[n].pc);
      CHECK(std::abs(b.rows[n].mu_y - a.rows[n].mu_y) <= 1e-12);
      CHECK(std::abs(b.rows[n].sigma_x - a.rows[n].sigma_x) <= 1e-12);
      CHECK(std::abs(b.rows[n].sigma_y - a.rows[n].sigma_y) <= 1e-12);
    }
  }
}

namespace {

ssf_test::RandomMask upsample(const ssf_test::RandomMask& m, std::size_t k) {
  ssf_test::RandomMask u{m.h * k, m.w * k, m.L, std::vector<int>(m.h * m.w * k * k)};
  for (std::size_t i = 0; i < u.h; ++i) {
    for (std::size_t j = 0; j < u.w; ++j) u.grid[i * u.w + j] = m.grid[(i / k) * m.w + j / k];
  }
  return u;
}

}  // namespace

TEST_CASE("scale consistency under pixel replication") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 40; ++t) {
    const auto rm = ssf_test::random_mask(rng, 24, 10);
    for (std::size_t k : {2, 3, 4}) {
      const auto a = ssf::extract_ssf(rm.mask());
      const auto b = ssf::extract_ssf(upsample(rm, k).mask());
      const double kd = static_cast<double>(k);
      const double shift_x = (kd - 1.0) / (2.0 * kd * static_cast<double>(rm.w));
      const double shift_y = (kd - 1.0) / (2.0 * kd * static_cast<double>(rm.h));
      const double bound =
          1.0 / (2.0 * static_cast<double>(std::min(rm.h, rm.w)) * kd);
      for (std::size_t n = 0; n < rm.L; ++n) {
        CHECK(std::abs(b.rows[n].pc - a.rows[n].pc) <= 1e-15);
        if (a.raw_counts[n] == 0) continue;
        // Replication moves every 1-based centroid by exactly (k-1)/(2k)
        // original pixels towards the origin.
        CHECK(std::abs((a.rows[n].mu_x - b.rows[n].mu_x) - shift_x) <= 1e-12);
        CHECK(std::abs((a.rows[n].mu_y - b.rows[n].mu_y) - shift_y) <= 1e-12);
        if (k == 2) {
          CHECK(std::abs(a.rows[n].mu_x - b.rows[n].mu_x) <= bound + 1e-12);
          CHECK(std::abs(a.rows[n].mu_y - b.rows[n].mu_y) <= bound + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("bounds and row invariants") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    const auto rm = ssf_test::random_mask(rng);
    const auto m = ssf::extract_ssf(rm.mask());
    double pc_sum = 0.0;
    bool has_void = false;
    for (int v : rm.grid) has_void |= (v == 0);
    for (std::size_t n = 0; n < rm.L; ++n) {
      const auto& r = m.rows[n];
      pc_sum += r.pc;
      for (double v : r.as_array()) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
      CHECK(r.sigma_x <= 0.5);
      CHECK(r.sigma_y <= 0.5);
      if (m.raw_counts[n] > 0) {
        CHECK(r.mu_x >= 1.0 / static_cast<double>(rm.w) - 1e-15);
        CHECK(r.mu_y >= 1.0 / static_cast<double>(rm.h) - 1e-15);
      } else {
        CHECK(r == ssf::SsfRow{});
      }
    }
    if (has_void) {
      CHECK(pc_sum < 1.0);
    } else {
      CHECK(pc_sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("determinism and batch extraction order") {
  std::mt19937_64 rng(9);
  std::vector<SegmentationMask> masks;
  for (int t = 0; t < 30; ++t) masks.push_back(ssf_test::random_mask(rng).mask());
  const auto seq = ssf::extract_ssf_batch(masks, 1);
  const auto par = ssf::extract_ssf_batch(masks, 4);
  REQUIRE(seq.size() == masks.size());
  for (std::size_t i = 0; i < masks.size(); ++i) {
    CHECK(seq[i] == par[i]);
    CHECK(seq[i] == ssf::extract_ssf(masks[i]));
    // Identical bytes, not just equal values.
    const auto again = ssf::extract_ssf(masks[i]).flatten();
    const auto first = seq[i].flatten();
    CHECK(std::memcmp(again.data(), first.data(), first.size() * sizeof(double)) == 0);
  }
}

TEST_CASE("feature subsets") {
  CHECK(ssf::FeatureSubset().is_full());
  CHECK_THROWS_AS(ssf::FeatureSubset(false, false, false), ssf::ValidationError);
  CHECK(ssf::FeatureSubset::parse("ssfs") == ssf::FeatureSubset::full());
  CHECK(ssf::FeatureSubset::parse("SD,pc") == ssf::FeatureSubset(true, false, true));
  CHECK_THROWS_AS(ssf::FeatureSubset::parse(""), ssf::ValidationError);
  CHECK_THROWS_AS(ssf::FeatureSubset::parse("pc,xy"), ssf::ValidationError);
  CHECK(ssf::FeatureSubset(true, false, false).label() == "PC");
  CHECK(ssf::FeatureSubset(false, true, true).label() == "AP&SD");
  CHECK(ssf::FeatureSubset(true, true, false).label() == "PC&AP");
  CHECK(ssf::FeatureSubset::full().label() == "SSFs");
  for (int bits = 1; bits < 8; ++bits) {
    const ssf::FeatureSubset s(bits & 1, bits & 2, bits & 4);
    CHECK(s.column_count() == (s.pc() ? 1u : 0u) + (s.ap() ? 2u : 0u) + (s.sd() ? 2u : 0u));
    CHECK(ssf::FeatureSubset::parse(s.flags()) == s);
  }
}

TEST_CASE("select_subset projections") {
  const auto m = ssf::extract_ssf(small_mask());
  const auto pc = ssf::select_subset(m, ssf::FeatureSubset(true, false, false));
  CHECK(pc.rows == 2);
  CHECK(pc.cols == 1);
  CHECK(pc.values == std::vector<double>{0.75, 0.25});
  const auto apsd = ssf::select_subset(m, ssf::FeatureSubset(false, true, true));
  CHECK(apsd.cols == 4);
  CHECK(apsd.at(1, 0) == 0.5);
  CHECK(apsd.at(1, 1) == 1.0);
  CHECK(apsd.at(0, 2) == m.row(1).sigma_x);
  const auto full = ssf::select_subset(m, ssf::FeatureSubset::full());
  CHECK(full.values == m.flatten());
}

TEST_CASE("mask container and PGM round trips") {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 20; ++t) {
    const auto m = ssf_test::random_mask(rng, 32, 40).mask();
    for (auto fmt : {ssf::MaskFormat::kContainer, ssf::MaskFormat::kPgm}) {
      const std::string bytes = ssf::encode_mask(m, fmt);
      CHECK(ssf::decode_mask(bytes, m.num_categories(), CategoryIndex{0}) == m);
    }
  }
  const std::string container = ssf::encode_mask(small_mask(), ssf::MaskFormat::kContainer);
  CHECK(container.size() == ssf::kContainerHeaderSize + 8);
  CHECK(container.substr(0, 4) == "SSFM");
  // Little-endian u16 payload.
  CHECK(static_cast<unsigned char>(container[16]) == 1);
  CHECK(static_cast<unsigned char>(container[17]) == 0);
  CHECK(static_cast<unsigned char>(container[20]) == 2);

  const SegmentationMask wide(1, 2, {300, 1}, 400);
  CHECK_THROWS_AS(ssf::encode_mask(wide, ssf::MaskFormat::kPgm), ssf::ValidationError);
  CHECK(ssf::decode_mask(ssf::encode_mask(wide, ssf::MaskFormat::kContainer), 400, 0) == wide);
}

TEST_CASE("mask decoding errors") {
  const std::string good = ssf::encode_mask(small_mask(), ssf::MaskFormat::kContainer);
  CHECK_THROWS_AS(ssf::decode_mask("XXXX", 2, 0), ssf::IoError);
  CHECK_THROWS_AS(ssf::decode_mask(good.substr(0, 10), 2, 0), ssf::IoError);
  CHECK_THROWS_AS(ssf::decode_mask(good.substr(0, good.size() - 1), 2, 0), ssf::IoError);
  std::string bad_version = good;
  bad_version[4] = 9;
  CHECK_THROWS_AS(ssf::decode_mask(bad_version, 2, 0), ssf::IoError);
  // Category out of range is a validation problem, not an IO one.
  CHECK_THROWS_AS(ssf::decode_mask(good, 1, 0), ssf::ValidationError);

  CHECK_THROWS_AS(ssf::decode_mask("P5\n2 2\n255\n\x01", 2, 0), ssf::IoError);
  CHECK_THROWS_AS(ssf::decode_mask("P5\n2 2\n0\n\x01\x01\x01\x01", 2, 0), ssf::IoError);
  CHECK_THROWS_AS(ssf::decode_mask("P5\n2\n", 2, 0), ssf::IoError);
  const auto pgm = ssf::decode_mask(std::string("P5\n# c\n2 1\n255\n\x01\x02", 17), 2, 0);
  CHECK(pgm == SegmentationMask(1, 2, {1, 2}, 2));
}

TEST_CASE("f64 grid and CSV output") {
  const auto m = ssf::extract_ssf(small_mask());
  const ssf::F64Grid grid = ssf::ssf_to_grid(m);
  CHECK(grid.rows == 2);
  CHECK(grid.cols == 5);
  const std::string bytes = ssf::encode_f64_grid(grid);
  CHECK(bytes.size() == ssf::kContainerHeaderSize + 80);
  CHECK(ssf::decode_f64_grid(bytes) == grid);
  CHECK_THROWS_AS(ssf::decode_f64_grid(bytes.substr(0, bytes.size() - 3)), ssf::IoError);
  CHECK_THROWS_AS(ssf::encode_f64_grid(ssf::F64Grid{2, 2, {1.0}}), ssf::ShapeError);

  const std::string csv = ssf::ssf_to_csv(m);
  CHECK(csv.rfind("category,pc,mu_x,mu_y,sigma_x,sigma_y\n", 0) == 0);
  CHECK(csv.find("\n2,0.25,0.5,1,0,0\n") != std::string::npos);
  // %.17g round-trips exactly.
  const auto line = csv.substr(csv.find("\n1,") + 3);
  CHECK(std::stod(line.substr(line.find(',') + 1)) == m.row(1).mu_x);

  const auto dir = std::filesystem::temp_directory_path() / "ssf_test_core_io";
  std::filesystem::create_directories(dir);
  ssf::write_f64_grid(dir / "a.ssf", grid);
  CHECK(ssf::read_f64_grid(dir / "a.ssf") == grid);
  ssf::write_mask(dir / "m.pgm", small_mask(), ssf::MaskFormat::kPgm);
  CHECK(ssf::read_mask(dir / "m.pgm", 2, 0) == small_mask());
  CHECK_THROWS_AS(ssf::read_mask(dir / "missing.pgm", 2, 0), ssf::IoError);
  std::filesystem::remove_all(dir);
}
