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
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <vector>

#include "doctest.h"
#include "ssf/common/error.hpp"
#include "ssf/nn/adam.hpp"
#include "ssf/nn/checkpoint.hpp"
#include "ssf/nn/gradcheck.hpp"
#include "ssf/nn/kernels.hpp"
#include "ssf/nn/layers.hpp"
#include "ssf/nn/ops.hpp"
#include "ssf/nn/tensor.hpp"

using namespace ssf::nn;

namespace {

Tensor random_tensor(Tensor::Shape shape, std::mt19937_64& rng, double lo = -1.0,
                     double hi = 1.0) {
  Tensor t(std::move(shape));
  std::uniform_real_distribution<double> d(lo, hi);
  for (double& v : t.values()) v = d(rng);
  return t;
}

// Keeps values away from the ReLU kink so central differences stay smooth.
Tensor kink_free_tensor(Tensor::Shape shape, std::mt19937_64& rng) {
  Tensor t = random_tensor(std::move(shape), rng);
  for (double& v : t.values()) v = (v < 0.0 ? -0.05 : 0.05) + v;
  return t;
}

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Checks layer parameters plus the input gradient under loss = sum(r * y).
// `grad_scale` multiplies the analytic gradient to build negative controls.
GradCheckReport check_layer(Layer& layer, Tensor input, std::mt19937_64& rng,
                            double grad_scale = 1.0) {
  Parameter in{"input", std::move(input)};
  const Tensor probe = random_tensor(layer.output_shape(in.value.shape()), rng);
  std::vector<Parameter*> params = layer.parameters();
  params.push_back(&in);
  auto objective = [&](bool compute_grad) {
    Tensor y = compute_grad ? layer.forward(in.value) : layer.infer(in.value);
    double loss = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) loss += probe[k] * y[k];
    if (compute_grad) {
      Tensor g(y.shape());
      for (std::size_t k = 0; k < g.size(); ++k) g[k] = grad_scale * probe[k];
      const Tensor gi = layer.backward(g);
      auto dst = in.value.grad();
      for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += gi[k];
    }
    return loss;
  };
  return grad_check(params, objective, {1e-6, 1e-4, 0, 1});
}

void naive_gemm(std::size_t m, std::size_t n, std::size_t k, const double* a,
                const double* b, double* c) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s += a[i * k + p] * b[p * n + j];
      c[i * n + j] += s;
    }
  }
}

}  // namespace

TEST_CASE("tensor shapes") {
  CHECK_THROWS_AS(Tensor(Tensor::Shape{}), ssf::ShapeError);
  CHECK_THROWS_AS(Tensor({1, 1, 1, 1, 1}), ssf::ShapeError);
  CHECK_THROWS_AS(Tensor({2, 2}, std::vector<double>{1.0}), ssf::ShapeError);
  Tensor t({2, 3}, 1.5);
  CHECK(t.size() == 6);
  CHECK(t.shape_string() == "[2, 3]");
  CHECK(t.reshaped({3, 2}).shape() == Tensor::Shape{3, 2});
  CHECK_THROWS_AS(t.reshaped({4}), ssf::ShapeError);
  CHECK(t.grad().size() == 6);
  t.grad()[0] = 3.0;
  t.zero_grad();
  CHECK(t.grad()[0] == 0.0);
}

TEST_CASE("gemm matches the naive product on ragged sizes") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 40; ++t) {
    const std::size_t m = pick(rng, 1, 37), n = pick(rng, 1, 45), k = pick(rng, 1, 300);
    const Tensor a = random_tensor({m, k}, rng), b = random_tensor({k, n}, rng);
    Tensor c = random_tensor({m, n}, rng);
    Tensor want = c;
    gemm_nn(m, n, k, a.data(), b.data(), c.data());
    naive_gemm(m, n, k, a.data(), b.data(), want.data());
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(c[i] == doctest::Approx(want[i]).epsilon(1e-12));
  }
}

TEST_CASE("transpose") {
  std::mt19937_64 rng(2);
  const Tensor a = random_tensor({13, 70}, rng);
  Tensor t({70, 13});
  transpose(13, 70, a.data(), t.data());
  for (std::size_t i = 0; i < 13; ++i) {
    for (std::size_t j = 0; j < 70; ++j) CHECK(t[j * 13 + i] == a[i * 70 + j]);
  }
}

TEST_CASE("conv2d example: ones input, ones kernel, pad 1") {
  const Tensor x({1, 1, 3, 3}, 1.0), w({1, 1, 3, 3}, 1.0), b({1}, 0.0);
  const Tensor y = conv2d_forward(x, w, b, LayerSpec::conv2d(1, 1, 3, 1, 1));
  CHECK(y.shape() == Tensor::Shape{1, 1, 3, 3});
  CHECK(std::vector<double>(y.values().begin(), y.values().end()) ==
        std::vector<double>{4, 6, 4, 6, 9, 6, 4, 6, 4});
}

TEST_CASE("conv1d example") {
  const Tensor x({1, 1, 5}, 1.0), w({1, 1, 3}, 1.0), b({1}, 0.0);
  const Tensor y = conv1d_forward(x, w, b, LayerSpec::conv1d(1, 1, 3, 1, 1));
  CHECK(std::vector<double>(y.values().begin(), y.values().end()) ==
        std::vector<double>{2, 3, 3, 3, 2});
}

TEST_CASE("fully-connected example") {
  const Tensor x({1, 2}, {1, 2}), w({2, 2}, {1, 1, 1, -1}), b({2}, {0, 1});
  const Tensor y = fc_forward(x, w, b);
  CHECK(y[0] == 3.0);
  CHECK(y[1] == 0.0);
}

TEST_CASE("relu forward and backward") {
  const Tensor y = relu_forward(Tensor({3}, {-1, 0, 2}));
  CHECK(std::vector<double>(y.values().begin(), y.values().end()) ==
        std::vector<double>{0, 0, 2});
  const Tensor g = relu_backward(Tensor({2}, {5, 5}), Tensor({2}, {-1, 2}));
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 5.0);
  CHECK(relu_backward(Tensor({1}, {7}), Tensor({1}, {0}))[0] == 0.0);
}

TEST_CASE("conv output sizes") {
  CHECK(conv_output_size(7, 3, 1, 1) == 7);
  CHECK(conv_output_size(7, 3, 2, 0) == 3);
  CHECK(conv_output_size(1, 3, 1, 1) == 1);
  CHECK_THROWS_AS(conv_output_size(2, 5, 1, 0), ssf::ShapeError);
  CHECK_THROWS_AS(conv_output_size(2, 1, 0, 0), ssf::ShapeError);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const std::size_t h = pick(rng, 1, 40), w = pick(rng, 1, 40);
    Conv2d conv("c", LayerSpec::conv2d(pick(rng, 1, 4), pick(rng, 1, 4), 3, 1, 1), rng);
    const auto out = conv.output_shape({2, conv.spec().in, h, w});
    CHECK(out[2] == h);
    CHECK(out[3] == w);
    CHECK(conv.infer(random_tensor({2, conv.spec().in, h, w}, rng)).shape() == out);
  }
}

TEST_CASE("shape errors name the layer") {
  std::mt19937_64 rng(4);
  Linear fc("fc", 3, 2, rng);
  CHECK_THROWS_AS(fc.forward(Tensor({1, 4})), ssf::ShapeError);
  Conv2d conv("c", LayerSpec::conv2d(2, 1, 3, 1, 1), rng);
  CHECK_THROWS_AS(conv.forward(Tensor({1, 3, 4, 4})), ssf::ShapeError);
  CHECK_THROWS_AS(conv.forward(Tensor({3, 4, 4})), ssf::ShapeError);
  Relu relu;
  CHECK_THROWS_AS(relu.backward(Tensor({1})), ssf::UsageError);
  Linear fresh("f", 2, 2, rng);
  CHECK_THROWS_AS(fresh.backward(Tensor({1, 2})), ssf::UsageError);
  CHECK_THROWS_AS(LayerSpec::conv2d(0, 1, 3, 1, 1).validate(), ssf::ShapeError);
}

TEST_CASE("gradient check on random shapes per layer kind") {
  std::mt19937_64 rng(5);
  SUBCASE("conv2d") {
    for (int t = 0; t < 20; ++t) {
      const std::size_t k = pick(rng, 1, 3);
      const std::size_t s = pick(rng, 1, 2), p = pick(rng, 0, k - 1);
      const std::size_t h = pick(rng, k, 6), w = pick(rng, k, 6);
      Conv2d conv("c", LayerSpec::conv2d(pick(rng, 1, 3), pick(rng, 1, 3), k, s, p), rng);
      const auto r = check_layer(conv, random_tensor({pick(rng, 1, 2), conv.spec().in, h, w}, rng), rng);
      INFO("max error " << r.max_error());
      CHECK(r.passed);
    }
  }
  SUBCASE("conv1d") {
    for (int t = 0; t < 20; ++t) {
      const std::size_t k = pick(rng, 1, 3);
      Conv1d conv("c", LayerSpec::conv1d(pick(rng, 1, 3), pick(rng, 1, 3), k, pick(rng, 1, 2),
                                         pick(rng, 0, k - 1)),
                  rng);
      const auto r = check_layer(conv, random_tensor({pick(rng, 1, 3), conv.spec().in, pick(rng, k, 9)}, rng), rng);
      CHECK(r.passed);
    }
  }
  SUBCASE("fully connected") {
    for (int t = 0; t < 20; ++t) {
      Linear fc("fc", pick(rng, 1, 12), pick(rng, 1, 12), rng);
      const auto r = check_layer(fc, random_tensor({pick(rng, 1, 4), fc.spec().in}, rng), rng);
      CHECK(r.passed);
    }
  }
  SUBCASE("relu") {
    for (int t = 0; t < 20; ++t) {
      Relu relu;
      const auto r = check_layer(relu, kink_free_tensor({pick(rng, 1, 4), pick(rng, 1, 10)}, rng), rng);
      CHECK(r.passed);
    }
  }
  SUBCASE("flatten") {
    for (int t = 0; t < 20; ++t) {
      Flatten flat;
      const auto r = check_layer(flat, random_tensor({pick(rng, 1, 3), pick(rng, 1, 3), pick(rng, 1, 4)}, rng), rng);
      CHECK(r.passed);
    }
  }
  SUBCASE("softmax cross-entropy") {
    for (int t = 0; t < 20; ++t) {
      const std::size_t b = pick(rng, 1, 4), c = pick(rng, 2, 7);
      Parameter logits{"logits", random_tensor({b, c}, rng, -3.0, 3.0)};
      std::vector<std::size_t> labels(b);
      for (auto& l : labels) l = pick(rng, 0, c - 1);
      auto objective = [&](bool compute_grad) {
        const LossResult r = softmax_cross_entropy(logits.value, labels);
        if (compute_grad) {
          auto g = logits.value.grad();
          for (std::size_t k = 0; k < g.size(); ++k) g[k] += r.grad_logits[k];
        }
        return r.loss;
      };
      CHECK(grad_check({&logits}, objective).passed);
    }
  }
}

TEST_CASE("gradient check rejects a doubled backward") {
  std::mt19937_64 rng(6);
  Linear fc("fc", 4, 3, rng);
  const Tensor x = random_tensor({2, 4}, rng);
  const auto r = check_layer(fc, x, rng, 2.0);
  CHECK_FALSE(r.passed);
  CHECK(r.max_error() > 0.3);

  Parameter w{"w", Tensor({3}, {0.5, -1.0, 2.0})};
  auto linear = [&](bool compute_grad) {
    const double loss = 3.0 * w.value[0] - 2.0 * w.value[1] + w.value[2];
    if (compute_grad) {
      w.value.grad()[0] += 3.0;
      w.value.grad()[1] += -2.0;
      w.value.grad()[2] += 1.0;
    }
    return loss;
  };
  const auto good = grad_check({&w}, linear);
  CHECK(good.passed);
  CHECK(good.max_error() < 1e-9);
  auto doubled = [&](bool compute_grad) {
    const double loss = linear(compute_grad);
    if (compute_grad) {
      for (double& g : w.value.grad()) g *= 2.0;
    }
    return loss;
  };
  CHECK_FALSE(grad_check({&w}, doubled).passed);
}

TEST_CASE("gradient check surfaces non-finite losses") {
  Parameter w{"w", Tensor({1}, {1.0})};
  auto bad = [&](bool) { return std::numeric_limits<double>::quiet_NaN(); };
  CHECK_THROWS_AS(grad_check({&w}, bad), ssf::Error);
  CHECK(relative_error(0.0, 0.0) == 0.0);
  CHECK(relative_error(1.0, 3.0) == doctest::Approx(0.5));
}

TEST_CASE("softmax cross-entropy values") {
  const std::vector<std::size_t> l0{0};
  for (std::size_t c : {2, 5, 67}) {
    const auto r = softmax_cross_entropy(Tensor({1, c}, 0.3), l0);
    CHECK(r.loss == doctest::Approx(std::log(static_cast<double>(c))).epsilon(1e-14));
  }
  const auto peaked = softmax_cross_entropy(Tensor({1, 2}, {1000.0, 0.0}), l0);
  CHECK(peaked.loss == doctest::Approx(0.0));
  CHECK(peaked.loss >= 0.0);
  // Mean over the batch; gradient rows are (softmax - onehot) / B.
  const std::vector<std::size_t> labels{1, 0};
  const auto r = softmax_cross_entropy(Tensor({2, 2}, {0.0, 0.0, 0.0, 0.0}), labels);
  CHECK(r.grad_logits[0] == doctest::Approx(0.25));
  CHECK(r.grad_logits[1] == doctest::Approx(-0.25));
  CHECK_THROWS_AS(softmax_cross_entropy(Tensor({1, 2}), std::vector<std::size_t>{2}),
                  ssf::ValidationError);
  CHECK_THROWS_AS(softmax_cross_entropy(Tensor({2, 2}), l0), ssf::ShapeError);
}

TEST_CASE("cross-entropy stays finite for large logits") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    const std::size_t b = pick(rng, 1, 4), c = pick(rng, 2, 10);
    const Tensor logits = random_tensor({b, c}, rng, -1e6, 1e6);
    std::vector<std::size_t> labels(b);
    for (auto& l : labels) l = pick(rng, 0, c - 1);
    const auto r = softmax_cross_entropy(logits, labels);
    CHECK(std::isfinite(r.loss));
    CHECK(r.loss >= 0.0);
    for (double g : r.grad_logits.values()) CHECK(std::isfinite(g));
  }
}

TEST_CASE("adam") {
  SUBCASE("zero gradient with no decay leaves values unchanged") {
    Parameter p{"p", Tensor({3}, {1.0, -2.0, 0.5})};
    p.value.grad();
    AdamState adam({1e-3, 0.0});
    for (int s = 0; s < 5; ++s) adam.step({&p});
    CHECK(std::vector<double>(p.value.values().begin(), p.value.values().end()) ==
          std::vector<double>{1.0, -2.0, 0.5});
  }
  SUBCASE("first step moves by lr against the gradient sign") {
    Parameter p{"p", Tensor({3}, {1.0, 1.0, 1.0})};
    p.value.grad()[0] = 4.0;
    p.value.grad()[1] = -0.01;
    p.value.grad()[2] = 0.0;
    AdamState adam({0.1, 0.0});
    adam.step({&p});
    CHECK(p.value[0] == doctest::Approx(0.9).epsilon(1e-6));
    CHECK(p.value[1] == doctest::Approx(1.1).epsilon(1e-5));
    CHECK(p.value[2] == 1.0);
    CHECK(adam.step_count() == 1);
  }
  SUBCASE("minimizes x^2") {
    Parameter p{"x", Tensor({1}, {1.0})};
    AdamState adam({0.1, 0.0});
    double last = 1.0;
    for (int s = 0; s < 3; ++s) {
      p.value.zero_grad();
      p.value.grad()[0] = 2.0 * p.value[0];
      adam.step({&p});
      CHECK(std::abs(p.value[0]) < last);
      last = std::abs(p.value[0]);
    }
  }
  SUBCASE("decoupled weight decay and frozen parameters") {
    Parameter p{"p", Tensor({1}, {2.0})};
    Parameter f{"f", Tensor({1}, {2.0}), true};
    p.value.grad();
    f.value.grad()[0] = 1.0;
    AdamState adam({0.1, 0.5});
    adam.step({&p, &f});
    CHECK(p.value[0] == doctest::Approx(2.0 * (1.0 - 0.05)).epsilon(1e-12));
    CHECK(f.value[0] == 2.0);
  }
  SUBCASE("parameter list must stay fixed") {
    Parameter a{"a", Tensor({1})}, b{"b", Tensor({2})};
    a.value.grad();
    b.value.grad();
    AdamState adam;
    adam.step({&a});
    CHECK_THROWS_AS(adam.step({&a, &b}), ssf::ShapeError);
  }
}

TEST_CASE("seeded initialization is bit-reproducible") {
  auto build = [](std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto net = std::make_unique<Sequential>();
    net->emplace<Conv2d>("c", LayerSpec::conv2d(1, 4, 3, 1, 1), rng);
    net->emplace<Relu>();
    net->emplace<Flatten>();
    net->emplace<Linear>("fc", 4 * 5 * 5, 3, rng);
    return net;
  };
  auto a = build(42), b = build(42), c = build(43);
  std::vector<const Parameter*> pa, pb, pc;
  for (auto* p : a->parameters()) pa.push_back(p);
  for (auto* p : b->parameters()) pb.push_back(p);
  for (auto* p : c->parameters()) pc.push_back(p);
  CHECK(parameter_hash(pa) == parameter_hash(pb));
  CHECK(parameter_hash(pa) != parameter_hash(pc));
  for (auto* p : a->parameters()) {
    if (p->name == "fc.weight") {
      const double bound = std::sqrt(6.0 / 100.0);
      for (double v : p->value.values()) CHECK(std::abs(v) <= bound);
    }
    if (p->name.ends_with(".bias")) {
      for (double v : p->value.values()) CHECK(v == 0.0);
    }
  }
  std::mt19937_64 rng(0);
  const Tensor x = random_tensor({2, 1, 5, 5}, rng);
  const Tensor ya = a->forward(x), yb = b->infer(x);
  CHECK(std::memcmp(ya.data(), yb.data(), ya.size() * sizeof(double)) == 0);
  CHECK(parameter_count(a->parameters()) == 4 * 9 + 4 + 100 * 3 + 3);
}

TEST_CASE("analytic FLOPs match instrumented multiply-accumulates") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 10; ++t) {
    const std::size_t h = pick(rng, 3, 12), w = pick(rng, 3, 12);
    const std::size_t cin = pick(rng, 1, 4), cout = pick(rng, 1, 6);
    const std::size_t k = pick(rng, 1, 3), s = pick(rng, 1, 2);
    Conv2d conv("c", LayerSpec::conv2d(cin, cout, k, s, k / 2), rng);
    MacCounterScope scope;
    conv.infer(random_tensor({1, cin, h, w}, rng));
    CHECK(conv.flops({cin, h, w}) == 2 * scope.count());
  }
  Linear fc("fc", 30, 7, rng);
  MacCounterScope scope;
  fc.infer(random_tensor({1, 30}, rng));
  CHECK(fc.flops({30}) == 2 * scope.count());
  CHECK(fc.flops({30}) == 2 * 30 * 7);
}

TEST_CASE("checkpoint round trip and hashing") {
  std::mt19937_64 rng(9);
  Linear fc("fc", 3, 2, rng);
  Conv1d conv("conv", LayerSpec::conv1d(1, 2, 3, 1, 1), rng);
  std::vector<Parameter*> params = fc.parameters();
  for (auto* p : conv.parameters()) params.push_back(p);
  const Checkpoint ck = snapshot("arch-a", params);
  CHECK(ck.blocks.size() == 4);
  CHECK(ck.find("conv.weight") != nullptr);
  CHECK(ck.find("nope") == nullptr);
  CHECK(decode_checkpoint(encode_checkpoint(ck)) == ck);

  const auto dir = std::filesystem::temp_directory_path() / "ssf_test_nn_ckpt";
  std::filesystem::create_directories(dir);
  save_checkpoint(dir / "m.ckpt", ck, "{\"seed\":1}");
  CHECK(load_checkpoint(dir / "m.ckpt") == ck);
  CHECK(std::filesystem::exists(metadata_path(dir / "m.ckpt")));
  std::filesystem::remove_all(dir);

  std::vector<const CheckpointBlock*> blocks;
  for (const auto& b : ck.blocks) blocks.push_back(&b);
  std::vector<const Parameter*> cparams(params.begin(), params.end());
  CHECK(block_hash(blocks) == parameter_hash(cparams));

  // One ulp changes the hash.
  const double before = params[0]->value[0];
  params[0]->value[0] = std::nextafter(before, 10.0);
  CHECK(block_hash(blocks) != parameter_hash(cparams));
  restore(ck, params);
  CHECK(params[0]->value[0] == before);
  CHECK(block_hash(blocks) == parameter_hash(cparams));

  Linear other("fc", 4, 2, rng);
  CHECK_THROWS_AS(restore(ck, other.parameters()), ssf::ValidationError);
  Linear missing("zz", 3, 2, rng);
  CHECK_THROWS_AS(restore(ck, missing.parameters()), ssf::ValidationError);
  CHECK_NOTHROW(restore(ck, missing.parameters(), true));

  const std::string bytes = encode_checkpoint(ck);
  CHECK_THROWS_AS(decode_checkpoint("XXXX"), ssf::IoError);
  CHECK_THROWS_AS(decode_checkpoint(bytes.substr(0, bytes.size() - 4)), ssf::IoError);
  CHECK_THROWS_AS(decode_checkpoint(bytes + "x"), ssf::IoError);
}
