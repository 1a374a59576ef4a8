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

#include "ssf/cli/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "ssf/common/error.hpp"
#include "ssf/core/io.hpp"
#include "ssf/core/ssf.hpp"
#include "ssf/data/batch.hpp"
#include "ssf/data/dataset.hpp"
#include "ssf/data/manifest.hpp"
#include "ssf/data/synth.hpp"
#include "ssf/eval/ablation.hpp"
#include "ssf/eval/complexity.hpp"
#include "ssf/eval/metrics.hpp"
#include "ssf/models/scene_model.hpp"
#include "ssf/models/train.hpp"
#include "ssf/nn/checkpoint.hpp"
#include "ssf/version.hpp"

namespace ssf::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct ExtractArgs {
  std::vector<std::string> inputs;
  std::string out;
  std::size_t L = 0;
  std::string void_value = "0";
  std::string format = "csv";
  std::size_t threads = 1;
};

struct SynthArgs {
  std::string out;
  std::string variant = "standard";
  std::uint64_t seed = 0;
  double noise = 0.1;
  std::size_t samples_per_class = 100;
  std::string mask_format = "container";
};

struct TrainArgs {
  std::string manifest;
  std::string stage = "semantic_only";
  std::string head = "cnn";
  std::string subset = "ssfs";
  std::size_t epochs = 100;
  std::size_t batch = data::kDefaultBatchSize;
  double lr = 1e-4;
  double weight_decay = 5e-4;
  std::uint64_t seed = 0;
  std::size_t global_width = 256;
  std::size_t fc3_width = 512;
  std::string from_checkpoint;
  std::string out;
  std::string metrics;
  std::size_t threads = 1;
};

struct EvalArgs {
  std::string manifest;
  std::string checkpoint;
  std::string split = "test";
  std::string out;
  std::string confusion;
  std::size_t threads = 1;
};

struct AblateArgs {
  std::string manifest;
  std::string out;
  std::size_t epochs = 100;
  std::size_t batch = data::kDefaultBatchSize;
  double lr = 1e-4;
  double weight_decay = 5e-4;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

struct GradcheckArgs {
  std::string model = "ssf-cnn";
  double tol = 1e-4;
  double step = 1e-6;
  std::size_t L = 8;
  std::string subset = "ssfs";
  std::size_t batch = 2;
  std::size_t max_entries = 16;
  std::uint64_t seed = 0;
  std::string out;
};

struct BenchArgs {
  std::size_t L = 40;
  std::string subset = "ssfs";
  std::size_t classes = 6;
  std::size_t iterations = 1000;
  std::size_t warmup = 100;
  std::size_t extract_size = 224;
  std::uint64_t seed = 0;
  std::string out;
};

std::string env_name(const std::string& flag) {
  std::string name = kEnvPrefix;
  for (char c : flag) name.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  return name;
}

// Long flag bound to `value`, mirrored by an environment variable.
template <typename T>
CLI::Option* flag(CLI::App* app, const std::string& name, T& value, const std::string& help) {
  // Environment name from the first long name: "--weight-decay,--wd" -> WEIGHT_DECAY.
  std::string env;
  for (char c : name.substr(2, name.find(',') - 2)) env.push_back(c == '-' ? '_' : c);
  return app->add_option(name, value, help)->envname(env_name(env));
}

std::optional<CategoryIndex> parse_void(const std::string& text) {
  if (text == "none") return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(text, &used);
    if (used == text.size() && v <= 0xFFFF) return static_cast<CategoryIndex>(v);
  } catch (const std::exception&) {
  }
  throw UsageError("--void must be 'none' or an integer in [0, 65535], got '" + text + "'");
}

std::string hex(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Full resolved configuration of a subcommand, its seed and the version.
void write_run_record(const fs::path& path, const CLI::App& sub,
                      const std::vector<std::string>& args, std::optional<std::uint64_t> seed) {
  json config = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt == sub.get_help_ptr()) continue;
    const std::string name = opt->get_name(false, true);
    if (name.empty()) continue;
    const auto& results = opt->results();
    if (!results.empty()) {
      config[name] = results.size() == 1 ? json(results.front()) : json(results);
    } else {
      config[name] = opt->get_default_str();
    }
  }
  json record = {{"command", sub.get_name()},
                 {"version", kVersion},
                 {"argv", args},
                 {"config", config}};
  record["seed"] = seed ? json(*seed) : json(nullptr);
  write_file_bytes(path, record.dump(2) + "\n");
}

// ----------------------------------------------------------------- extract

int cmd_extract(const ExtractArgs& a, const CLI::App& sub, const std::vector<std::string>& args,
                std::ostream& out, std::ostream& err) {
  if (a.format != "csv" && a.format != "bin") throw UsageError("--format must be csv or bin");
  const bool explicit_l = sub.get_option("--L")->count() > 0;
  const bool explicit_void = sub.get_option("--void")->count() > 0;
  const std::optional<CategoryIndex> flag_void = parse_void(a.void_value);

  struct Job {
    std::string id;
    fs::path mask;
    std::size_t L;
    std::optional<CategoryIndex> void_value;
  };
  std::vector<Job> jobs;
  std::vector<std::string> errors;
  for (const std::string& input : a.inputs) {
    const fs::path p(input);
    if (p.extension() == ".jsonl") {
      try {
        const data::DatasetManifest m = data::load_manifest(p);
        for (const auto& e : m.entries) {
          jobs.push_back({e.id, m.resolve(e.mask), explicit_l ? a.L : m.num_categories,
                          explicit_void ? flag_void : m.void_value});
        }
      } catch (const Error& e) {
        errors.push_back(input + ": " + e.what());
      }
    } else {
      if (!explicit_l) throw UsageError("--L is required when extracting mask files");
      jobs.push_back({p.stem().string(), p, a.L, flag_void});
    }
  }

  const fs::path out_dir(a.out);
  fs::create_directories(out_dir);
  std::vector<std::string> job_errors(jobs.size());
  auto work = [&](std::size_t i) {
    const Job& j = jobs[i];
    try {
      const SsfMatrix ssf = extract_ssf(read_mask(j.mask, j.L, j.void_value));
      if (a.format == "csv") {
        write_file_bytes(out_dir / (j.id + ".csv"), ssf_to_csv(ssf));
      } else {
        write_f64_grid(out_dir / (j.id + ".ssf"), ssf_to_grid(ssf));
      }
    } catch (const std::exception& e) {
      job_errors[i] = e.what();
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(a.threads, 1, std::max<std::size_t>(jobs.size(), 1));
  if (threads <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) work(i);
      });
    }
  }
  std::size_t written = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (job_errors[i].empty()) {
      ++written;
    } else {
      errors.push_back(jobs[i].mask.string() + ": " + job_errors[i]);
    }
  }
  write_run_record(out_dir / "run.json", sub, args, std::nullopt);
  out << "extracted " << written << " of " << jobs.size() << " masks into " << out_dir.string()
      << "\n";
  if (!errors.empty()) {
    err << errors.size() << " input(s) failed:\n";
    for (const auto& e : errors) err << "  " << e << "\n";
    return kDataError;
  }
  return kOk;
}

// ------------------------------------------------------------------- synth

int cmd_synth(const SynthArgs& a, const CLI::App& sub, const std::vector<std::string>& args,
              std::ostream& out) {
  data::SynthSpec spec;
  if (a.variant == "standard") {
    spec = data::standard_synth_spec(a.seed);
  } else if (a.variant == "split") {
    spec = data::split_information_spec(a.seed);
  } else {
    throw UsageError("--variant must be standard or split");
  }
  spec.noise = a.noise;
  spec.samples_per_class = a.samples_per_class;
  MaskFormat format;
  if (a.mask_format == "container") {
    format = MaskFormat::kContainer;
  } else if (a.mask_format == "pgm") {
    format = MaskFormat::kPgm;
  } else {
    throw UsageError("--mask-format must be container or pgm");
  }
  const data::DatasetManifest m = data::generate_synthetic(spec, a.out, format);
  write_run_record(fs::path(a.out) / "run.json", sub, args, a.seed);
  out << "wrote " << m.entries.size() << " samples (" << m.split(data::Split::kTrain).size()
      << " train, " << m.split(data::Split::kTest).size() << " test) to "
      << (fs::path(a.out) / "manifest.jsonl").string() << "\n";
  return kOk;
}

// ------------------------------------------------------------------- train

models::ModelSpec semantic_spec(const std::string& head, const std::string& subset,
                                const data::Dataset& ds) {
  models::ModelSpec s;
  s.kind = models::ModelKind::kSemantic;
  s.head = models::parse_head(head);
  s.subset = FeatureSubset::parse(subset);
  s.num_categories = ds.num_categories;
  s.num_classes = ds.num_classes;
  return s;
}

int cmd_train(const TrainArgs& a, const CLI::App& sub, const std::vector<std::string>& args,
              std::ostream& out) {
  const models::Stage stage = models::parse_stage(a.stage);
  if (stage == models::Stage::kStep2Fusion && a.from_checkpoint.empty()) {
    throw UsageError("--stage step2 requires --from-checkpoint <step1 checkpoint>");
  }
  if (stage != models::Stage::kStep2Fusion && !a.from_checkpoint.empty()) {
    throw UsageError("--from-checkpoint only applies to --stage step2");
  }
  if (sub.get_option("--head")->count() > 0 && stage == models::Stage::kStep1Global) {
    throw UsageError("--head does not apply to --stage step1");
  }

  const data::DatasetManifest manifest = data::load_manifest(a.manifest);
  const data::Dataset ds = data::load_dataset(manifest, a.threads);

  models::ModelSpec spec = semantic_spec(a.head, a.subset, ds);
  std::optional<nn::Checkpoint> step1;
  if (stage != models::Stage::kSemanticOnly) {
    if (ds.global_width == 0) throw ValidationError("manifest has no global feature vectors");
    spec.kind = stage == models::Stage::kStep1Global ? models::ModelKind::kGlobal
                                                     : models::ModelKind::kFusion;
    spec.global_in = ds.global_width;
    spec.global_width = a.global_width;
    spec.fc3_width = a.fc3_width;
  }
  if (stage == models::Stage::kStep2Fusion) {
    step1 = nn::load_checkpoint(a.from_checkpoint);
    if (sub.get_option("--global-width")->count() == 0) {
      spec.global_width = models::ModelSpec::from_json(step1->architecture).global_width;
    }
  }

  models::SceneModel model(spec, a.seed);
  models::TrainPlan plan = models::make_plan(stage, model);
  plan.epochs = a.epochs;
  plan.batch_size = a.batch;
  plan.optimizer.learning_rate = a.lr;
  plan.optimizer.weight_decay = a.weight_decay;
  plan.seed = a.seed;

  const fs::path ckpt_path(a.out);
  const fs::path metrics_path = a.metrics.empty() ? fs::path(a.out + ".metrics.jsonl") : fs::path(a.metrics);
  std::string metrics_text;
  const models::TrainResult result =
      models::train(plan, ds, model, step1 ? &*step1 : nullptr, [&](const models::EpochMetrics& m) {
        metrics_text += models::to_jsonl(m) + "\n";
      });
  write_file_bytes(metrics_path, metrics_text);

  const auto tr = result.final_metrics(data::Split::kTrain);
  const auto te = result.final_metrics(data::Split::kTest);
  json meta = {{"seed", a.seed},
               {"epochs", a.epochs},
               {"stage", models::to_string(stage)},
               {"architecture", json::parse(spec.to_json())},
               {"frozen", plan.frozen},
               {"final", {{"train", {{"loss", tr.loss}, {"accuracy", tr.accuracy}}},
                          {"test", {{"loss", te.loss}, {"accuracy", te.accuracy}}}}}};
  if (stage == models::Stage::kStep2Fusion) {
    meta["step1_checkpoint"] = a.from_checkpoint;
    meta["frozen_hash_step1"] = hex(result.step1_hash);
    meta["frozen_hash_before"] = hex(result.frozen_hash_before);
    meta["frozen_hash_after"] = hex(result.frozen_hash_after);
  }
  nn::save_checkpoint(ckpt_path, result.checkpoint, meta.dump(2) + "\n");
  write_run_record(fs::path(a.out + ".run.json"), sub, args, a.seed);

  char line[160];
  std::snprintf(line, sizeof line, "%s: %zu epochs, train acc %.4f loss %.4f, test acc %.4f loss %.4f\n",
                models::to_string(stage).c_str(), a.epochs, tr.accuracy, tr.loss, te.accuracy,
                te.loss);
  out << line << "checkpoint " << ckpt_path.string() << "\n";
  if (stage == models::Stage::kStep2Fusion) {
    out << "frozen hash " << hex(result.frozen_hash_before) << " -> "
        << hex(result.frozen_hash_after)
        << (result.frozen_hash_before == result.frozen_hash_after ? " (unchanged)" : " (CHANGED)")
        << "\n";
  }
  return kOk;
}

// -------------------------------------------------------------------- eval

int cmd_eval(const EvalArgs& a, const CLI::App& sub, const std::vector<std::string>& args,
             std::ostream& out) {
  const data::Split split = data::parse_split(a.split);
  const nn::Checkpoint ckpt = nn::load_checkpoint(a.checkpoint);
  models::SceneModel model(models::ModelSpec::from_json(ckpt.architecture), 0);
  model.load(ckpt);
  const data::DatasetManifest manifest = data::load_manifest(a.manifest);
  const eval::EvalReport report = eval::evaluate(model, manifest, split, a.threads);
  write_file_bytes(a.out, report.to_json() + "\n");
  if (!a.confusion.empty()) write_file_bytes(a.confusion, report.confusion_csv());
  write_run_record(fs::path(a.out + ".run.json"), sub, args, std::nullopt);
  out << report.to_text();
  return kOk;
}

// ------------------------------------------------------------------ ablate

int cmd_ablate(const AblateArgs& a, const CLI::App& sub, const std::vector<std::string>& args,
               std::ostream& out) {
  const data::DatasetManifest manifest = data::load_manifest(a.manifest);
  const data::Dataset ds = data::load_dataset(manifest, a.threads);
  eval::AblationConfig cfg;
  cfg.plan.epochs = a.epochs;
  cfg.plan.batch_size = a.batch;
  cfg.plan.optimizer.learning_rate = a.lr;
  cfg.plan.optimizer.weight_decay = a.weight_decay;
  cfg.plan.seed = a.seed;
  cfg.threads = a.threads;
  const eval::AblationGrid grid = eval::run_ablation(eval::AblationGrid::full(), ds, cfg);
  const fs::path dir(a.out);
  write_file_bytes(dir / "ablation.json", grid.to_json() + "\n");
  write_file_bytes(dir / "ablation.txt", grid.to_text());
  write_run_record(dir / "run.json", sub, args, a.seed);
  out << grid.to_text();
  const bool all_ok = std::all_of(grid.results.begin(), grid.results.end(),
                                  [](const eval::AblationResult& r) { return r.ok; });
  return all_ok ? kOk : kDataError;
}

// --------------------------------------------------------------- gradcheck

int cmd_gradcheck(const GradcheckArgs& a, const CLI::App& sub,
                  const std::vector<std::string>& args, std::ostream& out) {
  models::ModelSpec spec;
  spec.num_categories = a.L;
  spec.num_classes = 4;
  spec.subset = FeatureSubset::parse(a.subset);
  spec.global_in = 12;
  spec.global_width = 16;
  spec.fc3_width = 32;
  if (a.model == "ssf-cnn") {
    spec.head = models::HeadKind::kCnn;
  } else if (a.model == "ssf-nn") {
    spec.head = models::HeadKind::kNn;
  } else if (a.model == "pc-conv1d") {
    spec.head = models::HeadKind::kPcConv1d;
    spec.subset = FeatureSubset(true, false, false);
  } else if (a.model == "global") {
    spec.kind = models::ModelKind::kGlobal;
  } else if (a.model == "fusion") {
    spec.kind = models::ModelKind::kFusion;
  } else {
    throw UsageError("--model must be ssf-cnn, ssf-nn, pc-conv1d, global or fusion");
  }
  models::SceneModel model(spec, a.seed);

  std::mt19937_64 rng(data::derive_seed(a.seed, 7));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  models::ModelInput input;
  if (spec.uses_semantic()) {
    nn::Tensor::Shape shape = model.ssf_sample_shape();
    shape.insert(shape.begin(), a.batch);
    input.ssf = nn::Tensor(shape);
    for (double& v : input.ssf.values()) v = unit(rng);
  }
  if (spec.uses_global()) {
    input.global = nn::Tensor({a.batch, spec.global_in});
    for (double& v : input.global.values()) v = 2.0 * unit(rng) - 1.0;
  }
  std::vector<std::size_t> labels(a.batch);
  for (std::size_t i = 0; i < a.batch; ++i) labels[i] = i % spec.num_classes;

  nn::GradCheckOptions opts;
  opts.step = a.step;
  opts.tolerance = a.tol;
  opts.max_entries_per_block = a.max_entries;
  opts.seed = a.seed;
  const nn::GradCheckReport report = models::check_model_gradients(model, input, labels, opts);

  json blocks = json::array();
  char line[192];
  for (const auto& b : report.blocks) {
    std::snprintf(line, sizeof line, "%-20s checked %6zu  max rel err %.3e\n", b.name.c_str(),
                  b.checked, b.max_relative_error);
    out << line;
    blocks.push_back({{"name", b.name},
                      {"checked", b.checked},
                      {"max_relative_error", b.max_relative_error},
                      {"worst_index", b.worst_index}});
  }
  std::snprintf(line, sizeof line, "%s: max rel err %.3e, tolerance %.1e\n",
                report.passed ? "PASS" : "FAIL", report.max_error(), report.tolerance);
  out << line;
  if (!a.out.empty()) {
    const fs::path dir(a.out);
    json j = {{"model", a.model}, {"passed", report.passed}, {"tolerance", report.tolerance},
              {"max_relative_error", report.max_error()}, {"blocks", blocks}};
    write_file_bytes(dir / "gradcheck.json", j.dump(2) + "\n");
    write_run_record(dir / "run.json", sub, args, a.seed);
  }
  return report.passed ? kOk : kDataError;
}

// ------------------------------------------------------------------- bench

int cmd_bench(const BenchArgs& a, const CLI::App& sub, const std::vector<std::string>& args,
              std::ostream& out) {
  std::vector<eval::ComplexityReport> reports;
  const eval::BenchOptions opts{a.warmup, a.iterations};
  const FeatureSubset subset = FeatureSubset::parse(a.subset);
  for (const auto& [name, head] :
       {std::pair{std::string("-CNN"), models::HeadKind::kCnn},
        std::pair{std::string("-NN"), models::HeadKind::kNn}}) {
    models::ModelSpec spec;
    spec.head = head;
    spec.subset = subset;
    spec.num_categories = a.L;
    spec.num_classes = a.classes;
    models::SceneModel model(spec, a.seed);
    reports.push_back(eval::measure_complexity(model, subset.label() + name, opts));
  }
  out << eval::complexity_table(reports);

  // Extraction throughput on a random mask.
  std::mt19937_64 rng(data::derive_seed(a.seed, 11));
  std::uniform_int_distribution<int> cat(0, static_cast<int>(a.L));
  std::vector<CategoryIndex> pixels(a.extract_size * a.extract_size);
  for (auto& p : pixels) p = static_cast<CategoryIndex>(cat(rng));
  const SegmentationMask mask(a.extract_size, a.extract_size, std::move(pixels), a.L);
  std::vector<double> times;
  times.reserve(a.iterations);
  double sink = 0.0;
  for (std::size_t i = 0; i < a.iterations; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    sink += extract_ssf(mask).rows[0].pc;
    times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  std::nth_element(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(times.size() / 2),
                   times.end());
  const double median = times.empty() ? 0.0 : times[times.size() / 2];
  char line[160];
  std::snprintf(line, sizeof line, "extract_ssf %zux%zu L=%zu: median %.1f us over %zu runs\n",
                a.extract_size, a.extract_size, a.L, median * 1e6, times.size());
  out << line;
  if (sink < 0.0) out << " ";
  if (!a.out.empty()) {
    const fs::path dir(a.out);
    json j = json::parse(eval::complexity_json(reports));
    j["extract_median_seconds"] = median;
    write_file_bytes(dir / "bench.json", j.dump(2) + "\n");
    write_run_record(dir / "run.json", sub, args, a.seed);
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Segmentation-based semantic features: extraction, training and evaluation",
               "ssf"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  app.footer(std::string("Every flag can also be set through an environment variable: ") +
             kEnvPrefix + "<FLAG>, upper case with dashes as underscores (e.g. " + kEnvPrefix +
             "SEED, " + kEnvPrefix + "WEIGHT_DECAY). Command-line values win.");

  const auto threads_range = CLI::Range(std::size_t{1}, std::size_t{256});

  ExtractArgs ex;
  CLI::App* extract = app.add_subcommand("extract", "Compute the L x 5 SSF matrix of masks");
  extract->add_option("inputs", ex.inputs, "Mask files (PGM or SSFM) or manifest .jsonl files")
      ->required();
  flag(extract, "--out", ex.out, "Output directory")->required();
  flag(extract, "--L", ex.L, "Number of categories (taken from manifests when omitted)")
      ->check(CLI::Range(std::size_t{1}, std::size_t{65535}));
  flag(extract, "--void", ex.void_value, "Void pixel value, or 'none'");
  flag(extract, "--format", ex.format, "Output format: csv or bin (f64 container)")
      ->check(CLI::IsMember({"csv", "bin"}));
  flag(extract, "--threads", ex.threads, "Worker threads")->check(threads_range);

  SynthArgs sy;
  CLI::App* synth = app.add_subcommand("synth", "Generate the synthetic benchmark");
  flag(synth, "--out", sy.out, "Output directory")->required();
  flag(synth, "--variant", sy.variant, "standard or split (class split across branches)")
      ->check(CLI::IsMember({"standard", "split"}));
  flag(synth, "--seed", sy.seed, "Random seed");
  flag(synth, "--noise", sy.noise, "Noise level in [0, 1)")->check(CLI::Range(0.0, 0.999999));
  flag(synth, "--samples-per-class", sy.samples_per_class, "Samples per class")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
  flag(synth, "--mask-format", sy.mask_format, "container or pgm")
      ->check(CLI::IsMember({"container", "pgm"}));

  TrainArgs tr;
  CLI::App* train = app.add_subcommand("train", "Train a model (two-step protocol or semantic only)");
  flag(train, "--manifest", tr.manifest, "Dataset manifest (.jsonl)")->required();
  flag(train, "--stage", tr.stage, "step1 | step2 | semantic (long forms accepted)")
      ->check(CLI::IsMember({"step1", "step2", "semantic", "step1_global", "step2_fusion",
                             "semantic_only"}));
  flag(train, "--head", tr.head, "Semantic head: cnn, nn or pc-conv1d")
      ->check(CLI::IsMember({"cnn", "nn", "pc-conv1d"}));
  flag(train, "--subset", tr.subset, "Feature columns, e.g. pc,ap,sd or ssfs");
  flag(train, "--epochs", tr.epochs, "Epochs")->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  flag(train, "--batch", tr.batch, "Mini-batch size")->check(CLI::Range(std::size_t{1}, std::size_t{65536}));
  flag(train, "--lr", tr.lr, "Adam learning rate")->check(CLI::PositiveNumber);
  flag(train, "--weight-decay", tr.weight_decay, "Decoupled weight decay")->check(CLI::NonNegativeNumber);
  flag(train, "--seed", tr.seed, "Random seed");
  flag(train, "--global-width", tr.global_width, "FC1 output width (step1/step2)")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
  flag(train, "--fc3-width", tr.fc3_width, "FC3 output width (step2)")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
  flag(train, "--from-checkpoint", tr.from_checkpoint, "Step-1 checkpoint (required for step2)");
  flag(train, "--out", tr.out, "Checkpoint path")->required();
  flag(train, "--metrics", tr.metrics, "Per-epoch JSON-lines metrics (default <out>.metrics.jsonl)");
  flag(train, "--threads", tr.threads, "Threads for mask loading")->check(threads_range);

  EvalArgs ev;
  CLI::App* evalc = app.add_subcommand("eval", "Evaluate a checkpoint on a manifest split");
  flag(evalc, "--manifest", ev.manifest, "Dataset manifest (.jsonl)")->required();
  flag(evalc, "--checkpoint", ev.checkpoint, "Model checkpoint")->required();
  flag(evalc, "--split", ev.split, "train or test")->check(CLI::IsMember({"train", "test"}));
  flag(evalc, "--out", ev.out, "Report JSON path")->required();
  flag(evalc, "--confusion", ev.confusion, "Optional confusion-matrix CSV path");
  flag(evalc, "--threads", ev.threads, "Evaluation threads")->check(threads_range);

  AblateArgs ab;
  CLI::App* ablate = app.add_subcommand("ablate", "Run the 14-cell feature-subset x head grid");
  flag(ablate, "--manifest,--dataset", ab.manifest, "Dataset manifest (.jsonl)")->required();
  flag(ablate, "--out", ab.out, "Output directory")->required();
  flag(ablate, "--epochs", ab.epochs, "Epochs per cell")->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  flag(ablate, "--batch", ab.batch, "Mini-batch size")->check(CLI::Range(std::size_t{1}, std::size_t{65536}));
  flag(ablate, "--lr", ab.lr, "Adam learning rate")->check(CLI::PositiveNumber);
  flag(ablate, "--weight-decay", ab.weight_decay, "Decoupled weight decay")->check(CLI::NonNegativeNumber);
  flag(ablate, "--seed", ab.seed, "Random seed (shared by every cell)");
  flag(ablate, "--threads", ab.threads, "Cells trained in parallel")->check(threads_range);

  GradcheckArgs gc;
  CLI::App* gradcheck = app.add_subcommand("gradcheck", "Finite-difference gradient check of a model");
  flag(gradcheck, "--model", gc.model, "ssf-cnn, ssf-nn, pc-conv1d, global or fusion")
      ->check(CLI::IsMember({"ssf-cnn", "ssf-nn", "pc-conv1d", "global", "fusion"}));
  flag(gradcheck, "--tol", gc.tol, "Relative error tolerance")->check(CLI::PositiveNumber);
  flag(gradcheck, "--step", gc.step, "Central difference step")->check(CLI::PositiveNumber);
  flag(gradcheck, "--L", gc.L, "Number of categories")->check(CLI::Range(std::size_t{1}, std::size_t{4096}));
  flag(gradcheck, "--subset", gc.subset, "Feature columns");
  flag(gradcheck, "--batch", gc.batch, "Batch size")->check(CLI::Range(std::size_t{1}, std::size_t{1024}));
  flag(gradcheck, "--max-entries", gc.max_entries, "Entries checked per block (0 = all)");
  flag(gradcheck, "--seed", gc.seed, "Random seed");
  flag(gradcheck, "--out", gc.out, "Optional output directory for the report");

  BenchArgs be;
  CLI::App* bench = app.add_subcommand("bench", "FLOPs, parameters and throughput of the SSF heads");
  flag(bench, "--L", be.L, "Number of categories")->check(CLI::Range(std::size_t{1}, std::size_t{65535}));
  flag(bench, "--subset", be.subset, "Feature columns");
  flag(bench, "--classes", be.classes, "Number of scene classes")->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  flag(bench, "--iterations", be.iterations, "Timed iterations")->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
  flag(bench, "--warmup", be.warmup, "Warmup iterations");
  flag(bench, "--extract-size", be.extract_size, "Side of the extraction benchmark mask")
      ->check(CLI::Range(std::size_t{1}, kMaxMaskSide));
  flag(bench, "--seed", be.seed, "Random seed");
  flag(bench, "--out", be.out, "Optional output directory for the report");

  std::vector<std::string> argv_store{"ssf"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  // CLI11 skips environment values that fail validation; surface them.
  for (const CLI::App* sub : app.get_subcommands()) {
    for (const CLI::Option* opt : sub->get_options()) {
      const std::string env = opt->get_envname();
      if (env.empty() || opt->count() > 0) continue;
      const char* value = std::getenv(env.c_str());
      if (value != nullptr && *value != '\0') {
        err << env << "=" << value << " is not a valid value for " << opt->get_name() << "\n";
        return kUsageError;
      }
    }
  }

  try {
    if (*extract) return cmd_extract(ex, *extract, args, out, err);
    if (*synth) return cmd_synth(sy, *synth, args, out);
    if (*train) return cmd_train(tr, *train, args, out);
    if (*evalc) return cmd_eval(ev, *evalc, args, out);
    if (*ablate) return cmd_ablate(ab, *ablate, args, out);
    if (*gradcheck) return cmd_gradcheck(gc, *gradcheck, args, out);
    if (*bench) return cmd_bench(be, *bench, args, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}

}  // namespace ssf::cli
