/* Copyright 2026 The ehrqa Authors. All Rights Reserved.

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

// Command-line front end for the ehrqa pipeline.

#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "ehrqa/commands.h"
#include "ehrqa/config.h"
#include "ehrqa/errors.h"
#include "ehrqa/synthetic.h"

namespace {

// Scalar fields a flag may override on top of the config file.
struct Overrides {
  std::optional<double> delta;
  std::optional<std::string> polarity;
  std::optional<std::string> backend;
  std::optional<std::string> endpoint;
  std::optional<int> jitter;
  std::optional<double> flip;
  std::optional<double> temperature;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  bool no_splitting = false;
  bool natural_empties = false;
  bool strict_order = false;
};

void add_override_flags(CLI::App* app, Overrides& o) {
  app->add_option("--delta", o.delta, "Verification threshold");
  app->add_option("--polarity", o.polarity, "null-when-above | answer-when-above");
  app->add_option("--backend", o.backend, "oracle | noisy-oracle | remote");
  app->add_option("--endpoint", o.endpoint, "Remote reader URL");
  app->add_option("--jitter", o.jitter, "Noisy oracle boundary jitter");
  app->add_option("--flip", o.flip, "Noisy oracle flip probability");
  app->add_option("--temperature", o.temperature, "Noisy oracle temperature");
  app->add_option("--seed", o.seed, "Split seed and backend seed");
  app->add_option("--workers", o.workers, "Worker count");
  app->add_flag("--no-splitting", o.no_splitting, "Disable sentence splitting");
  app->add_flag("--natural-empties", o.natural_empties,
                "Keep answer-free sentences as impossible examples");
  app->add_flag("--strict-order", o.strict_order, "Require start < end when scoring spans");
}

ehrqa::PipelineConfig load(const std::string& path, const Overrides& o) {
  auto cfg = ehrqa::resolve_config(path);
  auto& v = cfg.extraction.verifier;
  if (o.delta) v.delta = *o.delta;
  if (o.polarity) v.polarity = ehrqa::parse_polarity(*o.polarity);
  if (o.strict_order) v.strict_order = true;
  if (o.backend) cfg.backend.kind = ehrqa::parse_backend_kind(*o.backend);
  if (o.endpoint) cfg.backend.endpoint = *o.endpoint;
  if (o.jitter) cfg.backend.noise.boundary_jitter = *o.jitter;
  if (o.flip) cfg.backend.noise.flip_prob = *o.flip;
  if (o.temperature) cfg.backend.noise.temperature = *o.temperature;
  if (o.seed) cfg.split_seed = cfg.backend.seed = *o.seed;
  if (o.workers) cfg.workers = *o.workers;
  if (o.no_splitting) cfg.text().enable_splitting = false;
  if (o.natural_empties) cfg.text().include_natural_empties = true;
  ehrqa::check_config(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QA dataset generation, extraction and evaluation for clinical text"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("-c,--config", config_path,
                 std::string("Config file (default: $") + ehrqa::kConfigEnvVar +
                     ", then built-in)");
  Overrides o;
  add_override_flags(&app, o);

  std::string input, output, gold, report, qid;

  auto* gen = app.add_subcommand("generate-dataset", "Annotations to SQuAD 2.0 splits");
  gen->add_option("input", input, "Annotation JSONL")->required();
  gen->add_option("out_dir", output, "Output directory")->required();

  auto* ext = app.add_subcommand("extract", "Run two-stage extraction over documents");
  ext->add_option("input", input, "Document JSONL")->required();
  ext->add_option("output", output, "Record JSONL")->required();

  auto* ev = app.add_subcommand("evaluate", "Score predictions against gold records");
  ev->add_option("predictions", input, "Predicted record JSONL")->required();
  ev->add_option("gold", gold, "Gold record JSONL")->required();
  ev->add_option("-o,--report", report, "Write the JSON report here");

  auto* ins = app.add_subcommand("inspect", "Show one example with spans marked");
  ins->add_option("dataset", input, "SQuAD file")->required();
  ins->add_option("qid", qid, "Question id")->required();

  double lo = -2.0, hi = 2.0;
  std::size_t points = 41;
  auto* sweep = app.add_subcommand("sweep-threshold", "Answerability accuracy across delta");
  sweep->add_option("dev", input, "SQuAD dev file")->required();
  sweep->add_option("--lo", lo, "Lowest delta")->capture_default_str();
  sweep->add_option("--hi", hi, "Highest delta")->capture_default_str();
  sweep->add_option("--points", points, "Grid size")->capture_default_str();
  bool with_inf = false;
  sweep->add_flag("--with-infinities", with_inf, "Add -inf and +inf to the grid");

  ehrqa::SynthOptions synth;
  std::string config_out;
  auto* syn = app.add_subcommand("synthesize", "Write a synthetic annotated corpus");
  syn->add_option("output", output, "Annotation JSONL")->required();
  syn->add_option("--docs", synth.num_docs, "Document count")->capture_default_str();
  syn->add_option("--corpus-seed", synth.seed, "Generator seed")->capture_default_str();
  syn->add_option("--config-out", config_out, "Also write the matching config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*syn) {
      auto docs = ehrqa::synthesize_corpus(synth);
      std::ofstream out(output, std::ios::binary);
      if (!out) throw ehrqa::Error("cannot open '" + output + "' for writing");
      ehrqa::write_annotations(out, docs);
      if (!config_out.empty()) ehrqa::save_config(ehrqa::synthetic_config(), config_out);
      std::cout << "wrote " << docs.size() << " documents to " << output << "\n";
      return 0;
    }

    const auto cfg = load(config_path, o);
    if (*gen) {
      auto s = ehrqa::cmd_generate_dataset(cfg, input, output, &std::cerr);
      std::cout << ehrqa::summary_to_json(s).dump(2) << "\n";
    } else if (*ext) {
      auto n = ehrqa::cmd_extract(cfg, input, output, &std::cerr);
      std::cout << "wrote " << n << " records to " << output << "\n";
    } else if (*ev) {
      ehrqa::cmd_evaluate(cfg, input, gold, report, &std::cout, &std::cerr);
    } else if (*ins) {
      std::cout << ehrqa::cmd_inspect(input, qid);
    } else if (*sweep) {
      auto grid = ehrqa::delta_grid(lo, hi, points);
      if (with_inf) {
        grid.insert(grid.begin(), -std::numeric_limits<double>::infinity());
        grid.push_back(std::numeric_limits<double>::infinity());
      }
      ehrqa::cmd_sweep_threshold(cfg, input, grid, &std::cout);
    }
  } catch (const ehrqa::PartialResultError& e) {
    std::cerr << "error: " << e.what() << " (" << e.completed().size()
              << " records completed)\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
