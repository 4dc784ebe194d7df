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

#ifndef EHRQA_COMMANDS_H_
#define EHRQA_COMMANDS_H_

// The workflows behind the command-line tool, callable from tests.

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ehrqa/config.h"
#include "ehrqa/metrics.h"
#include "ehrqa/preprocess.h"
#include "ehrqa/reader.h"

namespace ehrqa {

// A fresh backend for the configured kind. Remote without an endpoint
// throws ConfigError.
std::unique_ptr<ReaderBackend> make_backend(const BackendConfig& cfg);

struct GenerationSummary {
  std::size_t documents = 0;
  std::size_t dependencies = 0;
  std::size_t total = 0;
  std::size_t ner = 0;
  std::size_t relation = 0;
  std::size_t answerable = 0;
  std::size_t natural_empty = 0;
  std::size_t constructed_impossible = 0;
  std::map<std::string, std::size_t> by_granularity;
  std::size_t train = 0;
  std::size_t dev = 0;
  std::size_t test = 0;
  std::size_t gold_records = 0;
  std::size_t diagnostics = 0;
};

nlohmann::json summary_to_json(const GenerationSummary& s);

// Writes train.json, dev.json, test.json (SQuAD 2.0), gold.jsonl (the
// extraction gold standard) and summary.json into `out_dir`.
GenerationSummary cmd_generate_dataset(const PipelineConfig& cfg,
                                       const std::string& input_path,
                                       const std::string& out_dir,
                                       std::ostream* log = nullptr);

// Extraction records as JSON Lines, one per non-empty answer.
std::size_t cmd_extract(const PipelineConfig& cfg, const std::string& input_path,
                        const std::string& output_path, std::ostream* log = nullptr);

// Scores predictions against gold. Writes the JSON report to `report_path`
// when non-empty and the table to `table`.
EvalReport cmd_evaluate(const PipelineConfig& cfg, const std::string& predictions_path,
                        const std::string& gold_path, const std::string& report_path,
                        std::ostream* table = nullptr, std::ostream* log = nullptr);

// Renders one example: answers as [[...]], plausible answers as {{...}}.
// Throws NotFoundError for an unknown qid.
std::string render_example(const QAExample& ex);
std::string cmd_inspect(const std::string& dataset_path, const std::string& qid);

// Reader-level items: each example is read once by `backend` and decoded
// under `verifier`. Oracle backends get the examples as gold.
std::vector<ReaderOutput> read_examples(const std::vector<QAExample>& examples,
                                        ReaderBackend& backend);
std::vector<EvalItem> reader_items(const std::vector<QAExample>& examples,
                                   const std::vector<ReaderOutput>& outputs,
                                   const VerifierConfig& verifier);

struct SweepPoint {
  double delta = 0;
  std::size_t answerable = 0;  // inputs judged answerable
  std::optional<double> accuracy;
};

// Answerability accuracy across a delta grid. Outputs are read once and
// re-thresholded per point.
std::vector<SweepPoint> sweep_threshold(const std::vector<QAExample>& examples,
                                        const std::vector<ReaderOutput>& outputs,
                                        const VerifierConfig& verifier,
                                        const std::vector<double>& deltas);
std::vector<SweepPoint> cmd_sweep_threshold(const PipelineConfig& cfg,
                                            const std::string& dev_path,
                                            const std::vector<double>& deltas,
                                            std::ostream* table = nullptr);

// Evenly spaced grid from lo to hi inclusive.
std::vector<double> delta_grid(double lo, double hi, std::size_t points);

}  // namespace ehrqa

#endif  // EHRQA_COMMANDS_H_
