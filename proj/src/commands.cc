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

#include "ehrqa/commands.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include "ehrqa/annotation.h"
#include "ehrqa/errors.h"
#include "ehrqa/oracle.h"
#include "ehrqa/postprocess.h"
#include "ehrqa/remote.h"
#include "ehrqa/squad.h"
#include "ehrqa/text.h"
#include "ehrqa/verification.h"

namespace ehrqa {
namespace {

void log_diagnostics(const Diagnostics& diags, std::ostream* log) {
  if (log == nullptr) return;
  for (const auto& d : diags) *log << "warning: " << d.code << ": " << d.message << "\n";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open '" + path + "'");
  return in;
}

std::vector<ExtractionRecord> read_records_file(const std::string& path) {
  auto in = open_in(path);
  return read_records(in);
}

}  // namespace

std::unique_ptr<ReaderBackend> make_backend(const BackendConfig& cfg) {
  switch (cfg.kind) {
    case BackendKind::kOracle:
      return std::make_unique<OracleBackend>();
    case BackendKind::kNoisyOracle:
      return std::make_unique<OracleBackend>(cfg.noise, cfg.seed);
    case BackendKind::kRemote:
      if (cfg.endpoint.empty()) {
        throw ConfigError("remote backend selected but no endpoint configured");
      }
      return std::make_unique<RemoteBackend>(parse_endpoint(cfg.endpoint),
                                             std::chrono::milliseconds(cfg.timeout_ms),
                                             cfg.max_attempts);
  }
  throw InternalError("unknown backend kind");
}

nlohmann::json summary_to_json(const GenerationSummary& s) {
  return {
      {"documents", s.documents},
      {"dependencies", s.dependencies},
      {"total", s.total},
      {"by_task", {{"ner", s.ner}, {"relation", s.relation}}},
      {"by_kind",
       {{"answerable", s.answerable},
        {"natural-empty", s.natural_empty},
        {"constructed", s.constructed_impossible}}},
      {"impossible", s.natural_empty + s.constructed_impossible},
      {"by_granularity", s.by_granularity},
      {"split", {{"train", s.train}, {"dev", s.dev}, {"test", s.test}}},
      {"gold_records", s.gold_records},
      {"diagnostics", s.diagnostics},
  };
}

GenerationSummary cmd_generate_dataset(const PipelineConfig& cfg,
                                       const std::string& input_path,
                                       const std::string& out_dir, std::ostream* log) {
  check_config(cfg);
  auto docs = read_annotations_file(input_path, &cfg.types, &cfg.text().sentence_delimiters);

  Diagnostics diags;
  auto examples = assemble_dataset(docs, cfg.types, cfg.templates, cfg.text(), &diags);
  auto split = split_dataset(examples, cfg.ratios, cfg.split_seed);

  std::vector<ExtractionRecord> gold;
  for (const auto& doc : docs) {
    auto recs = build_gold_records(doc, cfg.templates, cfg.extraction, &diags);
    gold.insert(gold.end(), std::make_move_iterator(recs.begin()),
                std::make_move_iterator(recs.end()));
  }

  GenerationSummary s;
  s.documents = docs.size();
  for (const auto& d : docs) s.dependencies += d.dependencies.size();
  s.total = examples.size();
  for (const auto& ex : examples) {
    (ex.direction == Direction::kNer ? s.ner : s.relation)++;
    switch (ex.kind) {
      case ExampleKind::kAnswerable: ++s.answerable; break;
      case ExampleKind::kNaturalEmpty: ++s.natural_empty; break;
      case ExampleKind::kConstructed: ++s.constructed_impossible; break;
    }
    ++s.by_granularity[to_string(ex.granularity)];
  }
  s.train = split.train.size();
  s.dev = split.dev.size();
  s.test = split.test.size();
  s.gold_records = gold.size();
  s.diagnostics = diags.size();

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  emit_squad(split.train, (dir / "train.json").string());
  emit_squad(split.dev, (dir / "dev.json").string());
  emit_squad(split.test, (dir / "test.json").string());
  {
    auto out = open_out((dir / "gold.jsonl").string());
    write_records(out, gold);
  }
  {
    auto out = open_out((dir / "summary.json").string());
    out << summary_to_json(s).dump(2) << "\n";
  }
  log_diagnostics(diags, log);
  return s;
}

std::size_t cmd_extract(const PipelineConfig& cfg, const std::string& input_path,
                        const std::string& output_path, std::ostream* log) {
  check_config(cfg);
  // Fail on a bad backend before touching the input.
  make_backend(cfg.backend);
  const bool oracle = cfg.backend.kind != BackendKind::kRemote;
  auto docs = read_annotations_file(input_path, oracle ? &cfg.types : nullptr,
                                    &cfg.text().sentence_delimiters);

  Diagnostics diags;
  auto records = extract_corpus(
      docs, cfg.templates, [&cfg] { return make_backend(cfg.backend); }, cfg.extraction,
      oracle, cfg.workers, &diags);
  auto out = open_out(output_path);
  write_records(out, records);
  log_diagnostics(diags, log);
  return records.size();
}

EvalReport cmd_evaluate(const PipelineConfig& cfg, const std::string& predictions_path,
                        const std::string& gold_path, const std::string& report_path,
                        std::ostream* table, std::ostream* log) {
  auto predictions = read_records_file(predictions_path);
  auto gold = read_records_file(gold_path);
  Diagnostics diags;
  auto items = align_records(predictions, gold, &diags);
  auto report = evaluate(items, cfg.extraction.separator);
  if (!report_path.empty()) {
    auto out = open_out(report_path);
    out << report_to_json(report).dump(2) << "\n";
  }
  if (table != nullptr) *table << format_report(report);
  log_diagnostics(diags, log);
  return report;
}

std::string render_example(const QAExample& ex) {
  const std::u32string ctx = utf8::decode(ex.context);
  // Markers inserted before each character offset; closers go first.
  std::vector<std::string> before(ctx.size() + 1);
  auto mark = [&](const AnswerText& a, const char* l, const char* r) {
    const std::size_t len = utf8::length(a.text);
    const std::size_t start = std::min(a.answer_start, ctx.size());
    before[start] += l;
    before[std::min(start + len, ctx.size())].insert(0, r);
  };
  for (const auto& a : ex.answers) mark(a, "[[", "]]");
  for (const auto& a : ex.plausible_answers) mark(a, "{{", "}}");

  std::string body;
  for (std::size_t i = 0; i <= ctx.size(); ++i) {
    body += before[i];
    if (i < ctx.size()) body += utf8::encode(std::u32string(1, ctx[i]));
  }

  std::ostringstream os;
  os << "qid:         " << ex.qid << "\n"
     << "doc:         " << ex.doc_id << " " << to_string(ex.context_span) << "\n"
     << "template:    " << ex.template_id << " (" << to_string(ex.direction) << ", "
     << ex.source << ")\n"
     << "granularity: " << to_string(ex.granularity) << "\n"
     << "kind:        " << to_string(ex.kind)
     << (ex.is_impossible ? " (impossible)" : "") << "\n"
     << "question:    " << ex.question << "\n"
     << "context:     " << body << "\n";
  return os.str();
}

std::string cmd_inspect(const std::string& dataset_path, const std::string& qid) {
  for (const auto& ex : read_squad(dataset_path)) {
    if (ex.qid == qid) return render_example(ex);
  }
  throw NotFoundError("no example with qid '" + qid + "' in " + dataset_path);
}

std::vector<ReaderOutput> read_examples(const std::vector<QAExample>& examples,
                                        ReaderBackend& backend) {
  std::vector<ReaderInput> batch;
  batch.reserve(examples.size());
  for (const auto& ex : examples) {
    if (backend.needs_gold()) backend.add_gold(ex);
    batch.push_back({ex.qid, ex.question, ex.context});
  }
  return backend.read(batch);
}

std::vector<EvalItem> reader_items(const std::vector<QAExample>& examples,
                                   const std::vector<ReaderOutput>& outputs,
                                   const VerifierConfig& verifier) {
  if (examples.size() != outputs.size()) {
    throw InternalError("reader returned " + std::to_string(outputs.size()) +
                        " outputs for " + std::to_string(examples.size()) + " inputs");
  }
  std::vector<EvalItem> items;
  items.reserve(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    EvalItem item;
    item.qid = ex.qid;
    item.task = ex.direction == Direction::kNer ? Task::kNer : Task::kRelation;
    item.category = ex.source;
    item.gold.question = item.predicted.question = ex.question;
    item.gold.doc_id = item.predicted.doc_id = ex.doc_id;

    const std::size_t base = ex.context_span.start;
    if (!ex.is_impossible && !ex.answers.empty()) {
      const auto& a = ex.answers.front();
      Span s{base + a.answer_start, base + a.answer_start + utf8::length(a.text)};
      item.gold.answerable = true;
      item.gold.text = a.text;
      item.gold.parts.push_back({0, s, a.text});
    }
    if (auto span = decode_span(outputs[i], verifier)) {
      std::string text = utf8::slice(ex.context, *span);
      item.predicted.answerable = true;
      item.predicted.text = text;
      item.predicted.parts.push_back({0, span->shifted(static_cast<std::ptrdiff_t>(base)), std::move(text)});
    }
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<SweepPoint> sweep_threshold(const std::vector<QAExample>& examples,
                                        const std::vector<ReaderOutput>& outputs,
                                        const VerifierConfig& verifier,
                                        const std::vector<double>& deltas) {
  if (examples.size() != outputs.size()) {
    throw InternalError("example and output counts differ");
  }
  std::vector<VerificationScores> scores;
  scores.reserve(outputs.size());
  for (const auto& out : outputs) scores.push_back(compute_scores(out, verifier));

  std::vector<SweepPoint> points;
  for (double d : deltas) {
    if (std::isnan(d)) throw ConfigError("delta grid contains NaN");
    VerifierConfig cfg = verifier;
    cfg.delta = d;
    SweepPoint p;
    p.delta = d;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const bool ans = is_answerable(scores[i].score_diff, scores[i].mixture, cfg);
      p.answerable += ans;
      correct += ans == !examples[i].is_impossible;
    }
    if (!scores.empty()) p.accuracy = static_cast<double>(correct) / scores.size();
    points.push_back(p);
  }
  return points;
}

std::vector<SweepPoint> cmd_sweep_threshold(const PipelineConfig& cfg,
                                            const std::string& dev_path,
                                            const std::vector<double>& deltas,
                                            std::ostream* table) {
  check_config(cfg);
  auto examples = read_squad(dev_path);
  auto backend = make_backend(cfg.backend);
  auto outputs = read_examples(examples, *backend);
  auto points = sweep_threshold(examples, outputs, cfg.extraction.verifier, deltas);
  if (table != nullptr) {
    *table << std::left << std::setw(12) << "delta" << std::setw(12) << "answerable"
           << "accuracy\n";
    for (const auto& p : points) {
      std::ostringstream acc;
      if (p.accuracy) {
        acc << std::fixed << std::setprecision(4) << *p.accuracy;
      } else {
        acc << "n/a";
      }
      *table << std::left << std::setw(12) << p.delta << std::setw(12) << p.answerable
             << acc.str() << "\n";
    }
  }
  return points;
}

std::vector<double> delta_grid(double lo, double hi, std::size_t points) {
  if (points == 0) return {};
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
    throw ConfigError("delta grid bounds must be finite with lo <= hi");
  }
  if (points == 1) return {lo};
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  grid.back() = hi;
  return grid;
}

}  // namespace ehrqa
