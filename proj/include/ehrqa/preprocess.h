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

#ifndef EHRQA_PREPROCESS_H_
#define EHRQA_PREPROCESS_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ehrqa/annotation.h"
#include "ehrqa/errors.h"
#include "ehrqa/span.h"
#include "ehrqa/templates.h"

namespace ehrqa {

enum class Granularity { kParagraph, kSentence, kClause };

std::string to_string(Granularity g);
Granularity parse_granularity(std::string_view s);

// How an example came to be.
enum class ExampleKind {
  kAnswerable,
  kNaturalEmpty,  // answer-free sentence of a split draft
  kConstructed,   // impossible question with plausible answers
};

std::string to_string(ExampleKind k);
ExampleKind parse_example_kind(std::string_view s);

struct AnswerText {
  std::string text;
  std::size_t answer_start = 0;  // characters into the context

  friend bool operator==(const AnswerText&, const AnswerText&) = default;
};

struct QAExample {
  std::string qid;
  std::string doc_id;
  std::string question;
  std::string context;
  Granularity granularity = Granularity::kParagraph;
  Span context_span;  // where the context sits in the source document
  std::vector<AnswerText> answers;  // at most one
  bool is_impossible = false;
  std::vector<AnswerText> plausible_answers;

  // Provenance.
  std::string template_id;
  Direction direction = Direction::kQueryRight;
  std::string source;  // relation class or NER type
  std::string filled;  // filled entity id, or the type for NER drafts
  std::string answer_entity_type;
  ExampleKind kind = ExampleKind::kAnswerable;

  friend bool operator==(const QAExample&, const QAExample&) = default;
};

// Throws ValidationError when an example breaks a QAExample invariant.
void validate_example(const QAExample& ex);

// Content-addressed id over (doc, template, filled, direction, granularity,
// context span, kind).
std::string make_qid(const QAExample& ex);

struct PreprocessOptions {
  CharSet sentence_delimiters = utf8::to_charset("。；！？\n");
  CharSet bridge_chars = utf8::to_charset("，、；,; ");
  CharSet clause_delimiters = utf8::to_charset("，、");
  bool enable_splitting = true;
  bool enable_plausible_answers = true;
  bool include_natural_empties = false;
  // Share of natural empties kept when they are included.
  double natural_empty_fraction = 1.0;
  std::uint64_t seed = 13;

  friend bool operator==(const PreprocessOptions&,
                         const PreprocessOptions&) = default;
};

// Bridge characters used inside the pipeline: sentence delimiters never
// bridge, so a merged span always stays within one sentence.
CharSet effective_bridge(const PreprocessOptions& opts);

// Turns one draft into examples: merge adjacent answers, emit a paragraph
// example when one span remains, otherwise split into sentences (and into
// clauses when a sentence still holds several spans).
std::vector<QAExample> resolve_multispan(const QuestionDraft& draft,
                                         const AnnotatedDocument& doc,
                                         const PreprocessOptions& opts,
                                         Diagnostics* diags = nullptr);

// Impossible questions with plausible answers: the query-right question of
// one dependency asked against the sentence holding the answer of another
// same-class dependency with a different left entity.
std::vector<QAExample> construct_impossible(const AnnotatedDocument& doc,
                                            const std::vector<QuestionDraft>& drafts,
                                            const PreprocessOptions& opts,
                                            Diagnostics* diags = nullptr);

// NER and relation examples plus constructed impossible examples for every
// document, deduplicated on (doc, question, context span). Throws
// InternalError on a qid collision.
std::vector<QAExample> assemble_dataset(const std::vector<AnnotatedDocument>& docs,
                                        const TypeRegistry& types,
                                        const TemplateRegistry& templates,
                                        const PreprocessOptions& opts,
                                        Diagnostics* diags = nullptr);

using SplitRatios = std::array<double, 3>;

struct DatasetSplit {
  std::vector<QAExample> train;
  std::vector<QAExample> dev;
  std::vector<QAExample> test;
  std::uint64_t seed = 0;
  SplitRatios ratios{};
};

// Throws ConfigError unless the ratios are non-negative and sum to 1 within
// 1e-9.
void check_ratios(const SplitRatios& ratios);

// Assigns whole documents to splits: documents are ordered by a seeded hash
// of doc_id and cut at the cumulative ratios.
DatasetSplit split_dataset(const std::vector<QAExample>& examples,
                           const SplitRatios& ratios, std::uint64_t seed);

}  // namespace ehrqa

#endif  // EHRQA_PREPROCESS_H_
