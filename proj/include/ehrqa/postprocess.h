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

#ifndef EHRQA_POSTPROCESS_H_
#define EHRQA_POSTPROCESS_H_

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "ehrqa/annotation.h"
#include "ehrqa/errors.h"
#include "ehrqa/preprocess.h"
#include "ehrqa/reader.h"
#include "ehrqa/templates.h"
#include "ehrqa/verification.h"

namespace ehrqa {

struct AnswerPart {
  std::size_t sentence_index = 0;
  Span span;  // document coordinates
  std::string text;

  friend bool operator==(const AnswerPart&, const AnswerPart&) = default;
};

// Final, possibly discontinuous, answer to one question over one document.
struct FinalAnswer {
  std::string question;
  std::string doc_id;
  bool answerable = false;
  std::string text;  // separator-joined parts; empty iff unanswerable
  std::vector<AnswerPart> parts;

  friend bool operator==(const FinalAnswer&, const FinalAnswer&) = default;
};

// What the reader returned for one sentence.
struct SentenceAnswer {
  std::size_t sentence_index = 0;
  std::size_t sentence_start = 0;  // document offset of the sentence
  std::optional<Span> span;        // sentence-local
  std::string text;
};

// Joins non-empty sentence answers in sentence order with `separator`.
FinalAnswer merge_answers(std::string question, std::string doc_id,
                          std::vector<SentenceAnswer> per_sentence,
                          const std::string& separator);

enum class YesNo { kYes, kNo, kUnanswerable };

std::string to_string(YesNo v);

// "no" when any lexicon entry occurs in the answer text (raw substring),
// "yes" otherwise. Throws ConfigError on an empty lexicon.
YesNo to_yes_no(const FinalAnswer& ans, const std::vector<std::string>& negation_lexicon);

enum class Task { kNer, kRelation };

std::string to_string(Task t);
Task parse_task(std::string_view s);

struct ExtractionOptions {
  PreprocessOptions text;  // delimiters, bridge characters, splitting switch
  std::string separator = "，";
  VerifierConfig verifier;
  // doc_kind -> relation classes / NER types to query. "*" as a key is the
  // fallback kind and "*" as a value selects every template. An empty map
  // selects everything for every kind.
  std::map<std::string, std::vector<std::string>> doc_kind_templates;
  // Words fed into templates whose fill type is not produced by NER.
  std::map<std::string, std::vector<std::string>> fill_lexicon;

  friend bool operator==(const ExtractionOptions&, const ExtractionOptions&) = default;
};

// One question planned against a document.
struct Query {
  std::string qid;
  std::string question;
  Task task = Task::kRelation;
  std::string category;  // entity type (NER) or relation class
  std::string template_id;
  Direction direction = Direction::kNer;
  std::optional<Span> fill_span;  // stage-1 entity the question was built from
  std::string fill_text;
};

struct ExtractionRecord {
  std::string qid;
  std::string doc_id;
  std::string key;  // the instantiated question
  Task task = Task::kRelation;
  std::string category;
  std::optional<Span> fill_span;
  FinalAnswer value;

  friend bool operator==(const ExtractionRecord&, const ExtractionRecord&) = default;
};

// Reader failed mid-document; carries what was finished before it.
class PartialResultError : public Error {
 public:
  PartialResultError(std::vector<ExtractionRecord> completed, std::string failing_qid,
                     const std::string& what)
      : Error("extraction stopped at '" + failing_qid + "': " + what),
        completed_(std::move(completed)),
        failing_qid_(std::move(failing_qid)) {}
  const std::vector<ExtractionRecord>& completed() const { return completed_; }
  const std::string& failing_qid() const { return failing_qid_; }

 private:
  std::vector<ExtractionRecord> completed_;
  std::string failing_qid_;
};

// Templates applicable to a document kind under `opts`. Reports a
// diagnostic and returns nothing when the kind has no entry.
std::vector<const QuestionTemplate*> select_templates(const TemplateRegistry& templates,
                                                      const std::string& doc_kind,
                                                      const ExtractionOptions& opts,
                                                      Diagnostics* diags = nullptr);

// Gold entity spans (document coordinates, unmerged) answering `q`.
std::vector<Span> gold_entity_spans(const AnnotatedDocument& doc, const Query& q);

// Two-stage extraction: NER questions first, then relation templates filled
// with the extracted entities (and lexicon words). Every question is read
// sentence by sentence and merged; empty answers are dropped. Oracle
// backends need `annotations` to derive per-sentence gold.
std::vector<ExtractionRecord> extract_document(const std::string& doc_id,
                                               const std::string& doc_text,
                                               const std::string& doc_kind,
                                               const TemplateRegistry& templates,
                                               ReaderBackend& backend,
                                               const ExtractionOptions& opts,
                                               const AnnotatedDocument* annotations = nullptr,
                                               Diagnostics* diags = nullptr);

// Runs extract_document over a corpus. `make_backend` is called once per
// worker; output order follows the input order.
std::vector<ExtractionRecord> extract_corpus(
    const std::vector<AnnotatedDocument>& docs, const TemplateRegistry& templates,
    const std::function<std::unique_ptr<ReaderBackend>()>& make_backend,
    const ExtractionOptions& opts, bool use_annotations, int workers = 1,
    Diagnostics* diags = nullptr);

// Gold standard for the questions an ideal reader would trigger, built from
// annotations alone. Unanswerable questions are kept.
std::vector<ExtractionRecord> build_gold_records(const AnnotatedDocument& doc,
                                                 const TemplateRegistry& templates,
                                                 const ExtractionOptions& opts,
                                                 Diagnostics* diags = nullptr);

nlohmann::json record_to_json(const ExtractionRecord& r);
ExtractionRecord record_from_json(const nlohmann::json& j, std::size_t line = 0);
void write_records(std::ostream& out, const std::vector<ExtractionRecord>& records);
std::vector<ExtractionRecord> read_records(std::istream& in);

}  // namespace ehrqa

#endif  // EHRQA_POSTPROCESS_H_
