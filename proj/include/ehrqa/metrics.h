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

#ifndef EHRQA_METRICS_H_
#define EHRQA_METRICS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ehrqa/postprocess.h"

namespace ehrqa {

struct EvalItem {
  std::string qid;
  FinalAnswer predicted;
  FinalAnswer gold;
  Task task = Task::kRelation;
  std::string category;  // relation class or entity type, for breakdowns
};

struct Counts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  Counts& operator+=(const Counts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  // 2tp / (2tp + fp + fn); absent when the denominator is zero.
  std::optional<double> f1() const;

  friend bool operator==(const Counts&, const Counts&) = default;
};

// 1 iff both are unanswerable, or both are answerable with identical text
// (separators included).
int exact_match(const FinalAnswer& pred, const FinalAnswer& gold);

// Character counts for one item, separator characters removed. Parts are
// aligned in order; aligned parts with document spans match by position,
// text-only parts by character multiset. Surplus parts count wholly.
Counts token_counts_qa(const FinalAnswer& pred, const FinalAnswer& gold,
                       const std::string& separator);

struct F1Result {
  Counts counts;
  std::optional<double> f1;
};

// Micro F1 over items; absent for an empty item list.
std::optional<F1Result> token_f1_qa(const std::vector<EvalItem>& items,
                                    const std::string& separator);

struct TypedSpan {
  Span span;
  std::string type;
};

// Position-and-label counts. Throws ValidationError when two gold spans of
// the same type overlap or a span exceeds `doc_length`.
Counts token_counts_ner(const std::vector<TypedSpan>& pred,
                        const std::vector<TypedSpan>& gold, std::size_t doc_length);
F1Result token_f1_ner(const std::vector<TypedSpan>& pred,
                      const std::vector<TypedSpan>& gold, std::size_t doc_length);

// Absent for an empty item list.
std::optional<double> answerability_accuracy(const std::vector<EvalItem>& items);

struct EvalSlice {
  std::size_t items = 0;
  std::size_t exact = 0;
  std::size_t answerable_correct = 0;
  Counts counts;

  std::optional<double> em() const;
  std::optional<double> accuracy() const;
};

struct EvalReport {
  std::optional<double> em;
  std::optional<double> f1;      // relation items, token_f1_qa
  std::optional<double> ner_f1;  // NER items, position and label
  std::optional<double> answerability_accuracy;
  std::size_t items = 0;
  std::size_t exact = 0;
  std::size_t answerable_correct = 0;
  Counts qa_counts;
  Counts ner_counts;
  std::map<std::string, EvalSlice> breakdown;  // by category
};

EvalReport evaluate(const std::vector<EvalItem>& items, const std::string& separator);

// Pairs predictions with gold by qid. Gold qids without a prediction become
// unanswerable predictions (reported as a warning); predictions without gold
// are scored against an unanswerable gold.
std::vector<EvalItem> align_records(const std::vector<ExtractionRecord>& predictions,
                                    const std::vector<ExtractionRecord>& gold,
                                    Diagnostics* diags = nullptr);

nlohmann::json report_to_json(const EvalReport& report);
std::string format_report(const EvalReport& report);

}  // namespace ehrqa

#endif  // EHRQA_METRICS_H_
