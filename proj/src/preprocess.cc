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

#include "ehrqa/preprocess.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "ehrqa/hash.h"

namespace ehrqa {
namespace {

QAExample from_draft(const QuestionDraft& d) {
  QAExample ex;
  ex.doc_id = d.doc_id;
  ex.question = d.question;
  ex.template_id = d.template_id;
  ex.direction = d.direction;
  ex.source = d.source;
  ex.filled = d.filled_entity ? *d.filled_entity : d.source;
  ex.answer_entity_type = d.answer_entity_type;
  return ex;
}

void set_context(QAExample& ex, std::u32string_view doc_chars, Span span,
                 Granularity g) {
  ex.granularity = g;
  ex.context_span = span;
  ex.context = utf8::encode(doc_chars.substr(span.start, span.length()));
}

// `answer` is in document coordinates and must lie inside the context span.
void set_answer(QAExample& ex, std::u32string_view doc_chars, Span answer) {
  ex.answers = {{utf8::encode(doc_chars.substr(answer.start, answer.length())),
                 answer.start - ex.context_span.start}};
  ex.is_impossible = false;
  ex.kind = ExampleKind::kAnswerable;
}

bool keep_natural_empty(const PreprocessOptions& opts, const QAExample& ex) {
  if (!opts.include_natural_empties) return false;
  if (opts.natural_empty_fraction >= 1.0) return true;
  const std::uint64_t h =
      stable_hash({std::to_string(opts.seed), ex.doc_id, ex.question,
                   to_string(ex.context_span)});
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  return u < opts.natural_empty_fraction;
}

// Cuts a sentence between consecutive answer groups, right after the last
// clause delimiter of each gap. Groups with no delimiter between them stay
// in one segment.
std::vector<Span> clause_segments(std::u32string_view doc_chars,
                                  const Span& sentence,
                                  const std::vector<Span>& groups,
                                  const CharSet& clause_delimiters) {
  std::vector<std::size_t> cuts;
  for (std::size_t i = 0; i + 1 < groups.size(); ++i) {
    for (std::size_t p = groups[i + 1].start; p > groups[i].end; --p) {
      if (clause_delimiters.count(doc_chars[p - 1]) > 0) {
        cuts.push_back(p);
        break;
      }
    }
  }
  std::vector<Span> segments;
  std::size_t begin = sentence.start;
  for (std::size_t c : cuts) {
    segments.push_back({begin, c});
    begin = c;
  }
  segments.push_back({begin, sentence.end});
  return segments;
}

}  // namespace

std::string to_string(Granularity g) {
  switch (g) {
    case Granularity::kParagraph:
      return "paragraph";
    case Granularity::kSentence:
      return "sentence";
    case Granularity::kClause:
      return "clause";
  }
  return "?";
}

Granularity parse_granularity(std::string_view s) {
  if (s == "paragraph") return Granularity::kParagraph;
  if (s == "sentence") return Granularity::kSentence;
  if (s == "clause") return Granularity::kClause;
  throw ValidationError("unknown granularity '" + std::string(s) + "'");
}

std::string to_string(ExampleKind k) {
  switch (k) {
    case ExampleKind::kAnswerable:
      return "answerable";
    case ExampleKind::kNaturalEmpty:
      return "natural-empty";
    case ExampleKind::kConstructed:
      return "constructed";
  }
  return "?";
}

ExampleKind parse_example_kind(std::string_view s) {
  if (s == "answerable") return ExampleKind::kAnswerable;
  if (s == "natural-empty") return ExampleKind::kNaturalEmpty;
  if (s == "constructed") return ExampleKind::kConstructed;
  throw ValidationError("unknown example kind '" + std::string(s) + "'");
}

void validate_example(const QAExample& ex) {
  const std::string where = "example '" + ex.qid + "'";
  if (ex.is_impossible != ex.answers.empty()) {
    throw ValidationError(where + ": is_impossible disagrees with answers");
  }
  if (ex.answers.size() > 1) {
    throw ValidationError(where + ": more than one answer");
  }
  if (!ex.is_impossible && !ex.plausible_answers.empty()) {
    throw ValidationError(where + ": plausible answers on answerable example");
  }
  const std::u32string ctx = utf8::decode(ex.context);
  auto check = [&](const AnswerText& a, const char* what) {
    const std::size_t n = utf8::length(a.text);
    if (n == 0 || a.answer_start + n > ctx.size() ||
        utf8::encode(std::u32string_view(ctx).substr(a.answer_start, n)) !=
            a.text) {
      throw ValidationError(where + ": " + what + " '" + a.text +
                            "' does not match context at " +
                            std::to_string(a.answer_start));
    }
  };
  for (const auto& a : ex.answers) check(a, "answer");
  for (const auto& a : ex.plausible_answers) check(a, "plausible answer");
}

std::string make_qid(const QAExample& ex) {
  return to_hex(stable_hash({ex.doc_id, ex.template_id, ex.filled,
                             to_string(ex.direction), to_string(ex.granularity),
                             to_string(ex.context_span), to_string(ex.kind)}));
}

CharSet effective_bridge(const PreprocessOptions& opts) {
  CharSet out;
  for (char32_t c : opts.bridge_chars) {
    if (opts.sentence_delimiters.count(c) == 0) out.insert(c);
  }
  return out;
}

std::vector<QAExample> resolve_multispan(const QuestionDraft& draft,
                                         const AnnotatedDocument& doc,
                                         const PreprocessOptions& opts,
                                         Diagnostics* diags) {
  const std::u32string chars = utf8::decode(doc.text);
  const std::vector<Span> merged =
      merge_adjacent_spans(draft.answer_spans, chars, effective_bridge(opts));
  std::vector<QAExample> out;
  if (merged.empty()) return out;

  if (merged.size() == 1 || !opts.enable_splitting) {
    if (merged.size() > 1) {
      report(diags, "splitting-disabled",
             "'" + draft.question + "' in '" + doc.doc_id + "' has " +
                 std::to_string(merged.size()) +
                 " answer spans; kept the first");
    }
    QAExample ex = from_draft(draft);
    set_context(ex, chars, {0, chars.size()}, Granularity::kParagraph);
    set_answer(ex, chars, merged.front());
    ex.qid = make_qid(ex);
    out.push_back(std::move(ex));
    return out;
  }

  for (const Sentence& s : split_sentences(doc.text, opts.sentence_delimiters)) {
    std::vector<Span> inside;
    for (const Span& m : merged) {
      if (project_span(m, s)) inside.push_back(m);
    }
    if (inside.empty()) {
      QAExample ex = from_draft(draft);
      set_context(ex, chars, s.span, Granularity::kSentence);
      ex.is_impossible = true;
      ex.kind = ExampleKind::kNaturalEmpty;
      if (keep_natural_empty(opts, ex)) {
        ex.qid = make_qid(ex);
        out.push_back(std::move(ex));
      }
      continue;
    }
    if (inside.size() == 1) {
      QAExample ex = from_draft(draft);
      set_context(ex, chars, s.span, Granularity::kSentence);
      set_answer(ex, chars, inside.front());
      ex.qid = make_qid(ex);
      out.push_back(std::move(ex));
      continue;
    }
    for (const Span& seg :
         clause_segments(chars, s.span, inside, opts.clause_delimiters)) {
      std::vector<Span> in_seg;
      for (const Span& g : inside) {
        if (seg.contains(g)) in_seg.push_back(g);
      }
      if (in_seg.size() > 1) {
        report(diags, "multiple-spans-in-clause",
               "'" + draft.question + "' in '" + doc.doc_id + "' keeps " +
                   std::to_string(in_seg.size()) + " spans in clause " +
                   to_string(seg) + "; kept the first");
      }
      QAExample ex = from_draft(draft);
      set_context(ex, chars, seg, Granularity::kClause);
      set_answer(ex, chars, in_seg.front());
      ex.qid = make_qid(ex);
      out.push_back(std::move(ex));
    }
  }
  return out;
}

std::vector<QAExample> construct_impossible(const AnnotatedDocument& doc,
                                            const std::vector<QuestionDraft>& drafts,
                                            const PreprocessOptions& opts,
                                            Diagnostics* diags) {
  std::vector<QAExample> out;
  if (!opts.enable_plausible_answers || doc.dependencies.size() < 2) return out;

  const std::u32string chars = utf8::decode(doc.text);
  const std::vector<Sentence> sentences =
      split_sentences(doc.text, opts.sentence_delimiters);
  auto sentence_of = [&](const Span& span) -> const Sentence* {
    for (const auto& s : sentences) {
      if (project_span(span, s)) return &s;
    }
    return nullptr;
  };

  for (const QuestionDraft& a : drafts) {
    if (a.direction != Direction::kQueryRight || !a.filled_entity) continue;
    const Entity& left_a = doc.entity(*a.filled_entity);
    std::vector<std::string> a_texts;
    for (const auto& id : a.answer_entity_ids) a_texts.push_back(doc.entity(id).text);

    // sentence index -> plausible right entities
    std::map<std::size_t, std::vector<const Entity*>> targets;
    for (const Dependency& b : doc.dependencies) {
      if (relation_class_of(b, doc).name() != a.source) continue;
      const Entity& left_b = doc.entity(b.from);
      if (left_b.id == left_a.id || left_b.text == left_a.text) continue;
      const Entity& right_b = doc.entity(b.to);
      const Sentence* s = sentence_of(right_b.span);
      if (s == nullptr) continue;
      const bool leaks = std::any_of(a_texts.begin(), a_texts.end(),
                                     [&](const std::string& t) {
                                       return s->text.find(t) != std::string::npos;
                                     });
      if (leaks) continue;
      auto& list = targets[s->index];
      if (std::find(list.begin(), list.end(), &right_b) == list.end()) {
        list.push_back(&right_b);
      }
    }

    for (auto& [index, plausible] : targets) {
      const Sentence& s = sentences[index];
      std::sort(plausible.begin(), plausible.end(),
                [](const Entity* x, const Entity* y) {
                  return std::tie(x->span, x->id) < std::tie(y->span, y->id);
                });
      QAExample ex = from_draft(a);
      set_context(ex, chars, s.span, Granularity::kSentence);
      ex.is_impossible = true;
      ex.kind = ExampleKind::kConstructed;
      for (const Entity* e : plausible) {
        ex.plausible_answers.push_back({e->text, e->span.start - s.span.start});
      }
      ex.qid = make_qid(ex);
      out.push_back(std::move(ex));
    }
  }
  if (out.empty()) {
    report(diags, "no-impossible",
           "document '" + doc.doc_id + "' yields no impossible questions");
  }
  return out;
}

std::vector<QAExample> assemble_dataset(const std::vector<AnnotatedDocument>& docs,
                                        const TypeRegistry& types,
                                        const TemplateRegistry& templates,
                                        const PreprocessOptions& opts,
                                        Diagnostics* diags) {
  std::vector<QAExample> out;
  std::set<std::tuple<std::string, std::string, Span>> seen;
  std::unordered_map<std::string, std::size_t> qids;

  auto add = [&](QAExample ex) {
    if (!seen.insert({ex.doc_id, ex.question, ex.context_span}).second) return;
    auto [it, fresh] = qids.emplace(ex.qid, out.size());
    if (!fresh) {
      throw InternalError("qid collision on " + ex.qid + " in document '" +
                          ex.doc_id + "'");
    }
    out.push_back(std::move(ex));
  };

  for (const AnnotatedDocument& doc : docs) {
    for (const auto& d : generate_ner_questions(doc, types, templates, diags)) {
      for (auto& ex : resolve_multispan(d, doc, opts, diags)) add(std::move(ex));
    }
    const auto relation = generate_relation_questions(doc, templates, diags);
    for (const auto& d : relation) {
      for (auto& ex : resolve_multispan(d, doc, opts, diags)) add(std::move(ex));
    }
    for (auto& ex : construct_impossible(doc, relation, opts, diags)) {
      add(std::move(ex));
    }
  }
  return out;
}

void check_ratios(const SplitRatios& ratios) {
  double sum = 0;
  for (double r : ratios) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw ConfigError("split ratios must be finite and non-negative");
    }
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("split ratios sum to " + std::to_string(sum) +
                      ", expected 1");
  }
}

DatasetSplit split_dataset(const std::vector<QAExample>& examples,
                           const SplitRatios& ratios, std::uint64_t seed) {
  check_ratios(ratios);
  std::vector<std::string> doc_ids;
  std::unordered_set<std::string> known;
  for (const auto& ex : examples) {
    if (known.insert(ex.doc_id).second) doc_ids.push_back(ex.doc_id);
  }
  const std::string salt = std::to_string(seed);
  std::vector<std::pair<std::uint64_t, std::string>> order;
  for (const auto& id : doc_ids) order.emplace_back(stable_hash({salt, id}), id);
  std::sort(order.begin(), order.end());

  const auto n = static_cast<double>(order.size());
  const auto train_end = static_cast<std::size_t>(std::llround(ratios[0] * n));
  const auto dev_end = std::max(
      train_end, static_cast<std::size_t>(std::llround((ratios[0] + ratios[1]) * n)));
  std::unordered_map<std::string, int> bucket;
  for (std::size_t i = 0; i < order.size(); ++i) {
    bucket[order[i].second] = i < train_end ? 0 : (i < dev_end ? 1 : 2);
  }

  DatasetSplit split;
  split.seed = seed;
  split.ratios = ratios;
  for (const auto& ex : examples) {
    switch (bucket[ex.doc_id]) {
      case 0:
        split.train.push_back(ex);
        break;
      case 1:
        split.dev.push_back(ex);
        break;
      default:
        split.test.push_back(ex);
    }
  }
  return split;
}

}  // namespace ehrqa
