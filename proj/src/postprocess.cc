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

#include "ehrqa/postprocess.h"

#include <cctype>

#include <algorithm>
#include <future>
#include <istream>
#include <ostream>
#include <tuple>

#include "ehrqa/hash.h"

namespace ehrqa {
namespace {

// A stage-1 entity that stage-2 templates are filled with.
struct Unit {
  std::string type;
  Span span;
  std::string text;
};

std::string query_qid(const std::string& doc_id, const std::string& question,
                      const std::optional<Span>& fill_span) {
  return to_hex(stable_hash(
      {doc_id, question, fill_span ? to_string(*fill_span) : std::string("-")}));
}

std::vector<Query> ner_queries(const std::string& doc_id,
                               const std::vector<const QuestionTemplate*>& selected) {
  std::vector<Query> out;
  std::set<std::string> types;
  for (const QuestionTemplate* t : selected) {
    if (t->direction != Direction::kNer) continue;
    if (!types.insert(t->relation_class).second) continue;
    Query q;
    q.question = t->pattern;
    q.task = Task::kNer;
    q.category = t->relation_class;
    q.template_id = t->template_id;
    q.direction = Direction::kNer;
    q.qid = query_qid(doc_id, q.question, std::nullopt);
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<Query> relation_queries(const std::string& doc_id,
                                    const std::vector<const QuestionTemplate*>& selected,
                                    const std::vector<Unit>& units,
                                    const ExtractionOptions& opts) {
  std::vector<Query> out;
  std::set<std::pair<std::string, std::optional<Span>>> seen;
  auto add = [&](const QuestionTemplate& t, const std::string& text,
                 std::optional<Span> span) {
    Query q;
    q.question = instantiate(t, text);
    if (!seen.insert({q.question, span}).second) return;
    q.task = Task::kRelation;
    q.category = t.relation_class;
    q.template_id = t.template_id;
    q.direction = t.direction;
    q.fill_span = span;
    q.fill_text = text;
    q.qid = query_qid(doc_id, q.question, span);
    out.push_back(std::move(q));
  };
  for (const QuestionTemplate* t : selected) {
    if (t->direction == Direction::kNer) continue;
    const std::string fill_type = fill_side_type(*t);
    for (const Unit& u : units) {
      if (u.type == fill_type) add(*t, u.text, u.span);
    }
    if (auto it = opts.fill_lexicon.find(fill_type); it != opts.fill_lexicon.end()) {
      for (const auto& word : it->second) {
        if (!word.empty()) add(*t, word, std::nullopt);
      }
    }
  }
  return out;
}

std::vector<Unit> units_of(const ExtractionRecord& r) {
  std::vector<Unit> out;
  for (const auto& p : r.value.parts) out.push_back({r.category, p.span, p.text});
  return out;
}

ExtractionRecord make_record(const std::string& doc_id, const Query& q,
                             FinalAnswer value) {
  ExtractionRecord r;
  r.qid = q.qid;
  r.doc_id = doc_id;
  r.key = q.question;
  r.task = q.task;
  r.category = q.category;
  r.fill_span = q.fill_span;
  r.value = std::move(value);
  return r;
}

void sort_records(std::vector<ExtractionRecord>& records) {
  auto position = [](const ExtractionRecord& r) {
    return r.value.parts.empty() ? std::optional<Span>() : r.value.parts.front().span;
  };
  std::stable_sort(records.begin(), records.end(),
                   [&](const ExtractionRecord& a, const ExtractionRecord& b) {
                     return std::make_tuple(a.key, a.fill_span, position(a)) <
                            std::make_tuple(b.key, b.fill_span, position(b));
                   });
}

std::string join(const std::vector<AnswerPart>& parts, const std::string& separator) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += separator;
    out += parts[i].text;
  }
  return out;
}

}  // namespace

FinalAnswer merge_answers(std::string question, std::string doc_id,
                          std::vector<SentenceAnswer> per_sentence,
                          const std::string& separator) {
  std::stable_sort(per_sentence.begin(), per_sentence.end(),
                   [](const SentenceAnswer& a, const SentenceAnswer& b) {
                     return a.sentence_index < b.sentence_index;
                   });
  FinalAnswer ans;
  ans.question = std::move(question);
  ans.doc_id = std::move(doc_id);
  for (const auto& s : per_sentence) {
    if (!s.span || s.text.empty()) continue;
    ans.parts.push_back({s.sentence_index,
                         s.span->shifted(static_cast<std::ptrdiff_t>(s.sentence_start)),
                         s.text});
  }
  ans.answerable = !ans.parts.empty();
  ans.text = join(ans.parts, separator);
  return ans;
}

std::string to_string(YesNo v) {
  switch (v) {
    case YesNo::kYes:
      return "yes";
    case YesNo::kNo:
      return "no";
    case YesNo::kUnanswerable:
      return "unanswerable";
  }
  return "?";
}

YesNo to_yes_no(const FinalAnswer& ans, const std::vector<std::string>& negation_lexicon) {
  if (negation_lexicon.empty()) throw ConfigError("negation lexicon is empty");
  if (!ans.answerable) return YesNo::kUnanswerable;
  // Latin words must stand alone ("no" is not a negation inside "nodule").
  auto latin = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; };
  for (const auto& word : negation_lexicon) {
    if (word.empty()) continue;
    for (auto pos = ans.text.find(word); pos != std::string::npos;
         pos = ans.text.find(word, pos + 1)) {
      const std::size_t end = pos + word.size();
      const bool left_ok = pos == 0 || !latin(word.front()) || !latin(ans.text[pos - 1]);
      const bool right_ok =
          end == ans.text.size() || !latin(word.back()) || !latin(ans.text[end]);
      if (left_ok && right_ok) return YesNo::kNo;
    }
  }
  return YesNo::kYes;
}

std::string to_string(Task t) { return t == Task::kNer ? "ner" : "relation"; }

Task parse_task(std::string_view s) {
  if (s == "ner") return Task::kNer;
  if (s == "relation") return Task::kRelation;
  throw ValidationError("unknown task '" + std::string(s) + "'");
}

std::vector<const QuestionTemplate*> select_templates(const TemplateRegistry& templates,
                                                      const std::string& doc_kind,
                                                      const ExtractionOptions& opts,
                                                      Diagnostics* diags) {
  std::vector<const QuestionTemplate*> out;
  const auto& map = opts.doc_kind_templates;
  const std::vector<std::string>* selectors = nullptr;
  if (!map.empty()) {
    auto it = map.find(doc_kind);
    if (it == map.end()) it = map.find("*");
    if (it == map.end()) {
      report(diags, "no-templates-for-kind",
             "no templates registered for document kind '" + doc_kind + "'");
      return out;
    }
    selectors = &it->second;
  }
  const bool all = selectors == nullptr ||
                   std::find(selectors->begin(), selectors->end(), "*") != selectors->end();
  for (const auto& t : templates.all()) {
    if (all || std::find(selectors->begin(), selectors->end(), t.relation_class) !=
                   selectors->end()) {
      out.push_back(&t);
    }
  }
  if (out.empty()) {
    report(diags, "no-templates-for-kind",
           "no templates selected for document kind '" + doc_kind + "'");
  }
  return out;
}

std::vector<Span> gold_entity_spans(const AnnotatedDocument& doc, const Query& q) {
  std::vector<Span> out;
  if (q.task == Task::kNer) {
    for (const auto& e : doc.entities) {
      if (e.type == q.category) out.push_back(e.span);
    }
    return out;
  }
  const RelationClass rc = parse_relation_class(q.category);
  const bool right = q.direction == Direction::kQueryRight;
  const std::string& fill_type = right ? rc.left_type : rc.right_type;
  auto is_filled = [&](const Entity& e) {
    if (e.type != fill_type) return false;
    return q.fill_span ? q.fill_span->contains(e.span) : e.text == q.fill_text;
  };
  std::set<std::string> taken;
  for (const auto& d : doc.dependencies) {
    const Entity* from = doc.find_entity(d.from);
    const Entity* to = doc.find_entity(d.to);
    if (from == nullptr || to == nullptr) continue;
    if (from->type != rc.left_type || to->type != rc.right_type) continue;
    const Entity& filled = right ? *from : *to;
    const Entity& answer = right ? *to : *from;
    if (is_filled(filled) && taken.insert(answer.id).second) out.push_back(answer.span);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ExtractionRecord> extract_document(const std::string& doc_id,
                                               const std::string& doc_text,
                                               const std::string& doc_kind,
                                               const TemplateRegistry& templates,
                                               ReaderBackend& backend,
                                               const ExtractionOptions& opts,
                                               const AnnotatedDocument* annotations,
                                               Diagnostics* diags) {
  if (backend.needs_gold() && annotations == nullptr) {
    throw ConfigError("oracle backends require annotated input");
  }
  const auto selected = select_templates(templates, doc_kind, opts, diags);
  std::vector<ExtractionRecord> records;
  if (selected.empty()) return records;

  const std::u32string chars = utf8::decode(doc_text);
  std::vector<Sentence> sentences;
  if (opts.text.enable_splitting) {
    sentences = split_sentences(doc_text, opts.text.sentence_delimiters);
  } else if (!chars.empty()) {
    sentences.push_back({0, {0, chars.size()}, doc_text});
  }
  const CharSet bridge = effective_bridge(opts.text);

  auto run = [&](const Query& q) -> FinalAnswer {
    std::vector<ReaderInput> inputs;
    for (const auto& s : sentences) {
      inputs.push_back({q.qid + "#" + std::to_string(s.index), q.question, s.text});
    }
    if (backend.needs_gold()) {
      const std::vector<Span> merged =
          merge_adjacent_spans(gold_entity_spans(*annotations, q), chars, bridge);
      for (std::size_t i = 0; i < sentences.size(); ++i) {
        const Sentence& s = sentences[i];
        QAExample gold;
        gold.qid = inputs[i].qid;
        gold.doc_id = doc_id;
        gold.question = q.question;
        gold.context = s.text;
        gold.context_span = s.span;
        gold.is_impossible = true;
        std::vector<Span> inside;
        for (const Span& m : merged) {
          if (auto local = project_span(m, s)) inside.push_back(*local);
        }
        if (!inside.empty()) {
          if (inside.size() > 1) {
            report(diags, "oracle-multiple-spans",
                   "'" + q.question + "' has " + std::to_string(inside.size()) +
                       " answer spans in one context of '" + doc_id +
                       "'; oracle reads the first");
          }
          const Span a = inside.front();
          gold.answers = {{utf8::encode(std::u32string_view(chars).substr(
                               a.start + s.span.start, a.length())),
                           a.start}};
          gold.is_impossible = false;
        }
        backend.add_gold(gold);
      }
    }
    std::vector<ReaderOutput> outputs;
    try {
      outputs = backend.read(inputs);
    } catch (const Error& e) {
      throw PartialResultError(records, q.qid, e.what());
    }
    if (outputs.size() != inputs.size()) {
      throw PartialResultError(records, q.qid, "backend returned " +
                                                   std::to_string(outputs.size()) +
                                                   " outputs for " +
                                                   std::to_string(inputs.size()) + " inputs");
    }
    std::vector<SentenceAnswer> answers;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      const Sentence& s = sentences[i];
      SentenceAnswer a;
      a.sentence_index = s.index;
      a.sentence_start = s.span.start;
      a.span = decode_span(outputs[i], opts.verifier, diags);
      if (a.span && a.span->end > s.span.length()) a.span.reset();
      if (a.span) {
        a.text = utf8::encode(std::u32string_view(chars).substr(
            a.span->start + s.span.start, a.span->length()));
      }
      answers.push_back(std::move(a));
    }
    return merge_answers(q.question, doc_id, std::move(answers), opts.separator);
  };

  std::vector<Unit> units;
  for (const Query& q : ner_queries(doc_id, selected)) {
    FinalAnswer ans = run(q);
    if (!ans.answerable) continue;
    records.push_back(make_record(doc_id, q, std::move(ans)));
    for (auto& u : units_of(records.back())) units.push_back(std::move(u));
  }
  for (const Query& q : relation_queries(doc_id, selected, units, opts)) {
    FinalAnswer ans = run(q);
    if (ans.answerable) records.push_back(make_record(doc_id, q, std::move(ans)));
  }
  sort_records(records);
  return records;
}

std::vector<ExtractionRecord> extract_corpus(
    const std::vector<AnnotatedDocument>& docs, const TemplateRegistry& templates,
    const std::function<std::unique_ptr<ReaderBackend>()>& make_backend,
    const ExtractionOptions& opts, bool use_annotations, int workers,
    Diagnostics* diags) {
  const std::size_t n_workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1,
                              std::max<std::size_t>(docs.size(), 1));
  std::vector<std::vector<ExtractionRecord>> per_doc(docs.size());
  std::vector<Diagnostics> per_worker(n_workers);

  auto work = [&](std::size_t w) {
    std::unique_ptr<ReaderBackend> backend = make_backend();
    for (std::size_t i = w; i < docs.size(); i += n_workers) {
      const AnnotatedDocument& d = docs[i];
      per_doc[i] = extract_document(d.doc_id, d.text, d.doc_kind, templates, *backend,
                                    opts, use_annotations ? &d : nullptr,
                                    &per_worker[w]);
    }
  };
  if (n_workers == 1) {
    work(0);
  } else {
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < n_workers; ++w) {
      jobs.push_back(std::async(std::launch::async, work, w));
    }
    for (auto& j : jobs) j.get();
  }

  std::vector<ExtractionRecord> out;
  for (auto& recs : per_doc) {
    for (auto& r : recs) out.push_back(std::move(r));
  }
  if (diags != nullptr) {
    for (auto& d : per_worker) diags->insert(diags->end(), d.begin(), d.end());
  }
  return out;
}

std::vector<ExtractionRecord> build_gold_records(const AnnotatedDocument& doc,
                                                 const TemplateRegistry& templates,
                                                 const ExtractionOptions& opts,
                                                 Diagnostics* diags) {
  std::vector<ExtractionRecord> records;
  const auto selected = select_templates(templates, doc.doc_kind, opts, diags);
  if (selected.empty()) return records;

  const std::u32string chars = utf8::decode(doc.text);
  const auto sentences = split_sentences(doc.text, opts.text.sentence_delimiters);
  const CharSet bridge = effective_bridge(opts.text);

  auto gold = [&](const Query& q) {
    FinalAnswer ans;
    ans.question = q.question;
    ans.doc_id = doc.doc_id;
    for (const Span& m : merge_adjacent_spans(gold_entity_spans(doc, q), chars, bridge)) {
      std::size_t index = 0;
      for (const auto& s : sentences) {
        if (s.span.contains(m)) index = s.index;
      }
      ans.parts.push_back(
          {index, m, utf8::encode(std::u32string_view(chars).substr(m.start, m.length()))});
    }
    ans.answerable = !ans.parts.empty();
    ans.text = join(ans.parts, opts.separator);
    return make_record(doc.doc_id, q, std::move(ans));
  };

  std::vector<Unit> units;
  for (const Query& q : ner_queries(doc.doc_id, selected)) {
    records.push_back(gold(q));
    for (auto& u : units_of(records.back())) units.push_back(std::move(u));
  }
  for (const Query& q : relation_queries(doc.doc_id, selected, units, opts)) {
    records.push_back(gold(q));
  }
  sort_records(records);
  return records;
}

nlohmann::json record_to_json(const ExtractionRecord& r) {
  nlohmann::json parts = nlohmann::json::array();
  for (const auto& p : r.value.parts) {
    parts.push_back({{"sentence_index", p.sentence_index},
                     {"start", p.span.start},
                     {"end", p.span.end},
                     {"text", p.text}});
  }
  nlohmann::json j = {{"qid", r.qid},
                      {"doc_id", r.doc_id},
                      {"key", r.key},
                      {"task", to_string(r.task)},
                      {"category", r.category},
                      {"answer", r.value.text},
                      {"answerable", r.value.answerable},
                      {"parts", std::move(parts)}};
  if (r.fill_span) j["fill"] = {r.fill_span->start, r.fill_span->end};
  return j;
}

ExtractionRecord record_from_json(const nlohmann::json& j, std::size_t line) {
  try {
    ExtractionRecord r;
    r.doc_id = j.at("doc_id").get<std::string>();
    r.key = j.at("key").get<std::string>();
    r.qid = j.contains("qid") ? j.at("qid").get<std::string>()
                              : query_qid(r.doc_id, r.key, std::nullopt);
    r.task = parse_task(j.value("task", std::string("relation")));
    r.category = j.value("category", std::string());
    if (j.contains("fill")) {
      r.fill_span = Span{j.at("fill").at(0).get<std::size_t>(),
                         j.at("fill").at(1).get<std::size_t>()};
    }
    r.value.question = r.key;
    r.value.doc_id = r.doc_id;
    r.value.text = j.value("answer", std::string());
    for (const auto& p : j.value("parts", nlohmann::json::array())) {
      r.value.parts.push_back({p.at("sentence_index").get<std::size_t>(),
                               {p.at("start").get<std::size_t>(),
                                p.at("end").get<std::size_t>()},
                               p.at("text").get<std::string>()});
    }
    r.value.answerable = j.value("answerable", !r.value.text.empty());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(line, "<record>", e.what());
  }
}

void write_records(std::ostream& out, const std::vector<ExtractionRecord>& records) {
  for (const auto& r : records) out << record_to_json(r).dump() << '\n';
}

std::vector<ExtractionRecord> read_records(std::istream& in) {
  std::vector<ExtractionRecord> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line, "<record>", e.what());
    }
    out.push_back(record_from_json(j, line));
  }
  return out;
}

}  // namespace ehrqa
