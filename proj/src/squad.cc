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

#include "ehrqa/squad.h"

#include <fstream>

#include "ehrqa/errors.h"

namespace ehrqa {
namespace {

nlohmann::json answers_json(const std::vector<AnswerText>& answers) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& a : answers) {
    out.push_back({{"text", a.text}, {"answer_start", a.answer_start}});
  }
  return out;
}

std::vector<AnswerText> answers_from(const nlohmann::json& arr) {
  std::vector<AnswerText> out;
  for (const auto& a : arr) {
    out.push_back({a.at("text").get<std::string>(),
                   a.at("answer_start").get<std::size_t>()});
  }
  return out;
}

template <typename T>
T value_or(const nlohmann::json& obj, const char* key, T fallback) {
  return obj.contains(key) ? obj.at(key).get<T>() : fallback;
}

}  // namespace

nlohmann::json to_squad(const std::vector<QAExample>& examples) {
  nlohmann::json data = nlohmann::json::array();
  const QAExample* prev = nullptr;
  for (const QAExample& ex : examples) {
    if (prev == nullptr || prev->doc_id != ex.doc_id) {
      data.push_back({{"title", ex.doc_id}, {"paragraphs", nlohmann::json::array()}});
      prev = nullptr;
    }
    auto& paragraphs = data.back()["paragraphs"];
    if (prev == nullptr || prev->context != ex.context ||
        prev->context_span != ex.context_span) {
      paragraphs.push_back({{"context", ex.context},
                            {"context_start", ex.context_span.start},
                            {"context_end", ex.context_span.end},
                            {"qas", nlohmann::json::array()}});
    }
    nlohmann::json qa = {
        {"id", ex.qid},
        {"question", ex.question},
        {"answers", answers_json(ex.answers)},
        {"is_impossible", ex.is_impossible},
        {"granularity", to_string(ex.granularity)},
        {"template_id", ex.template_id},
        {"direction", to_string(ex.direction)},
        {"source", ex.source},
        {"filled", ex.filled},
        {"answer_entity_type", ex.answer_entity_type},
        {"kind", to_string(ex.kind)},
    };
    if (ex.is_impossible) qa["plausible_answers"] = answers_json(ex.plausible_answers);
    paragraphs.back()["qas"].push_back(std::move(qa));
    prev = &ex;
  }
  return {{"version", "v2.0"}, {"data", std::move(data)}};
}

std::vector<QAExample> from_squad(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("data")) {
    throw ValidationError("not a SQuAD document: missing 'data'");
  }
  std::vector<QAExample> out;
  for (const auto& entry : doc.at("data")) {
    const std::string title = entry.at("title").get<std::string>();
    for (const auto& para : entry.at("paragraphs")) {
      const std::string context = para.at("context").get<std::string>();
      const Span span{value_or<std::size_t>(para, "context_start", 0),
                      value_or<std::size_t>(para, "context_end",
                                            utf8::length(context))};
      for (const auto& qa : para.at("qas")) {
        QAExample ex;
        ex.qid = qa.at("id").get<std::string>();
        ex.doc_id = title;
        ex.question = qa.at("question").get<std::string>();
        ex.context = context;
        ex.context_span = span;
        ex.answers = answers_from(qa.at("answers"));
        ex.is_impossible = value_or<bool>(qa, "is_impossible", ex.answers.empty());
        if (qa.contains("plausible_answers")) {
          ex.plausible_answers = answers_from(qa.at("plausible_answers"));
        }
        ex.granularity = parse_granularity(
            value_or<std::string>(qa, "granularity", "paragraph"));
        ex.template_id = value_or<std::string>(qa, "template_id", "");
        ex.direction =
            parse_direction(value_or<std::string>(qa, "direction", "query-right"));
        ex.source = value_or<std::string>(qa, "source", "");
        ex.filled = value_or<std::string>(qa, "filled", "");
        ex.answer_entity_type = value_or<std::string>(qa, "answer_entity_type", "");
        ex.kind = parse_example_kind(value_or<std::string>(
            qa, "kind", ex.is_impossible ? "constructed" : "answerable"));
        out.push_back(std::move(ex));
      }
    }
  }
  return out;
}

void emit_squad(const std::vector<QAExample>& examples, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << to_squad(examples).dump(1) << '\n';
  if (!out) throw Error("write to '" + path + "' failed");
}

std::vector<QAExample> read_squad(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("'" + path + "': " + e.what());
  }
  return from_squad(doc);
}

}  // namespace ehrqa
