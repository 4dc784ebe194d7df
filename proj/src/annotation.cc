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

#include "ehrqa/annotation.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "ehrqa/errors.h"

namespace ehrqa {

RelationClass parse_relation_class(std::string_view name) {
  const auto dash = name.find('-');
  if (dash == std::string_view::npos || dash == 0 || dash + 1 == name.size()) {
    throw ConfigError("relation class '" + std::string(name) +
                      "' is not of the form left-right");
  }
  return {std::string(name.substr(0, dash)), std::string(name.substr(dash + 1))};
}

TypeRegistry::TypeRegistry(std::set<std::string> entity_types,
                           std::set<std::string> ner_queryable_types,
                           std::set<RelationClass> relation_classes)
    : entity_types_(std::move(entity_types)),
      ner_queryable_(std::move(ner_queryable_types)),
      relation_classes_(std::move(relation_classes)) {
  for (const auto& t : ner_queryable_) {
    if (!has_type(t)) {
      throw ConfigError("queryable type '" + t + "' is not an entity type");
    }
  }
  for (const auto& rc : relation_classes_) {
    if (!has_type(rc.left_type) || !has_type(rc.right_type)) {
      throw ConfigError("relation class '" + rc.name() +
                        "' uses an unregistered type");
    }
  }
}

bool TypeRegistry::has_relation_class(const std::string& name) const {
  for (const auto& rc : relation_classes_) {
    if (rc.name() == name) return true;
  }
  return false;
}

const Entity* AnnotatedDocument::find_entity(std::string_view id) const {
  for (const auto& e : entities) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

const Entity& AnnotatedDocument::entity(std::string_view id) const {
  const Entity* e = find_entity(id);
  if (e == nullptr) {
    throw DanglingReferenceError("document '" + doc_id +
                                 "' has no entity with id '" +
                                 std::string(id) + "'");
  }
  return *e;
}

void validate_document(const AnnotatedDocument& doc,
                       const TypeRegistry& registry,
                       const CharSet& sentence_delimiters) {
  const std::u32string chars = utf8::decode(doc.text);
  const std::vector<Sentence> sentences =
      split_sentences(doc.text, sentence_delimiters);
  std::unordered_set<std::string> ids;
  for (const auto& e : doc.entities) {
    const std::string where = "document '" + doc.doc_id + "', entity '" + e.id + "'";
    if (!ids.insert(e.id).second) {
      throw ValidationError(where + ": duplicate id");
    }
    if (e.span.start >= e.span.end || e.span.end > chars.size()) {
      throw ValidationError(where + ": span " + to_string(e.span) +
                            " outside text");
    }
    const std::string sliced = utf8::encode(
        std::u32string_view(chars).substr(e.span.start, e.span.length()));
    if (sliced != e.text) {
      throw ValidationError(where + ": text '" + e.text +
                            "' does not match document slice '" + sliced + "'");
    }
    if (!registry.has_type(e.type)) {
      throw ValidationError(where + ": unregistered type '" + e.type + "'");
    }
    for (const auto& s : sentences) {
      // Throws on straddle.
      project_span(e.span, s);
    }
  }
  for (const auto& d : doc.dependencies) {
    doc.entity(d.from);
    doc.entity(d.to);
    if (d.from == d.to) {
      throw ValidationError("document '" + doc.doc_id +
                            "': reflexive dependency on '" + d.from + "'");
    }
  }
}

namespace {

const nlohmann::json& field(const nlohmann::json& obj, const char* name,
                            std::size_t line, const std::string& path) {
  if (!obj.is_object() || !obj.contains(name)) {
    throw ParseError(line, path + name, "missing");
  }
  return obj.at(name);
}

std::string string_field(const nlohmann::json& obj, const char* name,
                         std::size_t line, const std::string& path = "") {
  const auto& v = field(obj, name, line, path);
  if (!v.is_string()) throw ParseError(line, path + name, "expected string");
  return v.get<std::string>();
}

}  // namespace

AnnotatedDocument document_from_json(const nlohmann::json& record,
                                     std::size_t line) {
  AnnotatedDocument doc;
  doc.doc_id = string_field(record, "doc_id", line);
  doc.doc_kind = record.contains("doc_kind")
                     ? string_field(record, "doc_kind", line)
                     : std::string();
  doc.text = string_field(record, "text", line);

  // Raw documents for extraction carry no entities.
  const nlohmann::json entities =
      record.contains("entities") ? record.at("entities") : nlohmann::json::array();
  if (!entities.is_array()) throw ParseError(line, "entities", "expected array");
  for (std::size_t i = 0; i < entities.size(); ++i) {
    const std::string path = "entities[" + std::to_string(i) + "].";
    const auto& e = entities[i];
    Entity entity;
    entity.id = string_field(e, "id", line, path);
    entity.text = string_field(e, "text", line, path);
    entity.type = string_field(e, "type", line, path);
    const auto& start = field(e, "start", line, path);
    if (!start.is_number_unsigned()) {
      throw ParseError(line, path + "start", "expected non-negative integer");
    }
    const std::size_t n = utf8::length(entity.text);
    if (n == 0) throw ParseError(line, path + "text", "empty entity text");
    entity.span = {start.get<std::size_t>(), start.get<std::size_t>() + n};
    doc.entities.push_back(std::move(entity));
  }

  if (record.contains("dependencies")) {
    const auto& deps = record.at("dependencies");
    if (!deps.is_array()) {
      throw ParseError(line, "dependencies", "expected array");
    }
    for (std::size_t i = 0; i < deps.size(); ++i) {
      const std::string path = "dependencies[" + std::to_string(i) + "].";
      Dependency d{string_field(deps[i], "from", line, path),
                   string_field(deps[i], "to", line, path)};
      if (doc.find_entity(d.from) == nullptr) {
        throw ParseError(line, path + "from", "dangling entity id '" + d.from + "'");
      }
      if (doc.find_entity(d.to) == nullptr) {
        throw ParseError(line, path + "to", "dangling entity id '" + d.to + "'");
      }
      doc.dependencies.push_back(std::move(d));
    }
  }
  return doc;
}

nlohmann::json document_to_json(const AnnotatedDocument& doc) {
  nlohmann::json entities = nlohmann::json::array();
  for (const auto& e : doc.entities) {
    entities.push_back(
        {{"id", e.id}, {"text", e.text}, {"type", e.type}, {"start", e.span.start}});
  }
  nlohmann::json deps = nlohmann::json::array();
  for (const auto& d : doc.dependencies) {
    deps.push_back({{"from", d.from}, {"to", d.to}});
  }
  return {{"doc_id", doc.doc_id},
          {"doc_kind", doc.doc_kind},
          {"text", doc.text},
          {"entities", std::move(entities)},
          {"dependencies", std::move(deps)}};
}

std::vector<AnnotatedDocument> read_annotations(
    std::istream& in, const TypeRegistry* registry,
    const CharSet* sentence_delimiters) {
  std::vector<AnnotatedDocument> docs;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line, "<record>", e.what());
    }
    AnnotatedDocument doc = document_from_json(record, line);
    if (registry != nullptr) {
      try {
        validate_document(doc, *registry,
                          sentence_delimiters ? *sentence_delimiters : CharSet{});
      } catch (const Error& e) {
        throw ParseError(line, "<document>", e.what());
      }
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<AnnotatedDocument> read_annotations_file(
    const std::string& path, const TypeRegistry* registry,
    const CharSet* sentence_delimiters) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open annotation file '" + path + "'");
  return read_annotations(in, registry, sentence_delimiters);
}

void write_annotations(std::ostream& out,
                       const std::vector<AnnotatedDocument>& docs) {
  for (const auto& doc : docs) out << document_to_json(doc).dump() << '\n';
}

}  // namespace ehrqa
