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

#ifndef EHRQA_ANNOTATION_H_
#define EHRQA_ANNOTATION_H_

#include <cstddef>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ehrqa/span.h"
#include "ehrqa/text.h"

namespace ehrqa {

struct Entity {
  std::string id;
  std::string text;
  std::string type;
  Span span;

  friend bool operator==(const Entity&, const Entity&) = default;
};

// Directed relation from one entity to another, by id.
struct Dependency {
  std::string from;
  std::string to;

  friend bool operator==(const Dependency&, const Dependency&) = default;
};

struct RelationClass {
  std::string left_type;
  std::string right_type;

  // "left_type-right_type"
  std::string name() const { return left_type + "-" + right_type; }

  friend auto operator<=>(const RelationClass&, const RelationClass&) = default;
};

// Splits a relation-class name at its first hyphen. Throws ConfigError when
// there is none.
RelationClass parse_relation_class(std::string_view name);

class TypeRegistry {
 public:
  TypeRegistry() = default;
  // Throws ConfigError if a queryable type or relation-class side is not a
  // registered entity type.
  TypeRegistry(std::set<std::string> entity_types,
               std::set<std::string> ner_queryable_types,
               std::set<RelationClass> relation_classes);

  const std::set<std::string>& entity_types() const { return entity_types_; }
  const std::set<std::string>& ner_queryable_types() const {
    return ner_queryable_;
  }
  const std::set<RelationClass>& relation_classes() const {
    return relation_classes_;
  }

  bool has_type(const std::string& type) const {
    return entity_types_.count(type) > 0;
  }
  bool is_queryable(const std::string& type) const {
    return ner_queryable_.count(type) > 0;
  }
  bool has_relation_class(const std::string& name) const;

  friend bool operator==(const TypeRegistry&, const TypeRegistry&) = default;

 private:
  std::set<std::string> entity_types_;
  std::set<std::string> ner_queryable_;
  std::set<RelationClass> relation_classes_;
};

struct AnnotatedDocument {
  std::string doc_id;
  std::string doc_kind;
  std::string text;
  std::vector<Entity> entities;
  std::vector<Dependency> dependencies;

  // nullptr when no entity has that id.
  const Entity* find_entity(std::string_view id) const;
  // Throws DanglingReferenceError when no entity has that id.
  const Entity& entity(std::string_view id) const;

  friend bool operator==(const AnnotatedDocument&,
                         const AnnotatedDocument&) = default;
};

// Checks every document invariant: unique ids, entity text equals the text
// slice, registered types, resolvable and non-reflexive dependencies, and no
// entity straddling a sentence boundary under `sentence_delimiters`.
// Throws ValidationError, DanglingReferenceError or BoundaryViolationError.
void validate_document(const AnnotatedDocument& doc,
                       const TypeRegistry& registry,
                       const CharSet& sentence_delimiters);

// One annotation record; `end` is derived from the character length of the
// entity text. `line` only feeds error messages.
AnnotatedDocument document_from_json(const nlohmann::json& record,
                                     std::size_t line = 0);
nlohmann::json document_to_json(const AnnotatedDocument& doc);

// Reads a JSON Lines annotation file. Blank lines are skipped. Structural
// problems throw ParseError naming the line and the field. Documents are
// validated when `registry` is non-null; a dangling dependency in any case
// throws ParseError.
std::vector<AnnotatedDocument> read_annotations(
    std::istream& in, const TypeRegistry* registry = nullptr,
    const CharSet* sentence_delimiters = nullptr);
std::vector<AnnotatedDocument> read_annotations_file(
    const std::string& path, const TypeRegistry* registry = nullptr,
    const CharSet* sentence_delimiters = nullptr);

void write_annotations(std::ostream& out,
                       const std::vector<AnnotatedDocument>& docs);

}  // namespace ehrqa

#endif  // EHRQA_ANNOTATION_H_
