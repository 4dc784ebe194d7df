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

#ifndef EHRQA_TEMPLATES_H_
#define EHRQA_TEMPLATES_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ehrqa/annotation.h"
#include "ehrqa/errors.h"
#include "ehrqa/span.h"

namespace ehrqa {

// The slot a relation template fills with entity text.
inline constexpr std::string_view kPlaceholder = "{X}";

enum class Direction {
  kQueryRight,  // fill the left entity, answer is the right entity
  kQueryLeft,   // fill the right entity, answer is the left entity
  kNer,         // no fill, answer is every entity of a type
};

std::string to_string(Direction d);
// Accepts "query-right", "query-left", "ner". Throws ConfigError otherwise.
Direction parse_direction(std::string_view s);

struct QuestionTemplate {
  std::string template_id;
  // Relation-class name, or an entity type name for NER templates.
  std::string relation_class;
  Direction direction = Direction::kQueryRight;
  std::string pattern;

  friend bool operator==(const QuestionTemplate&,
                         const QuestionTemplate&) = default;
};

// Read-only after construction.
class TemplateRegistry {
 public:
  static constexpr std::size_t kMaxPerSlot = 3;

  TemplateRegistry() = default;
  // Throws ConfigError on duplicate ids, a wrong placeholder count, or more
  // than kMaxPerSlot templates for one (relation_class, direction).
  explicit TemplateRegistry(std::vector<QuestionTemplate> templates);

  // Additionally checks every template against the type registry.
  void check_against(const TypeRegistry& types) const;

  const std::vector<QuestionTemplate>& all() const { return templates_; }
  std::vector<const QuestionTemplate*> for_class(const std::string& relation_class,
                                                 Direction direction) const;
  bool has_class(const std::string& relation_class) const;
  const QuestionTemplate* find(std::string_view template_id) const;

  friend bool operator==(const TemplateRegistry&,
                         const TemplateRegistry&) = default;

 private:
  std::vector<QuestionTemplate> templates_;
};

// Type of the entity a template fills in.
std::string fill_side_type(const QuestionTemplate& t);
// Type of the entity a template asks for.
std::string answer_side_type(const QuestionTemplate& t);

RelationClass relation_class_of(const Dependency& dep,
                                const AnnotatedDocument& doc);

// Throws TemplateMisuseError for NER templates and empty fills.
std::string instantiate(const QuestionTemplate& t, std::string_view fill_text);

struct QuestionDraft {
  std::string question;
  std::string doc_id;
  std::string template_id;
  Direction direction = Direction::kQueryRight;
  // Relation-class name for relation drafts, entity type for NER drafts.
  std::string source;
  // Document coordinates, sorted, one per answer entity, not yet merged.
  std::vector<Span> answer_spans;
  std::vector<std::string> answer_entity_ids;
  std::string answer_entity_type;
  std::optional<std::string> filled_entity;

  friend bool operator==(const QuestionDraft&, const QuestionDraft&) = default;
};

// For every dependency with a registered class, one draft per template and
// direction. Answers aggregate over the filled entity occurrence and the
// relation class. Drafts are deduplicated on (question, doc_id), first kept.
// Unregistered classes are skipped with a diagnostic.
std::vector<QuestionDraft> generate_relation_questions(
    const AnnotatedDocument& doc, const TemplateRegistry& templates,
    Diagnostics* diags = nullptr);

// One draft per queryable type present in the document, using the first NER
// template registered for it.
std::vector<QuestionDraft> generate_ner_questions(
    const AnnotatedDocument& doc, const TypeRegistry& types,
    const TemplateRegistry& templates, Diagnostics* diags = nullptr);

}  // namespace ehrqa

#endif  // EHRQA_TEMPLATES_H_
