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

#include "ehrqa/templates.h"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <utility>

namespace ehrqa {
namespace {

std::size_t count_placeholders(std::string_view pattern) {
  std::size_t n = 0;
  for (auto pos = pattern.find(kPlaceholder); pos != std::string_view::npos;
       pos = pattern.find(kPlaceholder, pos + kPlaceholder.size())) {
    ++n;
  }
  return n;
}

}  // namespace

std::string to_string(Direction d) {
  switch (d) {
    case Direction::kQueryRight:
      return "query-right";
    case Direction::kQueryLeft:
      return "query-left";
    case Direction::kNer:
      return "ner";
  }
  return "?";
}

Direction parse_direction(std::string_view s) {
  if (s == "query-right") return Direction::kQueryRight;
  if (s == "query-left") return Direction::kQueryLeft;
  if (s == "ner") return Direction::kNer;
  throw ConfigError("unknown template direction '" + std::string(s) + "'");
}

TemplateRegistry::TemplateRegistry(std::vector<QuestionTemplate> templates)
    : templates_(std::move(templates)) {
  std::set<std::string> ids;
  std::map<std::pair<std::string, Direction>, std::size_t> per_slot;
  for (const auto& t : templates_) {
    if (!ids.insert(t.template_id).second) {
      throw ConfigError("duplicate template id '" + t.template_id + "'");
    }
    const std::size_t slots = count_placeholders(t.pattern);
    const std::size_t want = t.direction == Direction::kNer ? 0 : 1;
    if (slots != want) {
      throw ConfigError("template '" + t.template_id + "' has " +
                        std::to_string(slots) + " placeholders, expected " +
                        std::to_string(want));
    }
    if (t.direction != Direction::kNer) parse_relation_class(t.relation_class);
    if (++per_slot[{t.relation_class, t.direction}] > kMaxPerSlot) {
      throw ConfigError("more than " + std::to_string(kMaxPerSlot) +
                        " templates for " + t.relation_class + " / " +
                        to_string(t.direction));
    }
  }
}

void TemplateRegistry::check_against(const TypeRegistry& types) const {
  for (const auto& t : templates_) {
    if (t.direction == Direction::kNer) {
      if (!types.is_queryable(t.relation_class)) {
        throw ConfigError("NER template '" + t.template_id +
                          "' targets non-queryable type '" + t.relation_class +
                          "'");
      }
    } else if (!types.has_relation_class(t.relation_class)) {
      throw ConfigError("template '" + t.template_id +
                        "' uses unregistered relation class '" +
                        t.relation_class + "'");
    }
  }
}

std::vector<const QuestionTemplate*> TemplateRegistry::for_class(
    const std::string& relation_class, Direction direction) const {
  std::vector<const QuestionTemplate*> out;
  for (const auto& t : templates_) {
    if (t.relation_class == relation_class && t.direction == direction) {
      out.push_back(&t);
    }
  }
  return out;
}

bool TemplateRegistry::has_class(const std::string& relation_class) const {
  return std::any_of(templates_.begin(), templates_.end(), [&](const auto& t) {
    return t.relation_class == relation_class;
  });
}

const QuestionTemplate* TemplateRegistry::find(std::string_view template_id) const {
  for (const auto& t : templates_) {
    if (t.template_id == template_id) return &t;
  }
  return nullptr;
}

std::string fill_side_type(const QuestionTemplate& t) {
  if (t.direction == Direction::kNer) return {};
  const RelationClass rc = parse_relation_class(t.relation_class);
  return t.direction == Direction::kQueryRight ? rc.left_type : rc.right_type;
}

std::string answer_side_type(const QuestionTemplate& t) {
  if (t.direction == Direction::kNer) return t.relation_class;
  const RelationClass rc = parse_relation_class(t.relation_class);
  return t.direction == Direction::kQueryRight ? rc.right_type : rc.left_type;
}

RelationClass relation_class_of(const Dependency& dep,
                                const AnnotatedDocument& doc) {
  return {doc.entity(dep.from).type, doc.entity(dep.to).type};
}

std::string instantiate(const QuestionTemplate& t, std::string_view fill_text) {
  if (t.direction == Direction::kNer) {
    throw TemplateMisuseError("NER template '" + t.template_id +
                              "' takes no fill");
  }
  if (fill_text.empty()) {
    throw TemplateMisuseError("empty fill for template '" + t.template_id + "'");
  }
  std::string out = t.pattern;
  const auto pos = out.find(kPlaceholder);
  if (pos == std::string::npos) {
    throw TemplateMisuseError("template '" + t.template_id +
                              "' has no placeholder");
  }
  out.replace(pos, kPlaceholder.size(), fill_text);
  return out;
}

std::vector<QuestionDraft> generate_relation_questions(
    const AnnotatedDocument& doc, const TemplateRegistry& templates,
    Diagnostics* diags) {
  std::vector<QuestionDraft> drafts;
  std::set<std::pair<std::string, std::string>> seen;
  std::set<std::string> skipped;

  for (const auto& dep : doc.dependencies) {
    const std::string cls = relation_class_of(dep, doc).name();
    if (!templates.has_class(cls)) {
      if (skipped.insert(cls).second) {
        report(diags, "unregistered-relation-class",
               "document '" + doc.doc_id + "': no templates for '" + cls +
                   "', skipped");
      }
      continue;
    }
    for (Direction dir : {Direction::kQueryRight, Direction::kQueryLeft}) {
      const bool right = dir == Direction::kQueryRight;
      const Entity& filled = doc.entity(right ? dep.from : dep.to);

      // Every partner of this occurrence under the same class.
      std::vector<const Entity*> answers;
      for (const auto& other : doc.dependencies) {
        if ((right ? other.from : other.to) != filled.id) continue;
        if (relation_class_of(other, doc).name() != cls) continue;
        const Entity* partner = &doc.entity(right ? other.to : other.from);
        if (std::find(answers.begin(), answers.end(), partner) == answers.end()) {
          answers.push_back(partner);
        }
      }
      std::sort(answers.begin(), answers.end(),
                [](const Entity* a, const Entity* b) {
                  return std::tie(a->span, a->id) < std::tie(b->span, b->id);
                });

      for (const QuestionTemplate* t : templates.for_class(cls, dir)) {
        QuestionDraft d;
        d.question = instantiate(*t, filled.text);
        if (!seen.insert({d.question, doc.doc_id}).second) continue;
        d.doc_id = doc.doc_id;
        d.template_id = t->template_id;
        d.direction = dir;
        d.source = cls;
        for (const Entity* a : answers) {
          d.answer_spans.push_back(a->span);
          d.answer_entity_ids.push_back(a->id);
        }
        d.answer_entity_type = answer_side_type(*t);
        d.filled_entity = filled.id;
        drafts.push_back(std::move(d));
      }
    }
  }
  return drafts;
}

std::vector<QuestionDraft> generate_ner_questions(
    const AnnotatedDocument& doc, const TypeRegistry& types,
    const TemplateRegistry& templates, Diagnostics* diags) {
  std::vector<QuestionDraft> drafts;
  for (const auto& type : types.ner_queryable_types()) {
    std::vector<const Entity*> found;
    for (const auto& e : doc.entities) {
      if (e.type == type) found.push_back(&e);
    }
    if (found.empty()) continue;
    const auto candidates = templates.for_class(type, Direction::kNer);
    if (candidates.empty()) {
      report(diags, "missing-ner-template",
             "no NER template for queryable type '" + type + "'");
      continue;
    }
    std::sort(found.begin(), found.end(), [](const Entity* a, const Entity* b) {
      return std::tie(a->span, a->id) < std::tie(b->span, b->id);
    });
    const QuestionTemplate& t = *candidates.front();
    QuestionDraft d;
    d.question = t.pattern;
    d.doc_id = doc.doc_id;
    d.template_id = t.template_id;
    d.direction = Direction::kNer;
    d.source = type;
    for (const Entity* e : found) {
      d.answer_spans.push_back(e->span);
      d.answer_entity_ids.push_back(e->id);
    }
    d.answer_entity_type = type;
    drafts.push_back(std::move(d));
  }
  return drafts;
}

}  // namespace ehrqa
