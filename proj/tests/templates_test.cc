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

#include "doctest.h"
#include "support.h"

#include "ehrqa/config.h"
#include "ehrqa/errors.h"
#include "ehrqa/templates.h"

namespace ehrqa {
namespace {

using D = Direction;

TemplateRegistry two_per_direction() {
  return TemplateRegistry({
      {"r1", "family_member-disease", D::kQueryRight,
       "What disease has the patient's {X} suffered from?"},
      {"r2", "family_member-disease", D::kQueryRight, "What did the {X} have?"},
      {"l1", "family_member-disease", D::kQueryLeft,
       "Which family member of the patient has suffered from {X}?"},
      {"l2", "family_member-disease", D::kQueryLeft, "Who had {X}?"},
  });
}

TEST_CASE("relation class of a dependency") {
  auto doc = testing::family_fixture();
  CHECK(relation_class_of(doc.dependencies[0], doc).name() == "family_member-disease");

  testing::DocBuilder b("bb");
  auto a = b.entity("liver", "body_part");
  b.text(" ");
  auto c = b.entity("lobe", "body_part");
  b.dep(a, c);
  auto d2 = b.build();
  CHECK(relation_class_of(d2.dependencies[0], d2).name() == "body_part-body_part");

  CHECK_THROWS_AS(relation_class_of({"e1", "missing"}, doc), DanglingReferenceError);
}

TEST_CASE("instantiate fills the placeholder") {
  QuestionTemplate t{"t", "family_member-disease", D::kQueryRight,
                     "What disease has the patient's {X} suffered from?"};
  CHECK(instantiate(t, "mother") == "What disease has the patient's mother suffered from?");
  QuestionTemplate l{"l", "family_member-disease", D::kQueryLeft,
                     "Which family member of the patient has suffered from {X}?"};
  CHECK(instantiate(l, "diabetes") ==
        "Which family member of the patient has suffered from diabetes?");
  CHECK_THROWS_AS(instantiate(t, ""), TemplateMisuseError);
  QuestionTemplate n{"n", "disease", D::kNer, "What disease?"};
  CHECK_THROWS_AS(instantiate(n, "x"), TemplateMisuseError);
}

TEST_CASE("registry validation") {
  CHECK_THROWS_AS(TemplateRegistry({{"a", "x-y", D::kQueryRight, "no placeholder"}}),
                  ConfigError);
  CHECK_THROWS_AS(TemplateRegistry({{"a", "x-y", D::kQueryRight, "{X} {X}"}}), ConfigError);
  CHECK_THROWS_AS(TemplateRegistry({{"a", "x", D::kNer, "has {X}"}}), ConfigError);
  CHECK_THROWS_AS(TemplateRegistry({{"a", "x-y", D::kQueryRight, "{X}?"},
                                    {"a", "x-y", D::kQueryLeft, "{X}?"}}),
                  ConfigError);
  CHECK_THROWS_AS(TemplateRegistry({{"a", "x-y", D::kQueryRight, "{X}1"},
                                    {"b", "x-y", D::kQueryRight, "{X}2"},
                                    {"c", "x-y", D::kQueryRight, "{X}3"},
                                    {"d", "x-y", D::kQueryRight, "{X}4"}}),
                  ConfigError);
  TemplateRegistry bad({{"a", "x-y", D::kQueryRight, "{X}?"}});
  CHECK_THROWS_AS(bad.check_against(default_config().types), ConfigError);
  CHECK_NOTHROW(default_config().templates.check_against(default_config().types));
}

TEST_CASE("fill and answer sides") {
  QuestionTemplate r{"r", "family_member-disease", D::kQueryRight, "{X}"};
  QuestionTemplate l{"l", "family_member-disease", D::kQueryLeft, "{X}"};
  CHECK(fill_side_type(r) == "family_member");
  CHECK(answer_side_type(r) == "disease");
  CHECK(fill_side_type(l) == "disease");
  CHECK(answer_side_type(l) == "family_member");
}

TEST_CASE("one dependency, two templates per direction gives four drafts") {
  testing::DocBuilder b("m");
  auto m = b.entity("mother", "family_member");
  b.text(" has ");
  auto d = b.entity("diabetes", "disease");
  b.text("。");
  b.dep(m, d);
  auto drafts = generate_relation_questions(b.build(), two_per_direction());
  REQUIRE(drafts.size() == 4);
  int right = 0;
  for (const auto& q : drafts) {
    REQUIRE(q.answer_spans.size() == 1);
    if (q.direction == D::kQueryRight) {
      ++right;
      CHECK(q.answer_spans[0] == Span{11, 19});
      CHECK(q.answer_entity_type == "disease");
      CHECK(q.filled_entity == m);
    } else {
      CHECK(q.answer_spans[0] == Span{0, 6});
    }
  }
  CHECK(right == 2);
}

TEST_CASE("many-to-one aggregates answers") {
  auto drafts = generate_relation_questions(testing::ct_fixture(),
                                            default_config().templates);
  const QuestionDraft* abd = nullptr;
  for (const auto& q : drafts) {
    if (q.template_id == "ba_right_1" &&
        q.question == "What abnormalities are there in the abdominal cavity of the patient?") {
      abd = &q;
    }
  }
  REQUIRE(abd != nullptr);
  CHECK(abd->answer_spans == std::vector<Span>{{18, 26}, {28, 39}});
  CHECK(abd->answer_entity_ids == std::vector<std::string>{"e2", "e3"});
}

TEST_CASE("no dependencies, no drafts") {
  testing::DocBuilder b("z");
  b.entity("mother", "family_member");
  CHECK(generate_relation_questions(b.build(), default_config().templates).empty());
}

TEST_CASE("unregistered classes are skipped with a diagnostic") {
  testing::DocBuilder b("z");
  auto a = b.entity("liver", "body_part");
  b.text(" ");
  auto c = b.entity("gout", "disease");
  b.dep(a, c);
  Diagnostics diags;
  CHECK(generate_relation_questions(b.build(), default_config().templates, &diags).empty());
  CHECK_FALSE(diags.empty());
}

TEST_CASE("duplicate questions are dropped") {
  // Two occurrences of the same family member text give the same question.
  testing::DocBuilder b("dup");
  auto m1 = b.entity("mother", "family_member");
  b.text(" has ");
  auto d1 = b.entity("gout", "disease");
  b.text("。");
  auto m2 = b.entity("mother", "family_member");
  b.text(" has ");
  auto d2 = b.entity("asthma", "disease");
  b.text("。");
  b.dep(m1, d1).dep(m2, d2);
  auto drafts = generate_relation_questions(b.build(), two_per_direction());
  std::set<std::string> questions;
  for (const auto& q : drafts) CHECK(questions.insert(q.question).second);
  CHECK(drafts.size() == 2 + 4);
}

TEST_CASE("ner drafts") {
  const auto& cfg = default_config();
  testing::DocBuilder b("n");
  b.entity("nodule", "abnormality");
  b.text(", ");
  b.entity("cyst", "abnormality");
  b.text(" and ");
  b.entity("shadow", "abnormality");
  auto three = generate_ner_questions(b.build(), cfg.types, cfg.templates);
  REQUIRE(three.size() == 1);
  CHECK(three[0].answer_spans.size() == 3);
  CHECK(three[0].source == "abnormality");
  CHECK(three[0].direction == D::kNer);

  auto fam = generate_ner_questions(testing::family_fixture(), cfg.types, cfg.templates);
  REQUIRE(fam.size() == 1);  // family_member is not queryable
  CHECK(fam[0].source == "disease");

  testing::DocBuilder all("a");
  all.entity("gout", "disease");
  all.text(" ");
  all.entity("liver", "body_part");
  all.text(" ");
  all.entity("cyst", "abnormality");
  CHECK(generate_ner_questions(all.build(), cfg.types, cfg.templates).size() == 3);

  auto ct = generate_ner_questions(testing::ct_fixture(), cfg.types, cfg.templates);
  for (const auto& q : ct) CHECK(q.source != "disease");
}

}  // namespace
}  // namespace ehrqa
