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

#include "ehrqa/errors.h"
#include "ehrqa/metrics.h"

namespace ehrqa {
namespace {

using testing::answer_of;

const std::string kSep = "，";

FinalAnswer with_parts(std::vector<std::pair<Span, std::string>> parts) {
  FinalAnswer a = answer_of("x");
  a.text.clear();
  for (const auto& [span, text] : parts) {
    if (!a.text.empty()) a.text += kSep;
    a.text += text;
    a.parts.push_back({0, span, text});
  }
  a.answerable = !parts.empty();
  return a;
}

TEST_CASE("exact match") {
  CHECK(exact_match(answer_of("a，b"), answer_of("a，b")) == 1);
  CHECK(exact_match(answer_of("a"), answer_of("a，b")) == 0);
  CHECK(exact_match(answer_of(""), answer_of("")) == 1);
  CHECK(exact_match(answer_of(""), answer_of("a")) == 0);
}

TEST_CASE("token counts, character multiset") {
  CHECK(token_counts_qa(answer_of("ab"), answer_of("abc"), kSep) == Counts{2, 0, 1});
  CHECK(token_counts_qa(answer_of(""), answer_of("abc"), kSep) == Counts{0, 0, 3});
  CHECK(token_counts_qa(answer_of("aab"), answer_of("ab"), kSep) == Counts{2, 1, 0});
  // Separators carry no credit.
  CHECK(token_counts_qa(answer_of("a，b"), answer_of("a，b"), kSep) == Counts{2, 0, 0});
  // Surplus parts are all false positives.
  CHECK(token_counts_qa(answer_of("ab，cd"), answer_of("ab"), kSep) == Counts{2, 2, 0});
  // Parts align in order, not by best match.
  CHECK(token_counts_qa(answer_of("cd，ab"), answer_of("ab，cd"), kSep) == Counts{0, 4, 4});
}

TEST_CASE("token counts, positional") {
  // Same characters, different places: no credit.
  auto p = with_parts({{{0, 2}, "ab"}});
  auto g = with_parts({{{5, 7}, "ab"}});
  CHECK(token_counts_qa(p, g, kSep) == Counts{0, 2, 2});
  auto shifted = with_parts({{{1, 3}, "bc"}});
  auto gold = with_parts({{{0, 2}, "ab"}});
  CHECK(token_counts_qa(shifted, gold, kSep) == Counts{1, 1, 1});
}

TEST_CASE("token f1 over items") {
  std::vector<EvalItem> one(1);
  one[0].predicted = answer_of("ab");
  one[0].gold = answer_of("abc");
  auto r = token_f1_qa(one, kSep);
  REQUIRE(r.has_value());
  CHECK(r->counts == Counts{2, 0, 1});
  REQUIRE(r->f1.has_value());
  CHECK(*r->f1 == doctest::Approx(0.8).epsilon(1e-12));

  one[0].predicted = answer_of("abc");
  CHECK(*token_f1_qa(one, kSep)->f1 == 1.0);

  one[0].predicted = answer_of("");
  CHECK(*token_f1_qa(one, kSep)->f1 == 0.0);

  CHECK_FALSE(token_f1_qa({}, kSep).has_value());
  one[0].gold = answer_of("");
  CHECK_FALSE(token_f1_qa(one, kSep)->f1.has_value());
}

TEST_CASE("ner labels") {
  auto r = token_f1_ner({{{0, 5}, "body_part"}}, {{{0, 5}, "body_part"}}, 10);
  CHECK(*r.f1 == 1.0);
  auto wrong = token_f1_ner({{{0, 5}, "disease"}}, {{{0, 5}, "body_part"}}, 10);
  CHECK(wrong.counts == Counts{0, 5, 5});
  CHECK(*wrong.f1 == 0.0);
  auto none = token_f1_ner({}, {{{0, 5}, "body_part"}}, 10);
  CHECK(*none.f1 == 0.0);
  auto partial = token_f1_ner({{{2, 7}, "body_part"}}, {{{0, 5}, "body_part"}}, 10);
  CHECK(partial.counts == Counts{3, 2, 2});
  CHECK_THROWS_AS(token_counts_ner({}, {{{0, 3}, "x"}, {{2, 4}, "x"}}, 10), ValidationError);
  CHECK_NOTHROW(token_counts_ner({}, {{{0, 3}, "x"}, {{2, 4}, "y"}}, 10));
  CHECK_THROWS_AS(token_counts_ner({{{8, 12}, "x"}}, {}, 10), InvalidSpanError);
}

TEST_CASE("answerability accuracy") {
  auto items = [](std::vector<std::pair<bool, bool>> flags) {
    std::vector<EvalItem> out;
    for (auto [p, g] : flags) {
      EvalItem i;
      i.predicted = answer_of(p ? "x" : "");
      i.gold = answer_of(g ? "x" : "");
      out.push_back(i);
    }
    return out;
  };
  CHECK(*answerability_accuracy(items({{true, true}, {false, true}, {true, true}})) ==
        doctest::Approx(2.0 / 3.0));
  CHECK(*answerability_accuracy(items({{true, true}, {false, false}})) == 1.0);
  CHECK(*answerability_accuracy(items({{true, false}, {false, true}})) == 0.0);
  CHECK_FALSE(answerability_accuracy({}).has_value());
}

TEST_CASE("five item fixture") {
  auto r = evaluate(testing::five_item_fixture(), kSep);
  CHECK(r.items == 5);
  CHECK(std::abs(*r.em - 0.4) <= 1e-12);
  CHECK(r.qa_counts == Counts{4, 2, 4});
  CHECK(std::abs(*r.f1 - 8.0 / 14.0) <= 1e-12);
  CHECK(std::abs(*r.answerability_accuracy - 0.6) <= 1e-12);
  CHECK_FALSE(r.ner_f1.has_value());
  REQUIRE(r.breakdown.count("family_member-disease") == 1);
  CHECK(r.breakdown["family_member-disease"].items == 5);
}

ExtractionRecord rec(const std::string& qid, const std::string& text, Task task = Task::kRelation) {
  ExtractionRecord r;
  r.qid = qid;
  r.doc_id = "d";
  r.key = "k" + qid;
  r.task = task;
  r.category = task == Task::kNer ? "disease" : "family_member-disease";
  r.value = answer_of(text);
  return r;
}

TEST_CASE("alignment") {
  std::vector<ExtractionRecord> gold = {rec("1", "a"), rec("2", ""), rec("3", "b")};
  std::vector<ExtractionRecord> pred = {rec("1", "a"), rec("4", "z")};
  Diagnostics diags;
  auto items = align_records(pred, gold, &diags);
  REQUIRE(items.size() == 4);
  CHECK(items[2].qid == "3");
  CHECK_FALSE(items[2].predicted.answerable);
  CHECK(items[3].qid == "4");
  CHECK_FALSE(items[3].gold.answerable);
  CHECK_FALSE(diags.empty());

  auto r = evaluate(items, kSep);
  CHECK(*r.em == doctest::Approx(0.5));  // items 1 and 2
}

TEST_CASE("identical and empty predictions") {
  std::vector<ExtractionRecord> gold = {rec("1", "a，b"), rec("2", ""), rec("3", "cd")};
  auto same = evaluate(align_records(gold, gold), kSep);
  CHECK(*same.em == 1.0);
  CHECK(*same.f1 == 1.0);
  CHECK(*same.answerability_accuracy == 1.0);

  auto none = evaluate(align_records({}, gold), kSep);
  CHECK(*none.answerability_accuracy == doctest::Approx(1.0 / 3.0));
  CHECK(*none.f1 == 0.0);
}

TEST_CASE("hand-built three item report") {
  // NER item uses positions, relation items use characters.
  ExtractionRecord g1 = rec("1", "ab", Task::kNer);
  g1.value.parts = {{0, {0, 2}, "ab"}};
  ExtractionRecord p1 = rec("1", "bc", Task::kNer);
  p1.value.parts = {{0, {1, 3}, "bc"}};
  std::vector<ExtractionRecord> gold = {g1, rec("2", "xyz"), rec("3", "")};
  std::vector<ExtractionRecord> pred = {p1, rec("2", "xy"), rec("3", "q")};
  auto r = evaluate(align_records(pred, gold), kSep);
  CHECK(r.ner_counts == Counts{1, 1, 1});
  CHECK(r.qa_counts == Counts{2, 1, 1});
  CHECK(*r.em == 0.0);
  CHECK(*r.answerability_accuracy == doctest::Approx(2.0 / 3.0));
  CHECK(*r.ner_f1 == doctest::Approx(0.5));
  CHECK(*r.f1 == doctest::Approx(4.0 / 6.0));

  auto j = report_to_json(r);
  CHECK(j["counts"]["items"] == 3);
  CHECK(j["ner_f1"].get<double>() == doctest::Approx(0.5));
  CHECK(format_report(r).find("overall") != std::string::npos);
}

}  // namespace
}  // namespace ehrqa
