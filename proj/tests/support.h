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

#ifndef EHRQA_TESTS_SUPPORT_H_
#define EHRQA_TESTS_SUPPORT_H_

// Fixtures and random generators shared by the test binaries.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ehrqa/annotation.h"
#include "ehrqa/config.h"
#include "ehrqa/metrics.h"
#include "ehrqa/reader.h"
#include "ehrqa/text.h"

namespace ehrqa::testing {

// Appends text piece by piece; entities record their own offsets.
class DocBuilder {
 public:
  DocBuilder(std::string id, std::string kind = "") {
    doc_.doc_id = std::move(id);
    doc_.doc_kind = std::move(kind);
  }

  DocBuilder& text(const std::string& t) {
    doc_.text += t;
    pos_ += utf8::length(t);
    return *this;
  }

  // Returns the new entity id.
  std::string entity(const std::string& t, const std::string& type) {
    std::string id = "e" + std::to_string(doc_.entities.size() + 1);
    const std::size_t len = utf8::length(t);
    doc_.entities.push_back({id, t, type, {pos_, pos_ + len}});
    text(t);
    return id;
  }

  DocBuilder& dep(const std::string& from, const std::string& to) {
    doc_.dependencies.push_back({from, to});
    return *this;
  }

  AnnotatedDocument build() const { return doc_; }

 private:
  AnnotatedDocument doc_;
  std::size_t pos_ = 0;
};

// "Abdominal cavity: effusion, pneumatosis seen。Gallbladder fossa: fluid
// shadow seen。" in the English demo vocabulary.
inline AnnotatedDocument ct_fixture() {
  DocBuilder b("ct-1", "ct_report");
  auto abd = b.entity("abdominal cavity", "body_part");
  b.text(": ");
  auto eff = b.entity("effusion", "abnormality");
  b.text(", ");
  auto pne = b.entity("pneumatosis", "abnormality");
  b.text(" seen。");
  auto gb = b.entity("gallbladder fossa", "body_part");
  b.text(": ");
  auto fl = b.entity("limited low-density fluid shadow", "abnormality");
  b.text(" seen。");
  b.dep(abd, eff).dep(abd, pne).dep(gb, fl);
  return b.build();
}

// Mother with diabetes and hypertension, father with gout.
inline AnnotatedDocument family_fixture() {
  DocBuilder b("fh-1", "family_history");
  auto m = b.entity("mother", "family_member");
  b.text(" has ");
  auto d1 = b.entity("diabetes", "disease");
  b.text(", ");
  auto d2 = b.entity("hypertension", "disease");
  b.text("。");
  auto f = b.entity("father", "family_member");
  b.text(" has ");
  auto d3 = b.entity("gout", "disease");
  b.text("。");
  b.dep(m, d1).dep(m, d2).dep(f, d3);
  return b.build();
}

// Random documents over the demo registry: sentences of the form
// "<part>: <abn>, <abn> seen。" with fresh words so every entity text is
// unique, plus occasional filler sentences. With `split_groups`, some
// answers are joined by " and ", leaving two groups in one sentence.
inline AnnotatedDocument random_ct_doc(std::mt19937_64& rng, const std::string& id,
                                       bool split_groups = true) {
  DocBuilder b(id, "ct_report");
  std::uniform_int_distribution<int> sentences(1, 5), abns(0, 3), coin(0, 3);
  const int n = sentences(rng);
  int word = 0;
  auto fresh = [&](const char* stem) { return std::string(stem) + std::to_string(word++); };
  for (int s = 0; s < n; ++s) {
    if (coin(rng) == 0) {
      b.text("nothing else of note。");
      continue;
    }
    auto part = b.entity(fresh("organ"), "body_part");
    b.text(": ");
    const int k = abns(rng);
    for (int a = 0; a < k; ++a) {
      if (a > 0) b.text(split_groups && coin(rng) == 0 ? " and " : ", ");
      auto abn = b.entity(fresh("lesion"), "abnormality");
      b.dep(part, abn);
    }
    b.text(k == 0 ? "normal。" : " seen。");
  }
  return b.build();
}

// A random simplex of size n+1 with position 0 weighted by `null_bias`.
inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n + 1);
  double sum = 0;
  for (auto& x : v) {
    x = u(rng);
    // Sprinkle exact zeros and duplicates to exercise ties.
    if (u(rng) < 0.1) x = 0.0;
    if (u(rng) < 0.1) x = 0.5;
    sum += x;
  }
  if (sum == 0) {
    v[0] = 1.0;
    return v;
  }
  for (auto& x : v) x /= sum;
  return v;
}

// Random valid output with one character per token.
inline ReaderOutput random_output(std::mt19937_64& rng, std::size_t n) {
  ReaderOutput out;
  out.qid = "r";
  out.no_answer_prob = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  out.start_probs = random_simplex(rng, n);
  out.end_probs = random_simplex(rng, n);
  for (std::size_t i = 0; i < n; ++i) out.offsets.push_back({i, i + 1});
  return out;
}

inline FinalAnswer answer_of(const std::string& text) {
  FinalAnswer a;
  a.question = "q";
  a.doc_id = "d";
  a.answerable = !text.empty();
  a.text = text;
  return a;
}

// Five relation items without span information. By hand, per item:
//   1. "ab" vs "abc"        EM 0, tp 2 fp 0 fn 1, flags agree
//   2. "a，b" vs "a，b"     EM 1, tp 2 fp 0 fn 0, agree
//   3. none vs "xyz"        EM 0, tp 0 fp 0 fn 3, disagree
//   4. "pq" vs none         EM 0, tp 0 fp 2 fn 0, disagree
//   5. none vs none         EM 1, no counts, agree
// Totals: EM 2/5, tp 4 fp 2 fn 4, F1 8/14, accuracy 3/5.
inline std::vector<EvalItem> five_item_fixture() {
  const std::pair<const char*, const char*> rows[] = {
      {"ab", "abc"}, {"a，b", "a，b"}, {"", "xyz"}, {"pq", ""}, {"", ""}};
  std::vector<EvalItem> items;
  int i = 0;
  for (const auto& [p, g] : rows) {
    EvalItem item;
    item.qid = "i" + std::to_string(++i);
    item.predicted = answer_of(p);
    item.gold = answer_of(g);
    item.task = Task::kRelation;
    item.category = "family_member-disease";
    items.push_back(item);
  }
  return items;
}

}  // namespace ehrqa::testing

#endif  // EHRQA_TESTS_SUPPORT_H_
