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

#include "ehrqa/synthetic.h"

#include <algorithm>
#include <random>

namespace ehrqa {
namespace {

const std::vector<std::string> kFamily = {"母亲", "父亲", "哥哥", "姐姐", "祖父", "外婆"};
const std::vector<std::string> kDiseases = {"糖尿病", "高血压", "冠心病", "肝炎",
                                            "哮喘",   "胃癌",   "肺结核", "痛风"};
const std::vector<std::string> kBodyParts = {"腹腔", "胆囊窝", "肝脏", "右肺",
                                             "左肾", "脾脏",   "胰腺", "盆腔"};
const std::vector<std::string> kAbnormalities = {"积液",   "积气", "低密度影",     "结节",
                                                 "钙化灶", "囊肿", "脂肪间隙模糊", "占位"};

// Builds one document left to right, tracking character offsets.
class DocBuilder {
 public:
  explicit DocBuilder(AnnotatedDocument& doc) : doc_(doc) {}

  void text(const std::string& s) {
    doc_.text += s;
    length_ += utf8::length(s);
  }

  std::string entity(const std::string& s, const std::string& type) {
    Entity e;
    e.id = "e" + std::to_string(doc_.entities.size() + 1);
    e.text = s;
    e.type = type;
    e.span = {length_, length_ + utf8::length(s)};
    doc_.entities.push_back(e);
    text(s);
    return e.id;
  }

  void link(const std::string& from, const std::string& to) {
    doc_.dependencies.push_back({from, to});
  }

 private:
  AnnotatedDocument& doc_;
  std::size_t length_ = 0;
};

// Draws without replacement so no text repeats in a document.
class Pool {
 public:
  Pool(std::vector<std::string> items, std::mt19937_64& rng) : items_(std::move(items)) {
    std::shuffle(items_.begin(), items_.end(), rng);
  }
  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  std::string take() {
    std::string s = items_.back();
    items_.pop_back();
    return s;
  }

 private:
  std::vector<std::string> items_;
};

int roll(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// "腹腔见积液、积气；另见脂肪间隙模糊。左肾未见异常。"
void ct_report(DocBuilder& b, std::mt19937_64& rng) {
  Pool parts(kBodyParts, rng);
  Pool abns(kAbnormalities, rng);
  const int regions = roll(rng, 2, 3);
  for (int r = 0; r < regions && !parts.empty(); ++r) {
    const std::string bp = b.entity(parts.take(), "body_part");
    const int style = roll(rng, 0, 3);
    if (style == 3 || abns.empty()) {
      b.text("未见异常。");
      continue;
    }
    b.text(style == 0 ? "内见" : "见");
    const int group = std::min<int>(roll(rng, 1, 2), static_cast<int>(abns.size()));
    for (int i = 0; i < group; ++i) {
      if (i > 0) b.text("、");
      b.link(bp, b.entity(abns.take(), "abnormality"));
    }
    // Continuation sentence owned by the same body part.
    if (!abns.empty() && roll(rng, 0, 1) == 1) {
      b.text("；另见");
      b.link(bp, b.entity(abns.take(), "abnormality"));
    }
    b.text("。");
  }
}

// "母亲患有糖尿病、高血压。父亲患有冠心病。患者否认肝炎病史。"
void family_history(DocBuilder& b, std::mt19937_64& rng) {
  Pool members(kFamily, rng);
  Pool diseases(kDiseases, rng);
  const int n = roll(rng, 2, 3);
  for (int m = 0; m < n && !members.empty() && !diseases.empty(); ++m) {
    const std::string fm = b.entity(members.take(), "family_member");
    b.text("患有");
    const int group = std::min<int>(roll(rng, 1, 2), static_cast<int>(diseases.size()));
    for (int i = 0; i < group; ++i) {
      if (i > 0) b.text("、");
      b.link(fm, b.entity(diseases.take(), "disease"));
    }
    b.text("。");
  }
  if (!diseases.empty() && roll(rng, 0, 1) == 1) {
    b.text("患者否认");
    b.entity(diseases.take(), "disease");
    b.text("病史。");
  }
}

}  // namespace

std::vector<AnnotatedDocument> synthesize_corpus(const SynthOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<AnnotatedDocument> docs;
  for (std::size_t i = 0; i < opts.num_docs; ++i) {
    AnnotatedDocument doc;
    DocBuilder b(doc);
    if (unit(rng) < opts.ct_fraction) {
      doc.doc_kind = "ct_report";
      ct_report(b, rng);
    } else {
      doc.doc_kind = "family_history";
      family_history(b, rng);
    }
    doc.doc_id = "synth-" + std::to_string(i + 1);
    docs.push_back(std::move(doc));
  }
  return docs;
}

PipelineConfig synthetic_config() {
  PipelineConfig cfg = default_config();
  using D = Direction;
  cfg.templates = TemplateRegistry({
      {"fd_right_1", "family_member-disease", D::kQueryRight, "患者的{X}患有什么疾病？"},
      {"fd_right_2", "family_member-disease", D::kQueryRight, "患者的{X}被诊断为何种疾病？"},
      {"fd_left_1", "family_member-disease", D::kQueryLeft, "患者的哪位亲属患有{X}？"},
      {"fd_left_2", "family_member-disease", D::kQueryLeft, "哪位家属有{X}病史？"},
      {"ba_right_1", "body_part-abnormality", D::kQueryRight, "患者的{X}有什么异常？"},
      {"ba_right_2", "body_part-abnormality", D::kQueryRight, "{X}可见哪些异常表现？"},
      {"ba_left_1", "body_part-abnormality", D::kQueryLeft, "在哪个部位发现了{X}？"},
      {"ner_disease", "disease", D::kNer, "患者患有什么疾病？"},
      {"ner_abnormality", "abnormality", D::kNer, "患者有什么异常？"},
      {"ner_body_part", "body_part", D::kNer, "报告提到了哪些部位？"},
  });
  cfg.extraction.fill_lexicon = {{"family_member", kFamily}};
  cfg.extraction.doc_kind_templates = {
      {"ct_report", {"body_part-abnormality", "body_part", "abnormality"}},
      {"family_history", {"family_member-disease", "disease"}},
  };
  return cfg;
}

}  // namespace ehrqa
