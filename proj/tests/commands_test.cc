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

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "support.h"

#include "ehrqa/commands.h"
#include "ehrqa/config.h"
#include "ehrqa/errors.h"
#include "ehrqa/squad.h"
#include "ehrqa/synthetic.h"

namespace ehrqa {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(fs::temp_directory_path() / ("ehrqa_cmd_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& leaf) const { return (path_ / leaf).string(); }

 private:
  fs::path path_;
};

void write_docs(const std::string& path, const std::vector<AnnotatedDocument>& docs) {
  std::ofstream out(path);
  write_annotations(out, docs);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_qas(const std::string& path) { return read_squad(path).size(); }

std::vector<AnnotatedDocument> three_docs() {
  std::mt19937_64 rng(1);
  return {testing::ct_fixture(), testing::family_fixture(), testing::random_ct_doc(rng, "r1")};
}

TEST_CASE("generate-dataset writes splits, gold and summary") {
  TempDir dir("gen");
  write_docs(dir / "in.jsonl", three_docs());
  auto s = cmd_generate_dataset(default_config(), dir / "in.jsonl", dir / "out");
  CHECK(s.documents == 3);
  const std::size_t total = count_qas(dir / "out/train.json") + count_qas(dir / "out/dev.json") +
                            count_qas(dir / "out/test.json");
  CHECK(total == s.total);
  CHECK(s.train + s.dev + s.test == s.total);
  CHECK(s.answerable + s.natural_empty + s.constructed_impossible == s.total);
  CHECK(s.ner + s.relation == s.total);
  auto summary = nlohmann::json::parse(slurp(dir / "out/summary.json"));
  CHECK(summary["total"] == s.total);
  CHECK(summary["impossible"] == s.natural_empty + s.constructed_impossible);
  CHECK(fs::exists(dir / "out/gold.jsonl"));
}

TEST_CASE("generate-dataset on empty input") {
  TempDir dir("empty");
  { std::ofstream(dir / "in.jsonl"); }
  auto s = cmd_generate_dataset(default_config(), dir / "in.jsonl", dir / "out");
  CHECK(s.total == 0);
  CHECK(s.documents == 0);
  CHECK(count_qas(dir / "out/train.json") == 0);
}

TEST_CASE("generate-dataset rejects a dangling dependency") {
  TempDir dir("dangling");
  auto doc = testing::family_fixture();
  doc.dependencies.push_back({"e1", "e42"});
  write_docs(dir / "in.jsonl", {testing::ct_fixture(), doc});
  try {
    cmd_generate_dataset(default_config(), dir / "in.jsonl", dir / "out");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("extract and evaluate round trip under the oracle") {
  TempDir dir("ext");
  write_docs(dir / "in.jsonl", three_docs());
  const auto cfg = default_config();
  cmd_generate_dataset(cfg, dir / "in.jsonl", dir / "out");
  const auto n = cmd_extract(cfg, dir / "in.jsonl", dir / "pred.jsonl");
  CHECK(n > 0);
  std::ostringstream table;
  auto r = cmd_evaluate(cfg, dir / "pred.jsonl", dir / "out/gold.jsonl", dir / "report.json",
                        &table);
  CHECK(*r.em == 1.0);
  CHECK(*r.f1 == 1.0);
  CHECK(*r.ner_f1 == 1.0);
  CHECK(*r.answerability_accuracy == 1.0);
  CHECK(table.str().find("overall") != std::string::npos);
  CHECK(nlohmann::json::parse(slurp(dir / "report.json"))["em"] == 1.0);
}

TEST_CASE("outputs are byte identical across runs") {
  TempDir dir("det");
  auto docs = synthesize_corpus({12, 4, 0.5});
  write_docs(dir / "in.jsonl", docs);
  auto cfg = synthetic_config();
  cfg.workers = 3;
  for (const char* run : {"a", "b"}) {
    cmd_generate_dataset(cfg, dir / "in.jsonl", dir / (std::string("gen_") + run));
    cmd_extract(cfg, dir / "in.jsonl", dir / (std::string("pred_") + run + ".jsonl"));
  }
  for (const char* f : {"train.json", "dev.json", "test.json", "gold.jsonl", "summary.json"}) {
    CHECK(slurp(dir / (std::string("gen_a/") + f)) == slurp(dir / (std::string("gen_b/") + f)));
  }
  CHECK(slurp(dir / "pred_a.jsonl") == slurp(dir / "pred_b.jsonl"));
}

TEST_CASE("all unanswerable gives empty output") {
  TempDir dir("none");
  testing::DocBuilder b("blank", "ct_report");
  b.text("Nothing remarkable。");
  write_docs(dir / "in.jsonl", {b.build()});
  CHECK(cmd_extract(default_config(), dir / "in.jsonl", dir / "pred.jsonl") == 0);
  CHECK(slurp(dir / "pred.jsonl").empty());
}

TEST_CASE("remote without endpoint is a config error") {
  BackendConfig b;
  b.kind = BackendKind::kRemote;
  CHECK_THROWS_AS(make_backend(b), ConfigError);
}

TEST_CASE("evaluate with empty predictions") {
  TempDir dir("evempty");
  write_docs(dir / "in.jsonl", three_docs());
  cmd_generate_dataset(default_config(), dir / "in.jsonl", dir / "out");
  { std::ofstream(dir / "pred.jsonl"); }
  std::ostringstream log;
  auto r = cmd_evaluate(default_config(), dir / "pred.jsonl", dir / "out/gold.jsonl", "",
                        nullptr, &log);
  CHECK(*r.em == doctest::Approx(*r.answerability_accuracy));
  std::ifstream in(dir / "out/gold.jsonl");
  auto gold = read_records(in);
  std::size_t unanswerable = 0;
  for (const auto& g : gold) unanswerable += !g.value.answerable;
  CHECK(*r.answerability_accuracy ==
        doctest::Approx(static_cast<double>(unanswerable) / gold.size()));
  CHECK(log.str().find("missing-predictions") != std::string::npos);
}

TEST_CASE("inspect marks spans") {
  TempDir dir("inspect");
  write_docs(dir / "in.jsonl", three_docs());
  auto cfg = default_config();
  cfg.ratios = {1, 0, 0};
  cmd_generate_dataset(cfg, dir / "in.jsonl", dir / "out");
  auto ex = read_squad(dir / "out/train.json");
  const QAExample* ans = nullptr;
  const QAExample* imp = nullptr;
  for (const auto& e : ex) {
    if (!e.is_impossible && !ans) ans = &e;
    if (e.kind == ExampleKind::kConstructed && !imp) imp = &e;
  }
  REQUIRE(ans != nullptr);
  REQUIRE(imp != nullptr);

  auto a = cmd_inspect(dir / "out/train.json", ans->qid);
  CHECK(a.find("[[" + ans->answers[0].text + "]]") != std::string::npos);
  CHECK(a.find("[[") == a.rfind("[["));
  CHECK(a.find("{{") == std::string::npos);
  CHECK(a.find(ans->doc_id) != std::string::npos);
  CHECK(a.find(ans->template_id) != std::string::npos);

  auto i = cmd_inspect(dir / "out/train.json", imp->qid);
  CHECK(i.find("{{" + imp->plausible_answers[0].text + "}}") != std::string::npos);
  CHECK(i.find("[[") == std::string::npos);

  CHECK_THROWS_AS(cmd_inspect(dir / "out/train.json", "nope"), NotFoundError);
}

TEST_CASE("delta grid") {
  auto g = delta_grid(-1, 1, 5);
  CHECK(g == std::vector<double>{-1, -0.5, 0, 0.5, 1});
  CHECK(delta_grid(0, 0, 1) == std::vector<double>{0});
  CHECK_THROWS_AS(delta_grid(1, -1, 3), ConfigError);
}

TEST_CASE("sweep over noisy outputs") {
  TempDir dir("sweep");
  write_docs(dir / "in.jsonl", synthesize_corpus({20, 8, 0.5}));
  auto cfg = synthetic_config();
  cfg.ratios = {0, 1, 0};
  cfg.backend.kind = BackendKind::kNoisyOracle;
  cfg.backend.noise = {2, 0.1, 0.0};
  cmd_generate_dataset(cfg, dir / "in.jsonl", dir / "out");
  auto grid = delta_grid(-2, 2, 21);
  grid.insert(grid.begin(), -std::numeric_limits<double>::infinity());
  grid.push_back(std::numeric_limits<double>::infinity());
  std::ostringstream table;
  auto points = cmd_sweep_threshold(cfg, dir / "out/dev.json", grid, &table);
  REQUIRE(points.size() == 23);
  const auto n = count_qas(dir / "out/dev.json");
  CHECK(points.front().answerable == 0);
  CHECK(points.back().answerable == n);
  for (std::size_t i = 1; i < points.size(); ++i) {
    CHECK(points[i - 1].answerable <= points[i].answerable);
  }
  CHECK(table.str().find("accuracy") != std::string::npos);
}

}  // namespace
}  // namespace ehrqa
