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

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "support.h"

#include "ehrqa/config.h"
#include "ehrqa/squad.h"

namespace ehrqa {
namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("ehrqa_squad_" + name)).string();
}

std::vector<QAExample> fixture_examples() {
  auto cfg = default_config();
  return assemble_dataset({testing::ct_fixture(), testing::family_fixture()}, cfg.types,
                          cfg.templates, cfg.text());
}

TEST_CASE("empty list") {
  auto j = to_squad({});
  CHECK(j["version"] == "v2.0");
  CHECK(j["data"].is_array());
  CHECK(j["data"].empty());
  const auto path = temp_path("empty.json");
  emit_squad({}, path);
  CHECK(read_squad(path).empty());
  std::remove(path.c_str());
}

TEST_CASE("answerable and impossible shapes") {
  auto ex = fixture_examples();
  auto j = to_squad(ex);
  bool saw_answerable = false, saw_impossible = false;
  for (const auto& doc : j["data"]) {
    for (const auto& para : doc["paragraphs"]) {
      for (const auto& qa : para["qas"]) {
        if (qa["is_impossible"].get<bool>()) {
          saw_impossible = true;
          CHECK(qa["answers"].empty());
          CHECK_FALSE(qa["plausible_answers"].empty());
        } else {
          saw_answerable = true;
          REQUIRE(qa["answers"].size() == 1);
          CHECK(qa["answers"][0].contains("text"));
          CHECK(qa["answers"][0].contains("answer_start"));
          CHECK_FALSE(qa.contains("plausible_answers"));
        }
        CHECK(qa.contains("id"));
        CHECK(qa.contains("question"));
      }
    }
  }
  CHECK(saw_answerable);
  CHECK(saw_impossible);
}

TEST_CASE("round trip is value identical") {
  auto ex = fixture_examples();
  CHECK(from_squad(to_squad(ex)) == ex);
  const auto path = temp_path("rt.json");
  emit_squad(ex, path);
  CHECK(read_squad(path) == ex);
  std::remove(path.c_str());
}

TEST_CASE("malformed squad input") {
  CHECK_THROWS_AS(from_squad(nlohmann::json::object()), Error);
  CHECK_THROWS_AS(read_squad(temp_path("missing.json")), Error);
}

}  // namespace
}  // namespace ehrqa
