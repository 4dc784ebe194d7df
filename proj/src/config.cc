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

#include "ehrqa/config.h"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include "ehrqa/errors.h"

namespace ehrqa {
namespace {

using nlohmann::json;

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

void read_chars(const json& j, const char* key, CharSet& out) {
  std::string s;
  if (!j.contains(key)) return;
  read(j, key, s);
  out = utf8::to_charset(s);
}

}  // namespace

std::string to_string(BackendKind k) {
  switch (k) {
    case BackendKind::kOracle:
      return "oracle";
    case BackendKind::kNoisyOracle:
      return "noisy-oracle";
    case BackendKind::kRemote:
      return "remote";
  }
  return "?";
}

BackendKind parse_backend_kind(std::string_view s) {
  if (s == "oracle") return BackendKind::kOracle;
  if (s == "noisy-oracle") return BackendKind::kNoisyOracle;
  if (s == "remote") return BackendKind::kRemote;
  throw ConfigError("unknown backend '" + std::string(s) + "'");
}

void check_config(const PipelineConfig& cfg) {
  check_ratios(cfg.ratios);
  check_verifier(cfg.extraction.verifier);
  if (!std::isfinite(cfg.extraction.verifier.delta)) {
    throw ConfigError("verifier.delta must be finite");
  }
  cfg.templates.check_against(cfg.types);
  check_noise(cfg.backend.noise);
  if (cfg.backend.kind == BackendKind::kRemote && cfg.backend.endpoint.empty()) {
    throw ConfigError("remote backend selected but no endpoint configured");
  }
  if (cfg.backend.max_attempts < 1) throw ConfigError("backend.max_attempts must be >= 1");
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  const auto& t = cfg.extraction.text;
  if (!(t.natural_empty_fraction >= 0.0 && t.natural_empty_fraction <= 1.0)) {
    throw ConfigError("natural_empty_fraction outside [0,1]");
  }
  if (t.sentence_delimiters.empty()) throw ConfigError("no sentence delimiters");
}

PipelineConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  PipelineConfig cfg = default_config();

  if (j.contains("entity_types") || j.contains("ner_queryable_types") ||
      j.contains("relation_classes")) {
    std::set<std::string> types = cfg.types.entity_types();
    std::set<std::string> queryable = cfg.types.ner_queryable_types();
    std::vector<std::string> classes;
    for (const auto& rc : cfg.types.relation_classes()) classes.push_back(rc.name());
    read(j, "entity_types", types);
    read(j, "ner_queryable_types", queryable);
    read(j, "relation_classes", classes);
    std::set<RelationClass> rcs;
    for (const auto& name : classes) rcs.insert(parse_relation_class(name));
    cfg.types = TypeRegistry(std::move(types), std::move(queryable), std::move(rcs));
  }
  if (j.contains("templates")) {
    std::vector<QuestionTemplate> templates;
    for (const auto& t : j.at("templates")) {
      try {
        templates.push_back({t.at("template_id").get<std::string>(),
                             t.at("relation_class").get<std::string>(),
                             parse_direction(t.at("direction").get<std::string>()),
                             t.at("pattern").get<std::string>()});
      } catch (const json::exception& e) {
        throw ConfigError(std::string("templates: ") + e.what());
      }
    }
    cfg.templates = TemplateRegistry(std::move(templates));
  }

  PreprocessOptions& text = cfg.text();
  read_chars(j, "sentence_delimiters", text.sentence_delimiters);
  read_chars(j, "bridge_chars", text.bridge_chars);
  read_chars(j, "clause_delimiters", text.clause_delimiters);
  read(j, "enable_splitting", text.enable_splitting);
  read(j, "enable_plausible_answers", text.enable_plausible_answers);
  read(j, "include_natural_empties", text.include_natural_empties);
  read(j, "natural_empty_fraction", text.natural_empty_fraction);
  read(j, "preprocess_seed", text.seed);
  read(j, "separator", cfg.extraction.separator);
  read(j, "doc_kind_templates", cfg.extraction.doc_kind_templates);
  read(j, "fill_lexicon", cfg.extraction.fill_lexicon);

  if (j.contains("split")) {
    const json& s = j.at("split");
    read(s, "ratios", cfg.ratios);
    read(s, "seed", cfg.split_seed);
  }
  if (j.contains("verifier")) {
    const json& v = j.at("verifier");
    VerifierConfig& vc = cfg.extraction.verifier;
    read(v, "beta1", vc.beta1);
    read(v, "beta2", vc.beta2);
    read(v, "delta", vc.delta);
    read(v, "max_answer_chars", vc.max_answer_chars);
    read(v, "strict_order", vc.strict_order);
    if (v.contains("polarity")) vc.polarity = parse_polarity(v.at("polarity").get<std::string>());
  }
  read(j, "negation_lexicon", cfg.negation_lexicon);
  if (j.contains("backend")) {
    const json& b = j.at("backend");
    if (b.contains("kind")) cfg.backend.kind = parse_backend_kind(b.at("kind").get<std::string>());
    if (b.contains("noise")) {
      const json& n = b.at("noise");
      read(n, "boundary_jitter", cfg.backend.noise.boundary_jitter);
      read(n, "flip_prob", cfg.backend.noise.flip_prob);
      read(n, "temperature", cfg.backend.noise.temperature);
    }
    read(b, "seed", cfg.backend.seed);
    read(b, "endpoint", cfg.backend.endpoint);
    read(b, "timeout_ms", cfg.backend.timeout_ms);
    read(b, "max_attempts", cfg.backend.max_attempts);
  }
  read(j, "workers", cfg.workers);
  check_config(cfg);
  return cfg;
}

json config_to_json(const PipelineConfig& cfg) {
  json templates = json::array();
  for (const auto& t : cfg.templates.all()) {
    templates.push_back({{"template_id", t.template_id},
                         {"relation_class", t.relation_class},
                         {"direction", to_string(t.direction)},
                         {"pattern", t.pattern}});
  }
  std::vector<std::string> classes;
  for (const auto& rc : cfg.types.relation_classes()) classes.push_back(rc.name());
  const PreprocessOptions& text = cfg.text();
  const VerifierConfig& v = cfg.extraction.verifier;
  return {
      {"entity_types", cfg.types.entity_types()},
      {"ner_queryable_types", cfg.types.ner_queryable_types()},
      {"relation_classes", classes},
      {"templates", std::move(templates)},
      {"sentence_delimiters", utf8::from_charset(text.sentence_delimiters)},
      {"bridge_chars", utf8::from_charset(text.bridge_chars)},
      {"clause_delimiters", utf8::from_charset(text.clause_delimiters)},
      {"enable_splitting", text.enable_splitting},
      {"enable_plausible_answers", text.enable_plausible_answers},
      {"include_natural_empties", text.include_natural_empties},
      {"natural_empty_fraction", text.natural_empty_fraction},
      {"preprocess_seed", text.seed},
      {"separator", cfg.extraction.separator},
      {"doc_kind_templates", cfg.extraction.doc_kind_templates},
      {"fill_lexicon", cfg.extraction.fill_lexicon},
      {"split", {{"ratios", cfg.ratios}, {"seed", cfg.split_seed}}},
      {"verifier",
       {{"beta1", v.beta1},
        {"beta2", v.beta2},
        {"delta", v.delta},
        {"polarity", to_string(v.polarity)},
        {"max_answer_chars", v.max_answer_chars},
        {"strict_order", v.strict_order}}},
      {"negation_lexicon", cfg.negation_lexicon},
      {"backend",
       {{"kind", to_string(cfg.backend.kind)},
        {"noise",
         {{"boundary_jitter", cfg.backend.noise.boundary_jitter},
          {"flip_prob", cfg.backend.noise.flip_prob},
          {"temperature", cfg.backend.noise.temperature}}},
        {"seed", cfg.backend.seed},
        {"endpoint", cfg.backend.endpoint},
        {"timeout_ms", cfg.backend.timeout_ms},
        {"max_attempts", cfg.backend.max_attempts}}},
      {"workers", cfg.workers},
  };
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

void save_config(const PipelineConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << config_to_json(cfg).dump(2) << '\n';
}

PipelineConfig default_config() {
  PipelineConfig cfg;
  cfg.types = TypeRegistry(
      {"family_member", "disease", "body_part", "abnormality"},
      {"disease", "body_part", "abnormality"},
      {{"family_member", "disease"}, {"body_part", "abnormality"}});
  using D = Direction;
  cfg.templates = TemplateRegistry({
      {"fd_right_1", "family_member-disease", D::kQueryRight,
       "What disease has the patient's {X} suffered from?"},
      {"fd_right_2", "family_member-disease", D::kQueryRight,
       "Which illness was the patient's {X} diagnosed with?"},
      {"fd_left_1", "family_member-disease", D::kQueryLeft,
       "Which family member of the patient has suffered from {X}?"},
      {"fd_left_2", "family_member-disease", D::kQueryLeft,
       "Who in the patient's family had {X}?"},
      {"ba_right_1", "body_part-abnormality", D::kQueryRight,
       "What abnormalities are there in the {X} of the patient?"},
      {"ba_right_2", "body_part-abnormality", D::kQueryRight,
       "What is abnormal about the patient's {X}?"},
      {"ba_left_1", "body_part-abnormality", D::kQueryLeft, "Where is the {X} found?"},
      {"ner_disease", "disease", D::kNer, "What disease does the patient have?"},
      {"ner_abnormality", "abnormality", D::kNer, "What abnormality does the patient have?"},
      {"ner_body_part", "body_part", D::kNer, "Which body parts are mentioned?"},
  });
  cfg.negation_lexicon = {"no", "denies", "denied", "negative", "without",
                          "无", "否认", "未见", "阴性", "不"};
  cfg.extraction.fill_lexicon = {
      {"family_member", {"mother", "father", "brother", "sister"}}};
  return cfg;
}

PipelineConfig resolve_config(const std::string& path) {
  if (!path.empty()) return load_config(path);
  if (const char* env = std::getenv(kConfigEnvVar); env != nullptr && *env != '\0') {
    return load_config(env);
  }
  return default_config();
}

}  // namespace ehrqa
