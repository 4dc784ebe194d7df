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

#ifndef EHRQA_CONFIG_H_
#define EHRQA_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "ehrqa/annotation.h"
#include "ehrqa/oracle.h"
#include "ehrqa/postprocess.h"
#include "ehrqa/preprocess.h"
#include "ehrqa/templates.h"

namespace ehrqa {

enum class BackendKind { kOracle, kNoisyOracle, kRemote };

std::string to_string(BackendKind k);
BackendKind parse_backend_kind(std::string_view s);

struct BackendConfig {
  BackendKind kind = BackendKind::kOracle;
  NoiseConfig noise;
  std::uint64_t seed = 7;
  std::string endpoint;
  int timeout_ms = 30000;
  int max_attempts = 3;

  friend bool operator==(const BackendConfig&, const BackendConfig&) = default;
};

// Everything tunable in one place.
struct PipelineConfig {
  TypeRegistry types;
  TemplateRegistry templates;
  // Text options (delimiters, bridge characters, ablation switches) live in
  // extraction.text and are shared with dataset generation.
  ExtractionOptions extraction;
  SplitRatios ratios{0.8, 0.1, 0.1};
  std::uint64_t split_seed = 13;
  std::vector<std::string> negation_lexicon;
  BackendConfig backend;
  int workers = 1;

  const PreprocessOptions& text() const { return extraction.text; }
  PreprocessOptions& text() { return extraction.text; }

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

// Throws ConfigError on any violated invariant: ratio sum, finite delta,
// template/type consistency, remote backend without endpoint, ...
void check_config(const PipelineConfig& cfg);

// Missing keys keep their defaults. Throws ConfigError on malformed values.
PipelineConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const PipelineConfig& cfg);

PipelineConfig load_config(const std::string& path);
void save_config(const PipelineConfig& cfg, const std::string& path);

// English demo registry with the default text options.
PipelineConfig default_config();

// Environment variable naming the default config file.
inline constexpr const char* kConfigEnvVar = "EHRQA_CONFIG";

// `path` when non-empty, else $EHRQA_CONFIG when set, else default_config().
PipelineConfig resolve_config(const std::string& path);

}  // namespace ehrqa

#endif  // EHRQA_CONFIG_H_
