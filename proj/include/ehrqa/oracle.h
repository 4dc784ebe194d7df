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

#ifndef EHRQA_ORACLE_H_
#define EHRQA_ORACLE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>

#include "ehrqa/preprocess.h"
#include "ehrqa/reader.h"

namespace ehrqa {

// Reads the gold answer back as one-hot distributions over
// character-per-token positions: character i is position i + 1.
// Throws OracleMisuseError when qid or context disagree with the gold.
ReaderOutput oracle_read(const ReaderInput& in, const QAExample& gold);

struct NoiseConfig {
  int boundary_jitter = 0;  // characters, uniform in [-j, j]
  double flip_prob = 0.0;   // chance to flip the answerability verdict
  double temperature = 0.0; // 0 keeps exact one-hots

  friend bool operator==(const NoiseConfig&, const NoiseConfig&) = default;
};

// Throws ConfigError on negative jitter, flip_prob outside [0,1] or negative
// temperature.
void check_noise(const NoiseConfig& noise);

// Oracle output perturbed by boundary jitter, answerability flips and
// softening. Deterministic in (seed, qid).
ReaderOutput noisy_oracle_read(const ReaderInput& in, const QAExample& gold,
                               const NoiseConfig& noise, std::uint64_t seed);

// Backend over registered gold examples, keyed by qid. With noise set it
// behaves as the noisy oracle.
class OracleBackend : public ReaderBackend {
 public:
  OracleBackend() = default;
  OracleBackend(NoiseConfig noise, std::uint64_t seed);

  std::vector<ReaderOutput> read(std::span<const ReaderInput> batch) override;
  bool needs_gold() const override { return true; }
  void add_gold(const QAExample& gold) override;

 private:
  std::optional<NoiseConfig> noise_;
  std::uint64_t seed_ = 0;
  std::unordered_map<std::string, QAExample> gold_;
};

}  // namespace ehrqa

#endif  // EHRQA_ORACLE_H_
