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

#ifndef EHRQA_READER_H_
#define EHRQA_READER_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "ehrqa/span.h"

namespace ehrqa {

struct QAExample;

struct ReaderInput {
  std::string qid;
  std::string question;
  std::string context;

  friend bool operator==(const ReaderInput&, const ReaderInput&) = default;
};

// Probabilities over positions 0..n. Position 0 is the null sentinel;
// positions 1..n are context tokens whose character intervals are
// offsets[0..n-1].
struct ReaderOutput {
  std::string qid;
  double no_answer_prob = 0.0;
  std::vector<double> start_probs;
  std::vector<double> end_probs;
  std::vector<Span> offsets;

  std::size_t num_tokens() const { return offsets.size(); }

  friend bool operator==(const ReaderOutput&, const ReaderOutput&) = default;
};

inline constexpr double kSimplexTolerance = 1e-6;

// Throws ProtocolError naming `<prefix>.<field>` on the first violated
// invariant. When `context_length` is given, offsets must also fit in it.
void validate_output(const ReaderOutput& out, const std::string& prefix = "output",
                     std::optional<std::size_t> context_length = std::nullopt);

nlohmann::json to_json(const ReaderInput& in);
nlohmann::json to_json(const ReaderOutput& out);
// Structural problems throw ProtocolError naming the field. Does not check
// the probability invariants; see validate_output.
ReaderOutput reader_output_from_json(const nlohmann::json& j,
                                     const std::string& prefix = "output");
ReaderInput reader_input_from_json(const nlohmann::json& j);

// Anything that turns (question, context) pairs into reader outputs.
class ReaderBackend {
 public:
  virtual ~ReaderBackend() = default;

  // One output per input, same order.
  virtual std::vector<ReaderOutput> read(std::span<const ReaderInput> batch) = 0;

  // Oracle backends answer from gold examples registered ahead of the read.
  virtual bool needs_gold() const { return false; }
  virtual void add_gold(const QAExample& gold) { (void)gold; }
};

}  // namespace ehrqa

#endif  // EHRQA_READER_H_
