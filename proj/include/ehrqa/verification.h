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

#ifndef EHRQA_VERIFICATION_H_
#define EHRQA_VERIFICATION_H_

#include <cstddef>
#include <optional>
#include <string>

#include "ehrqa/errors.h"
#include "ehrqa/reader.h"
#include "ehrqa/span.h"

namespace ehrqa {

enum class Polarity {
  kNullWhenAbove,    // null answer when both scores exceed delta
  kAnswerWhenAbove,  // literal prose reading: answer when both exceed delta
};

std::string to_string(Polarity p);
Polarity parse_polarity(std::string_view s);

struct VerifierConfig {
  double beta1 = 1.0;
  double beta2 = 1.0;
  double delta = 0.0;
  Polarity polarity = Polarity::kNullWhenAbove;
  std::size_t max_answer_chars = 64;
  // Require start < end strictly, excluding single-token answers.
  bool strict_order = false;

  friend bool operator==(const VerifierConfig&, const VerifierConfig&) = default;
};

// Throws ConfigError for max_answer_chars == 0 or non-finite weights.
void check_verifier(const VerifierConfig& cfg);

struct VerificationScores {
  double score_ext = 0;   // 2 * no_answer_prob - 1
  double score_has = 0;   // best start+end over feasible token pairs
  double score_null = 0;  // start_probs[0] + end_probs[0]
  double score_diff = 0;  // score_null - score_has
  double mixture = 0;     // beta1 * score_diff + beta2 * score_ext
  bool answerable = false;
  // Argmax pair of score_has (1-based token positions); absent in strict
  // mode with a single token.
  std::optional<std::pair<std::size_t, std::size_t>> best_pair;
};

// Verdict from the two scores alone.
bool is_answerable(double score_diff, double mixture, const VerifierConfig& cfg);

// Rear verification. Throws DegenerateInputError when the output carries no
// tokens. Linear time: a running maximum of start_probs over k <= l.
VerificationScores compute_scores(const ReaderOutput& out,
                                  const VerifierConfig& cfg);

// Character span of the best answer, or nothing when the verdict is null or
// no token pair fits max_answer_chars (the latter reports a diagnostic).
// Ties go to the smallest start, then the smallest end.
std::optional<Span> decode_span(const ReaderOutput& out, const VerifierConfig& cfg,
                                Diagnostics* diags = nullptr);

}  // namespace ehrqa

#endif  // EHRQA_VERIFICATION_H_
