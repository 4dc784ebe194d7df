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

#include "ehrqa/verification.h"

#include <cmath>
#include <limits>

namespace ehrqa {

std::string to_string(Polarity p) {
  return p == Polarity::kNullWhenAbove ? "null-when-above" : "answer-when-above";
}

Polarity parse_polarity(std::string_view s) {
  if (s == "null-when-above") return Polarity::kNullWhenAbove;
  if (s == "answer-when-above") return Polarity::kAnswerWhenAbove;
  throw ConfigError("unknown polarity '" + std::string(s) + "'");
}

void check_verifier(const VerifierConfig& cfg) {
  if (cfg.max_answer_chars == 0) {
    throw ConfigError("max_answer_chars must be at least 1");
  }
  if (!std::isfinite(cfg.beta1) || !std::isfinite(cfg.beta2)) {
    throw ConfigError("beta weights must be finite");
  }
  if (std::isnan(cfg.delta)) throw ConfigError("delta is NaN");
}

bool is_answerable(double score_diff, double mixture, const VerifierConfig& cfg) {
  const bool above = score_diff > cfg.delta && mixture > cfg.delta;
  return cfg.polarity == Polarity::kNullWhenAbove ? !above : above;
}

VerificationScores compute_scores(const ReaderOutput& out,
                                  const VerifierConfig& cfg) {
  const std::size_t n = out.num_tokens();
  if (n == 0 || out.start_probs.size() != n + 1 || out.end_probs.size() != n + 1) {
    throw DegenerateInputError("reader output '" + out.qid +
                               "' has no scorable token positions");
  }
  VerificationScores s;
  s.score_ext = out.no_answer_prob - (1.0 - out.no_answer_prob);
  s.score_null = out.start_probs[0] + out.end_probs[0];

  // best_start tracks argmax of start_probs over the admissible k for l.
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_start = 0;
  for (std::size_t l = 1; l <= n; ++l) {
    const std::size_t k_max = cfg.strict_order ? l - 1 : l;
    if (k_max >= 1 &&
        (best_start == 0 || out.start_probs[k_max] > out.start_probs[best_start])) {
      best_start = k_max;
    }
    if (best_start == 0) continue;
    const double v = out.start_probs[best_start] + out.end_probs[l];
    if (v > best) {
      best = v;
      s.best_pair = {best_start, l};
    }
  }
  s.score_has = best;
  s.score_diff = s.score_null - s.score_has;
  s.mixture = cfg.beta1 * s.score_diff + cfg.beta2 * s.score_ext;
  s.answerable = is_answerable(s.score_diff, s.mixture, cfg);
  return s;
}

std::optional<Span> decode_span(const ReaderOutput& out, const VerifierConfig& cfg,
                                Diagnostics* diags) {
  if (!compute_scores(out, cfg).answerable) return std::nullopt;
  const std::size_t n = out.num_tokens();
  double best = -std::numeric_limits<double>::infinity();
  std::optional<std::pair<std::size_t, std::size_t>> arg;
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t l = cfg.strict_order ? k + 1 : k; l <= n; ++l) {
      const std::size_t chars = out.offsets[l - 1].end - out.offsets[k - 1].start;
      // Offsets are nondecreasing, so every later l is longer still.
      if (chars > cfg.max_answer_chars) break;
      const double v = out.start_probs[k] + out.end_probs[l];
      if (v > best) {
        best = v;
        arg = {k, l};
      }
    }
  }
  if (!arg) {
    report(diags, "no-feasible-span",
           "'" + out.qid + "': no span within " +
               std::to_string(cfg.max_answer_chars) + " characters");
    return std::nullopt;
  }
  return Span{out.offsets[arg->first - 1].start, out.offsets[arg->second - 1].end};
}

}  // namespace ehrqa
