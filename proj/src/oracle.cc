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

#include "ehrqa/oracle.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "ehrqa/hash.h"

namespace ehrqa {
namespace {

void check_pairing(const ReaderInput& in, const QAExample& gold) {
  if (in.qid != gold.qid) {
    throw OracleMisuseError("oracle input '" + in.qid + "' paired with gold '" +
                            gold.qid + "'");
  }
  if (in.context != gold.context) {
    throw OracleMisuseError("oracle input '" + in.qid +
                            "' context differs from its gold context");
  }
}

std::vector<Span> char_offsets(std::size_t n) {
  std::vector<Span> offsets(n);
  for (std::size_t i = 0; i < n; ++i) offsets[i] = {i, i + 1};
  return offsets;
}

// Softmax of a one-hot scaled by 1/temperature; exact one-hot at 0.
std::vector<double> soften(std::size_t size, std::size_t hot, double temperature) {
  std::vector<double> p(size, 0.0);
  if (temperature <= 0.0) {
    p[hot] = 1.0;
    return p;
  }
  const double off = std::exp(-1.0 / temperature);
  const double z = 1.0 + off * static_cast<double>(size - 1);
  std::fill(p.begin(), p.end(), off / z);
  p[hot] = 1.0 / z;
  return p;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

ReaderOutput build(const ReaderInput& in, std::size_t n,
                   std::optional<Span> answer, double temperature) {
  ReaderOutput out;
  out.qid = in.qid;
  out.offsets = char_offsets(n);
  const std::size_t start_pos = answer ? answer->start + 1 : 0;
  const std::size_t end_pos = answer ? answer->end : 0;
  out.start_probs = soften(n + 1, start_pos, temperature);
  out.end_probs = soften(n + 1, end_pos, temperature);
  if (temperature <= 0.0) {
    out.no_answer_prob = answer ? 0.0 : 1.0;
  } else {
    out.no_answer_prob = sigmoid((answer ? -1.0 : 1.0) / temperature);
  }
  return out;
}

std::optional<Span> gold_span(const QAExample& gold) {
  if (gold.is_impossible || gold.answers.empty()) return std::nullopt;
  const AnswerText& a = gold.answers.front();
  return Span{a.answer_start, a.answer_start + utf8::length(a.text)};
}

}  // namespace

ReaderOutput oracle_read(const ReaderInput& in, const QAExample& gold) {
  check_pairing(in, gold);
  return build(in, utf8::length(in.context), gold_span(gold), 0.0);
}

void check_noise(const NoiseConfig& noise) {
  if (noise.boundary_jitter < 0) throw ConfigError("boundary_jitter is negative");
  if (!(noise.flip_prob >= 0.0 && noise.flip_prob <= 1.0)) {
    throw ConfigError("flip_prob outside [0,1]");
  }
  if (!(noise.temperature >= 0.0) || !std::isfinite(noise.temperature)) {
    throw ConfigError("temperature must be finite and non-negative");
  }
}

ReaderOutput noisy_oracle_read(const ReaderInput& in, const QAExample& gold,
                               const NoiseConfig& noise, std::uint64_t seed) {
  check_pairing(in, gold);
  check_noise(noise);
  const std::size_t n = utf8::length(in.context);
  std::mt19937_64 rng(stable_hash({std::to_string(seed), in.qid}));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::optional<Span> answer = gold_span(gold);
  const bool flip = unit(rng) < noise.flip_prob;
  if (flip && answer) {
    answer.reset();
  } else if (flip && n > 0) {
    // A wrong answer: the first plausible answer if any, else a short random
    // stretch of the context.
    if (!gold.plausible_answers.empty()) {
      const AnswerText& p = gold.plausible_answers.front();
      answer = Span{p.answer_start, p.answer_start + utf8::length(p.text)};
    } else {
      std::uniform_int_distribution<std::size_t> pos(0, n - 1);
      const std::size_t start = pos(rng);
      std::uniform_int_distribution<std::size_t> len(1, std::min<std::size_t>(4, n - start));
      answer = Span{start, start + len(rng)};
    }
  } else if (answer && noise.boundary_jitter > 0) {
    std::uniform_int_distribution<int> jitter(-noise.boundary_jitter,
                                              noise.boundary_jitter);
    const auto shift = [&](std::size_t v) {
      const long moved = static_cast<long>(v) + jitter(rng);
      return static_cast<std::size_t>(std::clamp<long>(moved, 0, static_cast<long>(n)));
    };
    std::size_t start = std::min(shift(answer->start), n - 1);
    std::size_t end = shift(answer->end);
    if (end <= start) end = start + 1;
    answer = Span{start, end};
  }
  return build(in, n, answer, noise.temperature);
}

OracleBackend::OracleBackend(NoiseConfig noise, std::uint64_t seed)
    : noise_(noise), seed_(seed) {
  check_noise(noise);
}

void OracleBackend::add_gold(const QAExample& gold) { gold_[gold.qid] = gold; }

std::vector<ReaderOutput> OracleBackend::read(std::span<const ReaderInput> batch) {
  std::vector<ReaderOutput> out;
  out.reserve(batch.size());
  for (const ReaderInput& in : batch) {
    auto it = gold_.find(in.qid);
    if (it == gold_.end()) {
      throw OracleMisuseError("no gold registered for '" + in.qid + "'");
    }
    out.push_back(noise_ ? noisy_oracle_read(in, it->second, *noise_, seed_)
                         : oracle_read(in, it->second));
  }
  return out;
}

}  // namespace ehrqa
