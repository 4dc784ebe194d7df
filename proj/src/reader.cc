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

#include "ehrqa/reader.h"

#include <cmath>

#include "ehrqa/errors.h"

namespace ehrqa {
namespace {

void check_distribution(const std::vector<double>& probs, const std::string& field) {
  double sum = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!std::isfinite(probs[i]) || probs[i] < 0.0) {
      throw ProtocolError(field, "entry " + std::to_string(i) +
                                     " is negative or not finite");
    }
    sum += probs[i];
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    throw ProtocolError(field, "sums to " + std::to_string(sum) + ", expected 1");
  }
}

}  // namespace

void validate_output(const ReaderOutput& out, const std::string& prefix,
                     std::optional<std::size_t> context_length) {
  if (!(out.no_answer_prob >= 0.0 && out.no_answer_prob <= 1.0)) {
    throw ProtocolError(prefix + ".no_answer_prob", "outside [0,1]");
  }
  const std::size_t n = out.offsets.size();
  if (out.start_probs.size() != n + 1) {
    throw ProtocolError(prefix + ".start_probs",
                        "length " + std::to_string(out.start_probs.size()) +
                            " does not match " + std::to_string(n) +
                            " offsets plus the null position");
  }
  if (out.end_probs.size() != n + 1) {
    throw ProtocolError(prefix + ".end_probs",
                        "length " + std::to_string(out.end_probs.size()) +
                            " does not match " + std::to_string(n) +
                            " offsets plus the null position");
  }
  check_distribution(out.start_probs, prefix + ".start_probs");
  check_distribution(out.end_probs, prefix + ".end_probs");
  for (std::size_t i = 0; i < n; ++i) {
    const Span& s = out.offsets[i];
    const std::string field = prefix + ".offsets[" + std::to_string(i) + "]";
    if (s.start >= s.end) throw ProtocolError(field, "empty or reversed interval");
    if (i > 0 && (s.start < out.offsets[i - 1].start ||
                  s.end < out.offsets[i - 1].end)) {
      throw ProtocolError(field, "offsets decrease");
    }
    if (context_length && s.end > *context_length) {
      throw ProtocolError(field, "past the end of the context");
    }
  }
}

nlohmann::json to_json(const ReaderInput& in) {
  return {{"qid", in.qid}, {"question", in.question}, {"context", in.context}};
}

nlohmann::json to_json(const ReaderOutput& out) {
  nlohmann::json offsets = nlohmann::json::array();
  for (const Span& s : out.offsets) offsets.push_back({s.start, s.end});
  return {{"qid", out.qid},
          {"no_answer_prob", out.no_answer_prob},
          {"start_probs", out.start_probs},
          {"end_probs", out.end_probs},
          {"offsets", std::move(offsets)}};
}

ReaderOutput reader_output_from_json(const nlohmann::json& j,
                                     const std::string& prefix) {
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!j.is_object() || !j.contains(key)) {
      throw ProtocolError(prefix + "." + key, "missing");
    }
    return j.at(key);
  };
  auto numbers = [&](const char* key) {
    const auto& arr = need(key);
    if (!arr.is_array()) throw ProtocolError(prefix + "." + key, "expected array");
    std::vector<double> v;
    v.reserve(arr.size());
    for (const auto& x : arr) {
      if (!x.is_number()) throw ProtocolError(prefix + "." + key, "non-numeric entry");
      v.push_back(x.get<double>());
    }
    return v;
  };

  ReaderOutput out;
  const auto& qid = need("qid");
  if (!qid.is_string()) throw ProtocolError(prefix + ".qid", "expected string");
  out.qid = qid.get<std::string>();
  const auto& p = need("no_answer_prob");
  if (!p.is_number()) throw ProtocolError(prefix + ".no_answer_prob", "expected number");
  out.no_answer_prob = p.get<double>();
  out.start_probs = numbers("start_probs");
  out.end_probs = numbers("end_probs");
  const auto& offsets = need("offsets");
  if (!offsets.is_array()) throw ProtocolError(prefix + ".offsets", "expected array");
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    const auto& pair = offsets[i];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_unsigned() ||
        !pair[1].is_number_unsigned()) {
      throw ProtocolError(prefix + ".offsets[" + std::to_string(i) + "]",
                          "expected [start, end] of non-negative integers");
    }
    out.offsets.push_back({pair[0].get<std::size_t>(), pair[1].get<std::size_t>()});
  }
  return out;
}

ReaderInput reader_input_from_json(const nlohmann::json& j) {
  return {j.at("qid").get<std::string>(), j.at("question").get<std::string>(),
          j.at("context").get<std::string>()};
}

}  // namespace ehrqa
