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

#include "ehrqa/span.h"

#include <algorithm>

#include "ehrqa/errors.h"

namespace ehrqa {

Span make_span(std::size_t start, std::size_t end) {
  if (start >= end) {
    throw InvalidSpanError("empty or reversed span " + to_string({start, end}));
  }
  return {start, end};
}

void check_span(const Span& span, std::size_t context_length) {
  if (span.start >= span.end || span.end > context_length) {
    throw InvalidSpanError("span " + to_string(span) +
                           " invalid for context of length " +
                           std::to_string(context_length));
  }
}

std::string to_string(const Span& span) {
  return "(" + std::to_string(span.start) + "," + std::to_string(span.end) +
         ")";
}

std::vector<Span> merge_adjacent_spans(std::vector<Span> spans,
                                       std::u32string_view context,
                                       const CharSet& bridge_chars) {
  for (const Span& s : spans) check_span(s, context.size());
  std::sort(spans.begin(), spans.end());

  std::vector<Span> merged;
  for (const Span& s : spans) {
    if (merged.empty()) {
      merged.push_back(s);
      continue;
    }
    Span& last = merged.back();
    if (s.start <= last.end) {
      last.end = std::max(last.end, s.end);
      continue;
    }
    const std::u32string_view gap =
        context.substr(last.end, s.start - last.end);
    const bool bridged = std::all_of(gap.begin(), gap.end(), [&](char32_t c) {
      return bridge_chars.count(c) > 0;
    });
    if (bridged) {
      last.end = s.end;
    } else {
      merged.push_back(s);
    }
  }
  return merged;
}

std::vector<Span> merge_adjacent_spans(std::vector<Span> spans,
                                       std::string_view context,
                                       const CharSet& bridge_chars) {
  return merge_adjacent_spans(std::move(spans), utf8::decode(context),
                              bridge_chars);
}

std::vector<Sentence> split_sentences(std::string_view text,
                                      const CharSet& delimiters) {
  const std::u32string chars = utf8::decode(text);
  std::vector<Sentence> sentences;
  std::size_t begin = 0;
  auto close = [&](std::size_t end) {
    Sentence s;
    s.index = sentences.size();
    s.span = {begin, end};
    s.text = utf8::encode(std::u32string_view(chars).substr(begin, end - begin));
    sentences.push_back(std::move(s));
    begin = end;
  };
  for (std::size_t i = 0; i < chars.size(); ++i) {
    if (delimiters.count(chars[i]) > 0) close(i + 1);
  }
  if (begin < chars.size()) close(chars.size());
  return sentences;
}

std::optional<Span> project_span(const Span& span, const Sentence& sentence) {
  if (sentence.span.contains(span)) {
    return span.shifted(-static_cast<std::ptrdiff_t>(sentence.span.start));
  }
  if (!sentence.span.overlaps(span)) return std::nullopt;
  throw BoundaryViolationError("span " + to_string(span) +
                               " straddles sentence " +
                               std::to_string(sentence.index) + " at " +
                               to_string(sentence.span));
}

}  // namespace ehrqa
