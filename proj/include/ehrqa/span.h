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

#ifndef EHRQA_SPAN_H_
#define EHRQA_SPAN_H_

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ehrqa/text.h"

namespace ehrqa {

// Half-open character interval [start, end). Empty spans do not exist:
// absence is modelled with std::optional<Span>.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  bool contains(const Span& other) const {
    return start <= other.start && other.end <= end;
  }
  bool overlaps(const Span& other) const {
    return start < other.end && other.start < end;
  }
  Span shifted(std::ptrdiff_t delta) const {
    return {static_cast<std::size_t>(static_cast<std::ptrdiff_t>(start) + delta),
            static_cast<std::size_t>(static_cast<std::ptrdiff_t>(end) + delta)};
  }

  friend auto operator<=>(const Span&, const Span&) = default;
};

// Throws InvalidSpanError unless start < end.
Span make_span(std::size_t start, std::size_t end);

// Throws InvalidSpanError unless `span` is non-empty and ends within
// `context_length`.
void check_span(const Span& span, std::size_t context_length);

std::string to_string(const Span& span);

struct Sentence {
  std::size_t index = 0;
  Span span;
  std::string text;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

// Sorts, unions overlapping spans and coalesces spans whose gap consists
// only of `bridge_chars`. Result is sorted and pairwise disjoint.
std::vector<Span> merge_adjacent_spans(std::vector<Span> spans,
                                       std::u32string_view context,
                                       const CharSet& bridge_chars);
std::vector<Span> merge_adjacent_spans(std::vector<Span> spans,
                                       std::string_view context,
                                       const CharSet& bridge_chars);

// Each delimiter closes the sentence it terminates; trailing text without a
// delimiter forms the last sentence. The spans tile the text exactly.
std::vector<Sentence> split_sentences(std::string_view text,
                                      const CharSet& delimiters);

// Rebases a document span into sentence-local coordinates. Returns nothing
// when the span is outside the sentence and throws BoundaryViolationError
// when it straddles the sentence boundary.
std::optional<Span> project_span(const Span& span, const Sentence& sentence);

}  // namespace ehrqa

#endif  // EHRQA_SPAN_H_
