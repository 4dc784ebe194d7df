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

#ifndef EHRQA_TEXT_H_
#define EHRQA_TEXT_H_

// UTF-8 helpers. Every offset in this library counts Unicode scalar
// values, never bytes.

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>

namespace ehrqa {

struct Span;

using CharSet = std::set<char32_t>;

namespace utf8 {

// Throws ehrqa::Error on malformed input.
std::u32string decode(std::string_view text);
std::string encode(std::u32string_view text);
std::string encode(char32_t c);

// Number of scalar values in `text`.
std::size_t length(std::string_view text);

// Characters [span.start, span.end) of `text`. Throws InvalidSpanError when
// the span does not fit.
std::string slice(std::string_view text, const Span& span);

CharSet to_charset(std::string_view chars);
std::string from_charset(const CharSet& chars);

}  // namespace utf8
}  // namespace ehrqa

#endif  // EHRQA_TEXT_H_
