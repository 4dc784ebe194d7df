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

#ifndef EHRQA_HASH_H_
#define EHRQA_HASH_H_

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

namespace ehrqa {

// 64-bit FNV-1a. Stable across platforms and runs; used for qids, split
// assignment and per-item seeds.
inline std::uint64_t fnv1a(std::string_view bytes,
                           std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Hash of a field tuple; fields are separated by a unit-separator byte so
// ("ab","c") and ("a","bc") differ.
inline std::uint64_t stable_hash(std::initializer_list<std::string_view> fields) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::string_view f : fields) {
    h = fnv1a(f, h);
    h = fnv1a("\x1f", h);
  }
  return h;
}

inline std::string to_hex(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = kDigits[v & 0xF];
    v >>= 4;
  }
  return out;
}

}  // namespace ehrqa

#endif  // EHRQA_HASH_H_
