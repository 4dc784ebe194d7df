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

#ifndef EHRQA_SQUAD_H_
#define EHRQA_SQUAD_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "ehrqa/preprocess.h"

namespace ehrqa {

// SQuAD-2.0 layout. Consecutive examples sharing a doc_id become one data
// entry and consecutive examples sharing a context become one paragraph, so
// reading the document back yields the same list in the same order.
// Provenance travels as extra qas fields that SQuAD readers ignore.
nlohmann::json to_squad(const std::vector<QAExample>& examples);
std::vector<QAExample> from_squad(const nlohmann::json& doc);

// Throws ehrqa::Error when the path cannot be written or read.
void emit_squad(const std::vector<QAExample>& examples, const std::string& path);
std::vector<QAExample> read_squad(const std::string& path);

}  // namespace ehrqa

#endif  // EHRQA_SQUAD_H_
