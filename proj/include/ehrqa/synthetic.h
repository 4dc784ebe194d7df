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

#ifndef EHRQA_SYNTHETIC_H_
#define EHRQA_SYNTHETIC_H_

#include <cstdint>
#include <vector>

#include "ehrqa/annotation.h"
#include "ehrqa/config.h"

namespace ehrqa {

struct SynthOptions {
  std::size_t num_docs = 60;
  std::uint64_t seed = 2024;
  // Share of CT reports; the rest are family histories.
  double ct_fraction = 0.6;
};

// Annotated Chinese-style clinical corpus: CT reports whose body parts own
// adjacent abnormalities ("积液、积气") and abnormalities in later
// sentences, and family histories with members and diseases. Every sentence
// holds at most one group per entity type, and no entity text repeats inside
// a document.
std::vector<AnnotatedDocument> synthesize_corpus(const SynthOptions& opts);

// Chinese template registry and lexicons matching synthesize_corpus.
PipelineConfig synthetic_config();

}  // namespace ehrqa

#endif  // EHRQA_SYNTHETIC_H_
