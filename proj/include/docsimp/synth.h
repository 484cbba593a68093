// Copyright 2026 The docsimp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded synthetic corpora for smoke tests, benchmarks and demos: document
// pairs with annotations on their alignment sequences, and page histories
// for revision matching. Output depends only on the config (and the
// standard library's distributions).

#ifndef DOCSIMP_SYNTH_H_
#define DOCSIMP_SYNTH_H_

#include <cstdint>
#include <vector>

#include "docsimp/core.h"
#include "docsimp/corpus.h"

namespace docsimp {

struct SynthConfig {
  std::size_t pairs = 50;
  std::uint32_t seed = 1;
  std::size_t min_sentences = 1;
  std::size_t max_sentences = 4;
  // Share of pairs that get a second annotator, whose labels disagree on
  // some groups.
  double overlap = 0.2;
  double second_annotator_noise = 0.25;
};

struct SynthCorpus {
  std::vector<PairRecord> pairs;
  std::vector<AlignmentSequence> sequences;
  // Annotator "a1" on every pair, "a2" on the overlap; valid for the
  // sequences above.
  std::vector<AnnotationRecord> annotations;
};

// Throws InputError on an empty sentence range or an overlap outside [0, 1].
SynthCorpus generate_corpus(const SynthConfig& cfg);

struct SynthHistoryConfig {
  std::size_t pages = 5;
  std::size_t complex_revisions = 12;
  std::size_t simple_revisions = 4;
  std::uint32_t seed = 1;
};

// Each simple revision rewrites whichever complex revision was current just
// before it, so every simple revision has a true partner.
std::vector<PageHistory> generate_histories(const SynthHistoryConfig& cfg);

}  // namespace docsimp

#endif  // DOCSIMP_SYNTH_H_
