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

// Random generators for property-style tests.

#ifndef DOCSIMP_TESTS_GENERATORS_H_
#define DOCSIMP_TESTS_GENERATORS_H_

#include <random>
#include <string>
#include <vector>

#include "docsimp/core.h"

namespace gen {

inline int uniform(std::mt19937& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool coin(std::mt19937& rng, double p = 0.5) {
  return std::bernoulli_distribution(p)(rng);
}

// Vocabulary mixes words with punctuation tokens, including the angle
// brackets that appear next to markup tags.
inline docsimp::Token word(std::mt19937& rng, int vocab) {
  static const char* kPunct[] = {".", ",", "(", ")", "<", ">", ";", "\""};
  int v = uniform(rng, 0, vocab - 1);
  if (v % 7 == 6) return docsimp::Token(kPunct[v % 8]);
  return docsimp::Token("w" + std::to_string(v));
}

inline std::vector<docsimp::Token> random_tokens(std::mt19937& rng, int min_len, int max_len,
                                                 int vocab) {
  int n = uniform(rng, min_len, max_len);
  std::vector<docsimp::Token> out;
  for (int i = 0; i < n; ++i) out.push_back(word(rng, vocab));
  return out;
}

// Applies random span deletions, insertions and replacements.
inline std::vector<docsimp::Token> mutate_tokens(std::mt19937& rng,
                                                 const std::vector<docsimp::Token>& in,
                                                 int vocab) {
  std::vector<docsimp::Token> out;
  std::size_t i = 0;
  while (i < in.size()) {
    int r = uniform(rng, 0, 9);
    if (r == 0) {
      i += uniform(rng, 1, 4);  // delete a span
    } else if (r == 1) {
      for (int k = uniform(rng, 1, 3); k > 0; --k) out.push_back(word(rng, vocab));
    } else if (r == 2) {
      out.push_back(word(rng, vocab));
      ++i;
    } else {
      out.push_back(in[i++]);
    }
  }
  if (coin(rng, 0.2)) out.push_back(word(rng, vocab));
  return out;
}

// Random well-formed sequence (alternating kinds, non-empty tokens).
inline docsimp::AlignmentSequence random_sequence(std::mt19937& rng, const std::string& pair_id,
                                                  int max_ops) {
  std::vector<docsimp::EditOperation> ops;
  int n = uniform(rng, 0, max_ops);
  docsimp::OpKind prev = docsimp::OpKind::kKeep;
  for (int i = 0; i < n; ++i) {
    docsimp::OpKind kind;
    do {
      kind = static_cast<docsimp::OpKind>(uniform(rng, 0, 2));
    } while (i > 0 && kind == prev);
    prev = kind;
    docsimp::EditOperation op;
    op.kind = kind;
    op.tokens = random_tokens(rng, 1, 4, 40);
    ops.push_back(std::move(op));
  }
  return docsimp::AlignmentSequence(pair_id, std::move(ops));
}

}  // namespace gen

#endif  // DOCSIMP_TESTS_GENERATORS_H_
