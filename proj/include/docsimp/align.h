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

// Tokenization, minimum edit alignment of a document pair and the inline
// <INS>/<DEL> markup used to exchange alignment sequences as text.

#ifndef DOCSIMP_ALIGN_H_
#define DOCSIMP_ALIGN_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "docsimp/core.h"

namespace docsimp {

enum class Granularity { kToken, kCharacter };

struct AlignmentConfig {
  Granularity granularity = Granularity::kToken;
};

// Splits on whitespace, then peels leading and trailing ASCII punctuation off
// each chunk one character at a time. Interior punctuation stays attached,
// so "0.001" and "10-6" are single tokens.
std::vector<Token> tokenize(std::string_view text);

// One token per UTF-8 code point, whitespace dropped.
std::vector<Token> tokenize_characters(std::string_view text);

std::string detokenize(std::span<const Token> tokens);

// detokenize(tokenize(text)): whitespace collapsed to single spaces and
// punctuation separated.
std::string normalize(std::string_view text);

// Minimum insert/delete alignment (unit costs, no substitution). Among
// optimal paths the backtrace prefers keep, then delete, then insert; within
// a gap between two kept runs the insertion is emitted before the deletion.
AlignmentSequence align(std::span<const Token> complex, std::span<const Token> simple,
                        const AlignmentConfig& cfg = {}, std::string pair_id = {});

AlignmentSequence align_texts(std::string_view complex, std::string_view simple,
                              const AlignmentConfig& cfg = {}, std::string pair_id = {});

std::vector<Token> source_tokens(const AlignmentSequence& seq);
std::vector<Token> target_tokens(const AlignmentSequence& seq);
std::string reconstruct_source(const AlignmentSequence& seq);
std::string reconstruct_target(const AlignmentSequence& seq);

// Number of inserted plus deleted tokens.
std::size_t edit_cost(const AlignmentSequence& seq);

// "keep <INS>ins tokens</INS> <DEL>del tokens</DEL> keep", operations joined
// by single spaces.
std::string serialize_markup(const AlignmentSequence& seq);

// Inverse of serialize_markup. Throws ParseError (with byte offset) on
// unclosed, unopened, mismatched, nested or empty tags.
AlignmentSequence parse_markup(std::string_view text, std::string pair_id = {});

// Lower level markup scanner shared with the tagged (category/BI) format.
// In plain mode only <INS> and <DEL> open an operation. In tagged mode an
// operation may instead be opened by one or more "<label>" tags, whose raw
// labels are returned; the closing tag then decides the operation kind.
struct MarkupOp {
  OpKind kind = OpKind::kKeep;
  std::vector<std::string> labels;
  std::vector<Token> tokens;
  std::size_t offset = 0;  // byte offset where the operation starts
};
std::vector<MarkupOp> scan_markup(std::string_view text, bool tagged);

}  // namespace docsimp

#endif  // DOCSIMP_ALIGN_H_
