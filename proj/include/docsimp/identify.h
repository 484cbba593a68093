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

// Edit identification around external taggers: per-operation category tags,
// the groupers that turn tags into edit groups, the per-category B/I codec,
// adjusted sequences for group classifiers, and the tagged markup and
// prediction file formats.

#ifndef DOCSIMP_IDENTIFY_H_
#define DOCSIMP_IDENTIFY_H_

#include <array>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "docsimp/core.h"

namespace docsimp {

enum class BiFlag { kBegin, kInside };
std::string_view to_string(BiFlag flag);  // "B" / "I"
std::optional<BiFlag> parse_bi(std::string_view s);

struct OpTag {
  EditCategory category = EditCategory::kLexical;
  std::optional<BiFlag> bi;
  std::optional<double> p_begin;
  std::optional<double> p_inside;

  OpTag() = default;
  OpTag(EditCategory c, std::optional<BiFlag> flag = std::nullopt,
        std::optional<double> p_b = std::nullopt, std::optional<double> p_i = std::nullopt)
      : category(c), bi(flag), p_begin(p_b), p_inside(p_i) {}

  bool operator==(const OpTag&) const = default;
};

// Tags per edit operation. An operation carries at most one tag per
// category; add() keeps each list sorted by category.
struct TaggedOperations {
  std::string pair_id;
  std::map<std::size_t, std::vector<OpTag>> tags;

  void add(std::size_t op_index, OpTag tag);
  // Categories on one operation, empty if untagged.
  std::set<EditCategory> categories_at(std::size_t op_index) const;
  // Operations tagged with the category, ascending.
  std::vector<std::size_t> ops_with(EditCategory category) const;
  bool empty() const { return tags.empty(); }

  bool operator==(const TaggedOperations&) const = default;
};

using SequenceMap = std::map<std::string, AlignmentSequence>;
SequenceMap index_sequences(std::vector<AlignmentSequence> seqs);

// Plain category tags (no B/I) for every operation of every group.
TaggedOperations tags_from_groups(const std::string& pair_id, std::span<const EditGroup> groups);

// ---------------------------------------------------------------------------
// Taggers and groupers. Groupers return canonical_groups order.

// Deletes become semantic_deletion, inserts lexical.
TaggedOperations op_majority(const AlignmentSequence& seq);

// One group per (operation, category).
std::vector<EditGroup> group_single(const TaggedOperations& tags);

// Runs of consecutive operations (no keep between them) that share a
// category become one group of that category.
std::vector<EditGroup> group_adjacent(const TaggedOperations& tags, const AlignmentSequence& seq);

enum class CategoryMode { kContiguous, kGlobal };
using CategoryModeTable = std::array<CategoryMode, kNumCategories>;
CategoryModeTable all_contiguous();
inline CategoryMode mode_of(const CategoryModeTable& t, EditCategory c) {
  return t[static_cast<std::size_t>(c)];
}

// A group is contiguous when no edit operation outside it lies between its
// first and last operation. A category is contiguous when more than half of
// its observed groups are; unseen categories are contiguous. Records whose
// pair is missing from `seqs` throw LookupError. Throws InputError on an
// empty record set.
CategoryModeTable derive_category_modes(std::span<const AnnotationRecord> records,
                                        const SequenceMap& seqs);
bool group_is_contiguous(const EditGroup& group, const AlignmentSequence& seq);

// Contiguous categories as group_adjacent; each global category collapses
// into a single group.
std::vector<EditGroup> group_rules(const TaggedOperations& tags, const AlignmentSequence& seq,
                                   const CategoryModeTable& modes);

// Category-agnostic proposals: maximal runs of consecutive edit operations.
std::vector<std::set<std::size_t>> adjacent_proposals(const AlignmentSequence& seq);

// ---------------------------------------------------------------------------
// Per-category B/I codec

// The first operation of each group gets B for the group's category, the
// rest I. Throws RepresentabilityError when two groups of one category
// overlap or when a group is not a contiguous slice of its category's
// operations; InputError for indices that are not edit operations.
TaggedOperations encode_bic(const AnnotationRecord& record, const AlignmentSequence& seq);

// Scans each category's operations in order: B opens a group, I extends
// the open one (or opens one if none is open). With probabilities present
// the flag is B iff p_begin >= p_inside. Throws InputError for a tag that
// has neither a flag nor probabilities, or for an index outside seq.
std::vector<EditGroup> decode_bic(const TaggedOperations& tags, const AlignmentSequence& seq);

// ---------------------------------------------------------------------------
// Adjusted sequences

// Reverts every edit outside `group` (deletes become keeps, inserts vanish)
// and re-merges runs. Throws InputError for an empty group or indices that
// are not edit operations.
AlignmentSequence build_adjusted_sequence(const AlignmentSequence& seq, const EditGroup& group);
AlignmentSequence build_adjusted_sequence(const AlignmentSequence& seq,
                                          const std::set<std::size_t>& op_indices);

// ---------------------------------------------------------------------------
// Tagged markup: a tagged edit opens with one "<B;category>" (or
// "<category>" without a flag) per tag and closes with </INS> or </DEL>.
// Untagged edits keep the plain <INS>/<DEL> opening. Probabilities are not
// part of the format.

std::string serialize_tagged_markup(const TaggedOperations& tags, const AlignmentSequence& seq);

struct TaggedSequence {
  AlignmentSequence sequence;
  TaggedOperations tags;
};
// Throws ParseError on malformed markup or unknown labels.
TaggedSequence parse_tagged_markup(std::string_view text, std::string pair_id = {});

// ---------------------------------------------------------------------------
// Prediction files

// Lines {"pair_id", "op_index", "category", "bi"?, "p_B"?, "p_I"?}, checked
// against the sequences: unknown pairs, categories, indices outside the
// sequence or pointing at keeps, and repeated (op, category) are
// SchemaErrors. Every pair in `seqs` gets an entry, possibly empty.
std::map<std::string, TaggedOperations> load_predictions(const std::string& path,
                                                         const SequenceMap& seqs);
void write_predictions(const std::string& path,
                       const std::map<std::string, TaggedOperations>& predictions);

// Group-level predictions from an external group classifier:
// {"pair_id", "op_indices", "category"} lines.
std::map<std::string, std::vector<EditGroup>> load_group_predictions(const std::string& path,
                                                                     const SequenceMap& seqs);

}  // namespace docsimp

#endif  // DOCSIMP_IDENTIFY_H_
