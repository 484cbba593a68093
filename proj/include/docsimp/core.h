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

// Domain types shared by every module: the edit taxonomy, documents,
// alignment sequences, edit groups and annotation records.

#ifndef DOCSIMP_CORE_H_
#define DOCSIMP_CORE_H_

#include <array>
#include <chrono>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace docsimp {

using Timestamp = std::chrono::sys_seconds;

// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(Timestamp t);
// Accepts "YYYY-MM-DDTHH:MM:SSZ" (the "Z" is optional). Throws InputError.
Timestamp parse_timestamp(std::string_view s);

// ---------------------------------------------------------------------------
// Taxonomy

enum class EditCategory {
  kLexical,
  kLexicalEntity,
  kSentenceSplit,
  kSentenceFusion,
  kSyntacticDeletion,
  kSyntacticGeneric,
  kReordering,
  kAnaphoraResolution,
  kAnaphoraInsertion,
  kElaborationBackground,
  kElaborationExample,
  kElaborationGeneric,
  kSemanticDeletion,
  kSpecificToGeneral,
  kFormat,
  kNoiseDeletion,
  kFactCorrection,
  kExtraneousInformation,
  kMiscellaneous,
};

inline constexpr std::size_t kNumCategories = 19;

enum class EditClass {
  kLexical,
  kSyntactic,
  kDiscourse,
  kSemantic,
  kNonSimplification,
};

inline constexpr std::size_t kNumClasses = 5;

// All categories in taxonomy order (grouped by class).
const std::array<EditCategory, kNumCategories>& all_categories();
const std::array<EditClass, kNumClasses>& all_classes();

EditClass class_of(EditCategory category);

// Stable snake_case identifiers used in every file format.
std::string_view to_string(EditCategory category);
std::string_view to_string(EditClass cls);
std::optional<EditCategory> parse_category(std::string_view id);
std::optional<EditClass> parse_class(std::string_view id);

// Human-facing label, definition and a short illustrative example, served
// to the annotation front end.
struct CategoryInfo {
  EditCategory category;
  std::string_view label;
  std::string_view definition;
  std::string_view example;
};
const CategoryInfo& category_info(EditCategory category);

// ---------------------------------------------------------------------------
// Documents

enum class Wiki { kComplex, kSimple };
std::string_view to_string(Wiki wiki);
std::optional<Wiki> parse_wiki(std::string_view id);

struct DocumentRevision {
  std::string page_id;
  std::string revision_id;
  std::optional<Timestamp> timestamp;
  std::string title;
  std::string text;
  Wiki source_wiki = Wiki::kComplex;

  bool operator==(const DocumentRevision&) const = default;
};

// ---------------------------------------------------------------------------
// Alignment sequences

struct Token {
  std::string surface;
  bool is_punct = false;

  Token() = default;
  // is_punct is derived from the surface.
  explicit Token(std::string s);

  bool operator==(const Token& other) const { return surface == other.surface; }
};

enum class OpKind { kKeep, kInsert, kDelete };
std::string_view to_string(OpKind kind);
std::optional<OpKind> parse_op_kind(std::string_view id);

struct EditOperation {
  std::size_t index = 0;
  OpKind kind = OpKind::kKeep;
  std::vector<Token> tokens;

  bool is_edit() const { return kind != OpKind::kKeep; }
  bool operator==(const EditOperation&) const = default;
};

class AlignmentSequence {
 public:
  AlignmentSequence() = default;
  // Renumbers indices, merges adjacent runs of the same kind and drops
  // empty operations.
  AlignmentSequence(std::string pair_id, std::vector<EditOperation> ops);

  const std::string& pair_id() const { return pair_id_; }
  void set_pair_id(std::string id) { pair_id_ = std::move(id); }
  const std::vector<EditOperation>& operations() const { return ops_; }
  std::size_t size() const { return ops_.size(); }
  const EditOperation& operator[](std::size_t i) const { return ops_[i]; }

  // Indices of the insert/delete operations, ascending.
  std::vector<std::size_t> edit_indices() const;
  bool is_edit(std::size_t index) const {
    return index < ops_.size() && ops_[index].is_edit();
  }

  bool operator==(const AlignmentSequence&) const = default;

 private:
  std::string pair_id_;
  std::vector<EditOperation> ops_;
};

// ---------------------------------------------------------------------------
// Groups and annotations

struct EditGroup {
  EditCategory category = EditCategory::kLexical;
  std::set<std::size_t> op_indices;

  auto operator<=>(const EditGroup&) const = default;
};

struct AnnotationRecord {
  std::string pair_id;
  std::vector<EditGroup> groups;
  std::string annotator_id;
  bool unaligned_flag = false;
  std::optional<Timestamp> completed_at;

  bool operator==(const AnnotationRecord&) const = default;
};

// Returns groups sorted by (category, op set); used wherever two group
// lists are compared irrespective of order.
std::vector<EditGroup> canonical_groups(std::vector<EditGroup> groups);

struct Violation {
  enum class Kind { kUncoveredOp, kIndexOutOfRange, kKeepOpInGroup, kEmptyGroup };
  Kind kind;
  std::size_t op_index = 0;
  std::size_t group_index = 0;

  std::string message() const;
  bool operator==(const Violation&) const = default;
};
std::string_view to_string(Violation::Kind kind);

struct ValidationResult {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks that every group points at existing non-keep operations and, unless
// the record is flagged unaligned, that every edit operation is covered.
// Throws IdentityError when the pair ids differ.
ValidationResult validate_annotation(const AnnotationRecord& record,
                                     const AlignmentSequence& seq);

}  // namespace docsimp

#endif  // DOCSIMP_CORE_H_
