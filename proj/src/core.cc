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

#include "docsimp/core.h"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "docsimp/errors.h"

namespace docsimp {

namespace {

constexpr std::array<EditCategory, kNumCategories> kCategories = {
    EditCategory::kLexical,
    EditCategory::kLexicalEntity,
    EditCategory::kSentenceSplit,
    EditCategory::kSentenceFusion,
    EditCategory::kSyntacticDeletion,
    EditCategory::kSyntacticGeneric,
    EditCategory::kReordering,
    EditCategory::kAnaphoraResolution,
    EditCategory::kAnaphoraInsertion,
    EditCategory::kElaborationBackground,
    EditCategory::kElaborationExample,
    EditCategory::kElaborationGeneric,
    EditCategory::kSemanticDeletion,
    EditCategory::kSpecificToGeneral,
    EditCategory::kFormat,
    EditCategory::kNoiseDeletion,
    EditCategory::kFactCorrection,
    EditCategory::kExtraneousInformation,
    EditCategory::kMiscellaneous,
};

constexpr std::array<EditClass, kNumClasses> kClasses = {
    EditClass::kLexical, EditClass::kSyntactic, EditClass::kDiscourse,
    EditClass::kSemantic, EditClass::kNonSimplification,
};

constexpr std::array<std::string_view, kNumCategories> kCategoryIds = {
    "lexical",
    "lexical_entity",
    "sentence_split",
    "sentence_fusion",
    "syntactic_deletion",
    "syntactic_generic",
    "reordering",
    "anaphora_resolution",
    "anaphora_insertion",
    "elaboration_background",
    "elaboration_example",
    "elaboration_generic",
    "semantic_deletion",
    "specific_to_general",
    "format",
    "noise_deletion",
    "fact_correction",
    "extraneous_information",
    "miscellaneous",
};

constexpr std::array<std::string_view, kNumClasses> kClassIds = {
    "lexical", "syntactic", "discourse", "semantic", "non_simplification",
};

// Indexed like kCategories.
const std::array<CategoryInfo, kNumCategories> kInfo = {{
    {EditCategory::kLexical, "Lexical",
     "Swaps a hard or technical word or phrase for a more familiar one.",
     "The patient was <DEL>administered</DEL> <INS>given</INS> medicine."},
    {EditCategory::kLexicalEntity, "Lexical - Entity",
     "Simplifies how a named person, place or organization is referred to, "
     "such as dropping a middle name or using a common name.",
     "<DEL>Panthera leo</DEL> <INS>The lion</INS> lives in Africa."},
    {EditCategory::kSentenceSplit, "Sentence Split",
     "Breaks one sentence into two or more shorter ones, usually touching only "
     "connector words at the boundary.",
     "He was born in Ohio <DEL>and</DEL> <INS>. He</INS> moved to Texas."},
    {EditCategory::kSentenceFusion, "Sentence Fusion",
     "Joins two or more sentences into one.",
     "The river is long <DEL>. It</DEL> <INS>and</INS> flows north."},
    {EditCategory::kSyntacticDeletion, "Syntactic Deletion",
     "Removes words to shorten a sentence without losing information.",
     "The city, <DEL>which is</DEL> located on the coast, is busy."},
    {EditCategory::kSyntacticGeneric, "Syntactic Generic",
     "Changes sentence structure, such as clause order or verb tense.",
     "<DEL>Having finished,</DEL> she left <INS>after she finished</INS>."},
    {EditCategory::kReordering, "Reordering",
     "Moves content so that needed information comes earlier in the text.",
     "<INS>Paris is in France.</INS> It has a tower. <DEL>Paris is in France.</DEL>"},
    {EditCategory::kAnaphoraResolution, "Anaphora Resolution",
     "Replaces a pronoun or implicit mention with the explicit entity.",
     "<DEL>It</DEL> <INS>The bridge</INS> opened in 1937."},
    {EditCategory::kAnaphoraInsertion, "Anaphora Insertion",
     "Replaces an explicit mention with a pronoun or short reference.",
     "<DEL>The bridge</DEL> <INS>It</INS> opened in 1937."},
    {EditCategory::kElaborationBackground, "Elaboration - Background",
     "Inserts prerequisite information that helps readers understand "
     "related content.",
     "<INS>A volcano is an opening in the ground.</INS> Etna is a volcano."},
    {EditCategory::kElaborationExample, "Elaboration - Example",
     "Inserts a concrete example of something described abstractly.",
     "Mammals feed milk to their young <INS>, like cows do</INS>."},
    {EditCategory::kElaborationGeneric, "Elaboration - Generic",
     "Adds information that is neither background nor an example.",
     "The school opened in 1990 <INS>and has 500 students</INS>."},
    {EditCategory::kSemanticDeletion, "Semantic Deletion",
     "Removes content that is not needed for a basic understanding.",
     "The lake <DEL>, which covers 30 square kilometres,</DEL> is deep."},
    {EditCategory::kSpecificToGeneral, "Specific-to-General",
     "Replaces a detail with a higher-level description of it.",
     "She lives in <DEL>Lyon</DEL> <INS>France</INS>."},
    {EditCategory::kFormat, "Format",
     "Changes only formatting: punctuation, capitalization, spelling or "
     "the way a value such as a date is written.",
     "The <DEL>colour</DEL> <INS>color</INS> is red."},
    {EditCategory::kNoiseDeletion, "Noise Deletion",
     "Removes noise from the original, such as a broken trailing sentence or "
     "wiki-specific markup.",
     "The town is small. <DEL>See also: list of</DEL>"},
    {EditCategory::kFactCorrection, "Fact Correction",
     "Corrects or updates a specific fact.",
     "The population is <DEL>10,000</DEL> <INS>12,000</INS>."},
    {EditCategory::kExtraneousInformation, "Extraneous Information",
     "Adds facts that neither simplify nor support existing content.",
     "The band formed in 1990. <INS>Its drummer likes golf.</INS>"},
    {EditCategory::kMiscellaneous, "Miscellaneous",
     "Any other edit that does not simplify and fits no other category.",
     "<INS>Hello!</INS> The museum is old."},
}};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& ids,
                           const std::array<Enum, N>& values, std::string_view id) {
  for (std::size_t i = 0; i < N; ++i) {
    if (ids[i] == id) return values[i];
  }
  return std::nullopt;
}

bool is_ascii_punct(unsigned char c) { return c < 0x80 && std::ispunct(c) != 0; }

}  // namespace

std::string format_timestamp(Timestamp t) {
  auto day = std::chrono::floor<std::chrono::days>(t);
  std::chrono::year_month_day ymd{day};
  std::chrono::hh_mm_ss hms{t - day};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

Timestamp parse_timestamp(std::string_view s) {
  int y = 0;
  unsigned mo = 0, d = 0;
  int h = 0, mi = 0, sec = 0;
  std::string str(s);
  char tail[4] = {0};
  int n = std::sscanf(str.c_str(), "%4d-%2u-%2uT%2d:%2d:%2d%1s", &y, &mo, &d, &h, &mi,
                      &sec, tail);
  if (n < 6 || (n == 7 && tail[0] != 'Z')) {
    throw InputError("malformed timestamp '" + str + "'");
  }
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{mo},
                                  std::chrono::day{d}};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 60 || h < 0 || mi < 0 || sec < 0) {
    throw InputError("timestamp out of range '" + str + "'");
  }
  return std::chrono::sys_days{ymd} + std::chrono::hours{h} + std::chrono::minutes{mi} +
         std::chrono::seconds{sec};
}

const std::array<EditCategory, kNumCategories>& all_categories() { return kCategories; }
const std::array<EditClass, kNumClasses>& all_classes() { return kClasses; }

EditClass class_of(EditCategory category) {
  switch (category) {
    case EditCategory::kLexical:
    case EditCategory::kLexicalEntity:
      return EditClass::kLexical;
    case EditCategory::kSentenceSplit:
    case EditCategory::kSentenceFusion:
    case EditCategory::kSyntacticDeletion:
    case EditCategory::kSyntacticGeneric:
      return EditClass::kSyntactic;
    case EditCategory::kReordering:
    case EditCategory::kAnaphoraResolution:
    case EditCategory::kAnaphoraInsertion:
      return EditClass::kDiscourse;
    case EditCategory::kElaborationBackground:
    case EditCategory::kElaborationExample:
    case EditCategory::kElaborationGeneric:
    case EditCategory::kSemanticDeletion:
    case EditCategory::kSpecificToGeneral:
      return EditClass::kSemantic;
    case EditCategory::kFormat:
    case EditCategory::kNoiseDeletion:
    case EditCategory::kFactCorrection:
    case EditCategory::kExtraneousInformation:
    case EditCategory::kMiscellaneous:
      return EditClass::kNonSimplification;
  }
  return EditClass::kNonSimplification;
}

std::string_view to_string(EditCategory category) {
  return kCategoryIds[static_cast<std::size_t>(category)];
}

std::string_view to_string(EditClass cls) {
  return kClassIds[static_cast<std::size_t>(cls)];
}

std::optional<EditCategory> parse_category(std::string_view id) {
  return lookup(kCategoryIds, kCategories, id);
}

std::optional<EditClass> parse_class(std::string_view id) {
  return lookup(kClassIds, kClasses, id);
}

const CategoryInfo& category_info(EditCategory category) {
  return kInfo[static_cast<std::size_t>(category)];
}

std::string_view to_string(Wiki wiki) {
  return wiki == Wiki::kComplex ? "complex" : "simple";
}

std::optional<Wiki> parse_wiki(std::string_view id) {
  if (id == "complex") return Wiki::kComplex;
  if (id == "simple") return Wiki::kSimple;
  return std::nullopt;
}

Token::Token(std::string s) : surface(std::move(s)) {
  is_punct = !surface.empty() &&
             std::all_of(surface.begin(), surface.end(),
                         [](char c) { return is_ascii_punct(static_cast<unsigned char>(c)); });
}

std::string_view to_string(OpKind kind) {
  switch (kind) {
    case OpKind::kKeep:
      return "keep";
    case OpKind::kInsert:
      return "insert";
    case OpKind::kDelete:
      return "delete";
  }
  return "keep";
}

std::optional<OpKind> parse_op_kind(std::string_view id) {
  if (id == "keep") return OpKind::kKeep;
  if (id == "insert") return OpKind::kInsert;
  if (id == "delete") return OpKind::kDelete;
  return std::nullopt;
}

AlignmentSequence::AlignmentSequence(std::string pair_id, std::vector<EditOperation> ops)
    : pair_id_(std::move(pair_id)) {
  for (auto& op : ops) {
    if (op.tokens.empty()) continue;
    if (!ops_.empty() && ops_.back().kind == op.kind) {
      auto& dst = ops_.back().tokens;
      dst.insert(dst.end(), std::make_move_iterator(op.tokens.begin()),
                 std::make_move_iterator(op.tokens.end()));
      continue;
    }
    op.index = ops_.size();
    ops_.push_back(std::move(op));
  }
}

std::vector<std::size_t> AlignmentSequence::edit_indices() const {
  std::vector<std::size_t> out;
  for (const auto& op : ops_) {
    if (op.is_edit()) out.push_back(op.index);
  }
  return out;
}

std::vector<EditGroup> canonical_groups(std::vector<EditGroup> groups) {
  std::sort(groups.begin(), groups.end());
  return groups;
}

std::string_view to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::kUncoveredOp:
      return "uncovered_op";
    case Violation::Kind::kIndexOutOfRange:
      return "index_out_of_range";
    case Violation::Kind::kKeepOpInGroup:
      return "keep_op_in_group";
    case Violation::Kind::kEmptyGroup:
      return "empty_group";
  }
  return "";
}

std::string Violation::message() const {
  switch (kind) {
    case Kind::kUncoveredOp:
      return "edit operation " + std::to_string(op_index) + " is not in any group";
    case Kind::kIndexOutOfRange:
      return "group " + std::to_string(group_index) + " references operation " +
             std::to_string(op_index) + " which does not exist";
    case Kind::kKeepOpInGroup:
      return "group " + std::to_string(group_index) + " references unchanged operation " +
             std::to_string(op_index);
    case Kind::kEmptyGroup:
      return "group " + std::to_string(group_index) + " has no operations";
  }
  return "";
}

ValidationResult validate_annotation(const AnnotationRecord& record,
                                     const AlignmentSequence& seq) {
  if (record.pair_id != seq.pair_id()) {
    throw IdentityError("annotation for pair '" + record.pair_id +
                        "' checked against sequence '" + seq.pair_id() + "'");
  }
  ValidationResult result;
  std::vector<bool> covered(seq.size(), false);
  for (std::size_t g = 0; g < record.groups.size(); ++g) {
    const auto& group = record.groups[g];
    if (group.op_indices.empty()) {
      result.violations.push_back({Violation::Kind::kEmptyGroup, 0, g});
    }
    for (std::size_t idx : group.op_indices) {
      if (idx >= seq.size()) {
        result.violations.push_back({Violation::Kind::kIndexOutOfRange, idx, g});
      } else if (!seq[idx].is_edit()) {
        result.violations.push_back({Violation::Kind::kKeepOpInGroup, idx, g});
      } else {
        covered[idx] = true;
      }
    }
  }
  if (!record.unaligned_flag) {
    for (std::size_t idx : seq.edit_indices()) {
      if (!covered[idx]) {
        result.violations.push_back({Violation::Kind::kUncoveredOp, idx, 0});
      }
    }
  }
  return result;
}

}  // namespace docsimp
