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

// Line-delimited JSON file formats. Every record is one UTF-8 line with
// sorted keys; readers validate field names and types and report the
// 1-based line number of the first bad record.

#ifndef DOCSIMP_CORPUS_H_
#define DOCSIMP_CORPUS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "docsimp/core.h"
#include "json.hpp"

namespace docsimp {

using Json = nlohmann::json;

enum class Split { kTrain, kValid, kTest, kOod };
std::string_view to_string(Split split);
std::optional<Split> parse_split(std::string_view id);

struct PairRecord {
  std::string pair_id;
  DocumentRevision complex;
  DocumentRevision simple;
  Split split = Split::kTrain;
  std::vector<std::string> wiki_categories;

  bool operator==(const PairRecord&) const = default;
};

// ---------------------------------------------------------------------------
// Generic JSONL plumbing

// Calls fn(record, line_number) for every non-blank line. Throws IoError if
// the file cannot be opened and SchemaError on malformed JSON or when the
// line is not an object.
void for_each_jsonl(const std::string& path,
                    const std::function<void(const Json&, std::size_t)>& fn);
// Same, over in-memory text.
void for_each_jsonl_text(std::string_view text,
                         const std::function<void(const Json&, std::size_t)>& fn);

// Compact, key-sorted serialization. Doubles use the shortest repr that
// round-trips, so output is byte-stable.
std::string dump_line(const Json& record);

// Writes records one per line via a temp file and rename. Throws IoError.
void write_jsonl(const std::string& path, const std::vector<Json>& records);
// "-" means stdout for writers and stdin for readers in the CLI; these
// helpers take real paths only.
std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, std::string_view content);

// Field accessors that throw SchemaError naming the field and line.
const Json& require_field(const Json& obj, std::string_view field, std::size_t line);
std::string require_string(const Json& obj, std::string_view field, std::size_t line);
std::int64_t require_int(const Json& obj, std::string_view field, std::size_t line);
double require_number(const Json& obj, std::string_view field, std::size_t line);
bool require_bool(const Json& obj, std::string_view field, std::size_t line);
std::optional<std::string> optional_string(const Json& obj, std::string_view field,
                                           std::size_t line);
std::optional<double> optional_number(const Json& obj, std::string_view field,
                                      std::size_t line);
EditCategory require_category(const Json& obj, std::string_view field, std::size_t line);

// ---------------------------------------------------------------------------
// Record codecs

Json to_json(const DocumentRevision& rev);
DocumentRevision revision_from_json(const Json& obj, std::size_t line = 0);

Json to_json(const PairRecord& pair);
PairRecord pair_from_json(const Json& obj, std::size_t line = 0);

// {"pair_id", "operations": [{"index", "kind", "tokens"}]}. Indices are
// checked to be consecutive from 0.
Json to_json(const AlignmentSequence& seq);
AlignmentSequence sequence_from_json(const Json& obj, std::size_t line = 0);

// {"pair_id", "annotator_id", "unaligned", "completed_at",
//  "groups": [{"category", "op_indices"}]}
Json to_json(const AnnotationRecord& record);
AnnotationRecord annotation_from_json(const Json& obj, std::size_t line = 0);

// ---------------------------------------------------------------------------
// Files. Readers reject duplicate pair ids where the format is keyed by
// pair (pairs, sequences); annotation files may hold several records per
// pair, one per annotator.

std::vector<PairRecord> read_pairs(const std::string& path);
void write_pairs(const std::string& path, const std::vector<PairRecord>& pairs);

std::vector<AlignmentSequence> read_sequences(const std::string& path);
void write_sequences(const std::string& path, const std::vector<AlignmentSequence>& seqs);

std::vector<AnnotationRecord> read_annotations(const std::string& path);
void write_annotations(const std::string& path, const std::vector<AnnotationRecord>& records);

// Labeled revision pairs for calibration: {"pair_id", "label"} with label
// "aligned" or "unaligned".
struct PairLabel {
  std::string pair_id;
  bool aligned = false;
};
std::vector<PairLabel> read_labels(const std::string& path);

// System outputs for generation metrics: {"pair_id", "candidate"}.
struct Candidate {
  std::string pair_id;
  std::string text;
};
std::vector<Candidate> read_candidates(const std::string& path);

// Revision histories of one paired page, as written by the fetcher and read
// by the matcher.
struct PageHistory {
  std::string page_id;
  std::string complex_title;
  std::string simple_title;
  std::vector<DocumentRevision> complex_revisions;
  std::vector<DocumentRevision> simple_revisions;

  bool operator==(const PageHistory&) const = default;
};
Json to_json(const PageHistory& history);
PageHistory history_from_json(const Json& obj, std::size_t line = 0);
std::vector<PageHistory> read_histories(const std::string& path);
void write_histories(const std::string& path, const std::vector<PageHistory>& histories);

}  // namespace docsimp

#endif  // DOCSIMP_CORPUS_H_
