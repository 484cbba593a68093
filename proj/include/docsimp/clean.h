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

// Corpus cleaning by undoing selected edit groups in the simple document.

#ifndef DOCSIMP_CLEAN_H_
#define DOCSIMP_CLEAN_H_

#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "docsimp/align.h"
#include "docsimp/core.h"
#include "docsimp/corpus.h"

namespace docsimp {

using GroupFilter = std::function<bool(const EditGroup&)>;

bool is_non_simplification(const EditGroup& group);

struct RevertResult {
  std::string text;                 // reconstruct_target of `sequence`
  AlignmentSequence sequence;       // the modified sequence
  std::set<std::size_t> reverted;   // original op indices undone
  std::vector<std::size_t> uncovered;  // edit ops in no group; kept
};

// An edit operation is undone iff at least one group contains it and every
// group containing it passes `filter`. Undoing a delete turns it back into
// kept text, undoing an insert drops it. Throws InputError when a group
// points at an operation that is not an edit of `seq`.
RevertResult revert_groups(const AlignmentSequence& seq, std::span<const EditGroup> groups,
                           const GroupFilter& filter);

struct CleanReport {
  std::size_t pairs = 0;
  std::size_t changed = 0;        // pairs whose simple text was rewritten
  std::size_t without_tags = 0;   // passed through untouched
  std::size_t reverted_ops = 0;
  std::size_t uncovered_ops = 0;
};

// Re-aligns each pair (token granularity unless `cfg` says otherwise, so op
// indices agree with the `align` output the groups were made on) and undoes
// its non-simplification groups. Pairs missing from `groups` pass through.
// A pair with nothing undone keeps its simple text byte for byte.
std::vector<PairRecord> clean_corpus(std::span<const PairRecord> pairs,
                                     const std::map<std::string, std::vector<EditGroup>>& groups,
                                     CleanReport* report = nullptr,
                                     const AlignmentConfig& cfg = {});

// Groups keyed by pair from annotation records, one record per pair as
// primary_annotations picks it; flagged records are left out.
std::map<std::string, std::vector<EditGroup>> groups_by_pair(
    std::span<const AnnotationRecord> records);

Json to_json(const CleanReport& r);

}  // namespace docsimp

#endif  // DOCSIMP_CLEAN_H_
