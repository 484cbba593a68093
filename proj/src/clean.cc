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

#include "docsimp/clean.h"

#include "docsimp/errors.h"
#include "docsimp/metrics.h"

namespace docsimp {

bool is_non_simplification(const EditGroup& group) {
  return class_of(group.category) == EditClass::kNonSimplification;
}

RevertResult revert_groups(const AlignmentSequence& seq, std::span<const EditGroup> groups,
                           const GroupFilter& filter) {
  // Per op: covered at all, and whether some containing group is kept.
  std::vector<char> covered(seq.size(), 0), vetoed(seq.size(), 0);
  for (const auto& g : groups) {
    bool pass = filter(g);
    for (auto op : g.op_indices) {
      if (!seq.is_edit(op)) {
        throw InputError("group of category " + std::string(to_string(g.category)) +
                         " points at operation " + std::to_string(op) +
                         ", which is not an edit of pair '" + seq.pair_id() + "'");
      }
      covered[op] = 1;
      if (!pass) vetoed[op] = 1;
    }
  }

  RevertResult out;
  std::vector<EditOperation> ops;
  for (const auto& op : seq.operations()) {
    if (!op.is_edit()) {
      ops.push_back(op);
      continue;
    }
    if (!covered[op.index]) out.uncovered.push_back(op.index);
    if (!covered[op.index] || vetoed[op.index]) {
      ops.push_back(op);
      continue;
    }
    out.reverted.insert(op.index);
    if (op.kind == OpKind::kDelete) ops.push_back({0, OpKind::kKeep, op.tokens});
  }
  out.sequence = AlignmentSequence(seq.pair_id(), std::move(ops));
  out.text = reconstruct_target(out.sequence);
  return out;
}

std::vector<PairRecord> clean_corpus(std::span<const PairRecord> pairs,
                                     const std::map<std::string, std::vector<EditGroup>>& groups,
                                     CleanReport* report, const AlignmentConfig& cfg) {
  CleanReport r;
  std::vector<PairRecord> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    ++r.pairs;
    out.push_back(p);
    auto it = groups.find(p.pair_id);
    if (it == groups.end()) {
      ++r.without_tags;
      continue;
    }
    auto seq = align_texts(p.complex.text, p.simple.text, cfg, p.pair_id);
    auto res = revert_groups(seq, it->second, is_non_simplification);
    r.reverted_ops += res.reverted.size();
    r.uncovered_ops += res.uncovered.size();
    if (!res.reverted.empty()) {
      out.back().simple.text = res.text;
      ++r.changed;
    }
  }
  if (report) *report = r;
  return out;
}

std::map<std::string, std::vector<EditGroup>> groups_by_pair(
    std::span<const AnnotationRecord> records) {
  std::map<std::string, std::vector<EditGroup>> out;
  for (const auto& rec : primary_annotations(records)) {
    if (rec.unaligned_flag) continue;
    out[rec.pair_id] = rec.groups;
  }
  return out;
}

Json to_json(const CleanReport& r) {
  return Json{{"pairs", r.pairs},
              {"changed", r.changed},
              {"without_tags", r.without_tags},
              {"reverted_ops", r.reverted_ops},
              {"uncovered_ops", r.uncovered_ops}};
}

}  // namespace docsimp
