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

#include "docsimp/identify.h"

#include <algorithm>
#include <cmath>

#include "docsimp/align.h"
#include "docsimp/corpus.h"
#include "docsimp/errors.h"

namespace docsimp {

namespace {

void check_edit_op(const AlignmentSequence& seq, std::size_t i, const char* what) {
  if (!seq.is_edit(i)) {
    throw InputError(std::string(what) + ": operation " + std::to_string(i) + " of pair '" +
                     seq.pair_id() + "' is not an edit operation");
  }
}

// Splits a sorted op list into runs of consecutive indices.
std::vector<std::set<std::size_t>> consecutive_runs(const std::vector<std::size_t>& ops) {
  std::vector<std::set<std::size_t>> runs;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (i == 0 || ops[i] != ops[i - 1] + 1) runs.emplace_back();
    runs.back().insert(ops[i]);
  }
  return runs;
}

BiFlag effective_flag(const OpTag& tag, std::size_t op) {
  if (tag.p_begin && tag.p_inside) return *tag.p_begin >= *tag.p_inside ? BiFlag::kBegin : BiFlag::kInside;
  if (tag.bi) return *tag.bi;
  throw InputError("operation " + std::to_string(op) + " has a " +
                   std::string(to_string(tag.category)) + " tag without a B/I flag or probabilities");
}

std::string tag_label(const OpTag& tag) {
  std::string cat(to_string(tag.category));
  return tag.bi ? std::string(to_string(*tag.bi)) + ";" + cat : cat;
}

OpTag parse_label(std::string_view label, std::size_t offset) {
  OpTag tag;
  std::string_view cat = label;
  if (auto semi = label.find(';'); semi != std::string_view::npos) {
    auto bi = parse_bi(label.substr(0, semi));
    if (!bi) throw ParseError("unknown B/I flag in '<" + std::string(label) + ">'", offset);
    tag.bi = bi;
    cat = label.substr(semi + 1);
  }
  auto c = parse_category(cat);
  if (!c) throw ParseError("unknown category in '<" + std::string(label) + ">'", offset);
  tag.category = *c;
  return tag;
}

}  // namespace

std::string_view to_string(BiFlag flag) { return flag == BiFlag::kBegin ? "B" : "I"; }

std::optional<BiFlag> parse_bi(std::string_view s) {
  if (s == "B") return BiFlag::kBegin;
  if (s == "I") return BiFlag::kInside;
  return std::nullopt;
}

void TaggedOperations::add(std::size_t op_index, OpTag tag) {
  auto& list = tags[op_index];
  auto it = std::lower_bound(list.begin(), list.end(), tag.category,
                             [](const OpTag& t, EditCategory c) { return t.category < c; });
  if (it != list.end() && it->category == tag.category) {
    throw InputError("operation " + std::to_string(op_index) + " already has a " +
                     std::string(to_string(tag.category)) + " tag");
  }
  list.insert(it, tag);
}

std::set<EditCategory> TaggedOperations::categories_at(std::size_t op_index) const {
  std::set<EditCategory> out;
  if (auto it = tags.find(op_index); it != tags.end()) {
    for (const auto& t : it->second) out.insert(t.category);
  }
  return out;
}

std::vector<std::size_t> TaggedOperations::ops_with(EditCategory category) const {
  std::vector<std::size_t> out;
  for (const auto& [op, list] : tags) {
    for (const auto& t : list) {
      if (t.category == category) out.push_back(op);
    }
  }
  return out;
}

SequenceMap index_sequences(std::vector<AlignmentSequence> seqs) {
  SequenceMap out;
  for (auto& s : seqs) {
    std::string id = s.pair_id();
    if (!out.emplace(id, std::move(s)).second) {
      throw InputError("duplicate sequence for pair '" + id + "'");
    }
  }
  return out;
}

TaggedOperations tags_from_groups(const std::string& pair_id, std::span<const EditGroup> groups) {
  TaggedOperations t{pair_id, {}};
  for (const auto& g : groups) {
    for (auto op : g.op_indices) {
      if (!t.categories_at(op).count(g.category)) t.add(op, {g.category});
    }
  }
  return t;
}

TaggedOperations op_majority(const AlignmentSequence& seq) {
  TaggedOperations t{seq.pair_id(), {}};
  for (const auto& op : seq.operations()) {
    if (op.kind == OpKind::kDelete) t.add(op.index, {EditCategory::kSemanticDeletion});
    if (op.kind == OpKind::kInsert) t.add(op.index, {EditCategory::kLexical});
  }
  return t;
}

std::vector<EditGroup> group_single(const TaggedOperations& tags) {
  std::vector<EditGroup> out;
  for (const auto& [op, list] : tags.tags) {
    for (const auto& t : list) out.push_back({t.category, {op}});
  }
  return canonical_groups(std::move(out));
}

std::vector<EditGroup> group_adjacent(const TaggedOperations& tags, const AlignmentSequence& seq) {
  return group_rules(tags, seq, all_contiguous());
}

CategoryModeTable all_contiguous() {
  CategoryModeTable t;
  t.fill(CategoryMode::kContiguous);
  return t;
}

bool group_is_contiguous(const EditGroup& group, const AlignmentSequence& seq) {
  if (group.op_indices.empty()) return true;
  std::size_t lo = *group.op_indices.begin(), hi = *group.op_indices.rbegin();
  for (std::size_t i = lo; i <= hi && i < seq.size(); ++i) {
    if (seq.is_edit(i) && !group.op_indices.count(i)) return false;
  }
  return true;
}

CategoryModeTable derive_category_modes(std::span<const AnnotationRecord> records,
                                        const SequenceMap& seqs) {
  if (records.empty()) throw InputError("deriving category modes needs at least one annotation");
  std::array<std::size_t, kNumCategories> contiguous{}, total{};
  for (const auto& r : records) {
    auto it = seqs.find(r.pair_id);
    if (it == seqs.end()) throw LookupError("no sequence for pair '" + r.pair_id + "'");
    for (const auto& g : r.groups) {
      auto c = static_cast<std::size_t>(g.category);
      ++total[c];
      contiguous[c] += group_is_contiguous(g, it->second);
    }
  }
  CategoryModeTable modes = all_contiguous();
  for (std::size_t c = 0; c < kNumCategories; ++c) {
    if (total[c] > 0 && 2 * contiguous[c] <= total[c]) modes[c] = CategoryMode::kGlobal;
  }
  return modes;
}

std::vector<EditGroup> group_rules(const TaggedOperations& tags, const AlignmentSequence& seq,
                                   const CategoryModeTable& modes) {
  std::vector<EditGroup> out;
  for (auto c : all_categories()) {
    auto ops = tags.ops_with(c);
    if (ops.empty()) continue;
    for (auto op : ops) check_edit_op(seq, op, "group_rules");
    if (mode_of(modes, c) == CategoryMode::kGlobal) {
      out.push_back({c, std::set<std::size_t>(ops.begin(), ops.end())});
    } else {
      for (auto& run : consecutive_runs(ops)) out.push_back({c, std::move(run)});
    }
  }
  return canonical_groups(std::move(out));
}

std::vector<std::set<std::size_t>> adjacent_proposals(const AlignmentSequence& seq) {
  return consecutive_runs(seq.edit_indices());
}

TaggedOperations encode_bic(const AnnotationRecord& record, const AlignmentSequence& seq) {
  TaggedOperations out{record.pair_id, {}};
  for (auto c : all_categories()) {
    std::vector<const EditGroup*> groups;
    for (const auto& g : record.groups) {
      if (g.category != c) continue;
      if (g.op_indices.empty()) throw InputError("encode_bic: empty group");
      for (auto op : g.op_indices) check_edit_op(seq, op, "encode_bic");
      groups.push_back(&g);
    }
    if (groups.empty()) continue;
    std::vector<std::size_t> all;
    for (auto* g : groups) all.insert(all.end(), g->op_indices.begin(), g->op_indices.end());
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
      throw RepresentabilityError(std::string(to_string(c)), "two groups share an operation");
    }
    for (auto* g : groups) {
      // The group must occupy consecutive positions in this category's
      // operation order.
      auto first = std::lower_bound(all.begin(), all.end(), *g->op_indices.begin());
      if (!std::equal(g->op_indices.begin(), g->op_indices.end(), first)) {
        throw RepresentabilityError(std::string(to_string(c)),
                                    "groups interleave in the category's operation order");
      }
    }
    for (auto* g : groups) {
      bool begin = true;
      for (auto op : g->op_indices) {
        out.add(op, {c, begin ? BiFlag::kBegin : BiFlag::kInside});
        begin = false;
      }
    }
  }
  return out;
}

std::vector<EditGroup> decode_bic(const TaggedOperations& tags, const AlignmentSequence& seq) {
  std::vector<EditGroup> out;
  for (auto c : all_categories()) {
    std::optional<std::size_t> open;
    for (const auto& [op, list] : tags.tags) {
      for (const auto& t : list) {
        if (t.category != c) continue;
        check_edit_op(seq, op, "decode_bic");
        if (effective_flag(t, op) == BiFlag::kBegin || !open) {
          open = out.size();
          out.push_back({c, {}});
        }
        out[*open].op_indices.insert(op);
      }
    }
  }
  return canonical_groups(std::move(out));
}

AlignmentSequence build_adjusted_sequence(const AlignmentSequence& seq,
                                          const std::set<std::size_t>& op_indices) {
  if (op_indices.empty()) throw InputError("adjusted sequence needs a non-empty group");
  for (auto op : op_indices) check_edit_op(seq, op, "build_adjusted_sequence");
  std::vector<EditOperation> ops;
  for (const auto& op : seq.operations()) {
    if (op.kind == OpKind::kKeep || op_indices.count(op.index)) {
      ops.push_back(op);
    } else if (op.kind == OpKind::kDelete) {
      ops.push_back({0, OpKind::kKeep, op.tokens});
    }
  }
  return AlignmentSequence(seq.pair_id(), std::move(ops));
}

AlignmentSequence build_adjusted_sequence(const AlignmentSequence& seq, const EditGroup& group) {
  return build_adjusted_sequence(seq, group.op_indices);
}

std::string serialize_tagged_markup(const TaggedOperations& tags, const AlignmentSequence& seq) {
  std::string out;
  for (const auto& op : seq.operations()) {
    if (!out.empty()) out += ' ';
    auto it = tags.tags.find(op.index);
    bool tagged = it != tags.tags.end() && !it->second.empty();
    if (op.kind == OpKind::kKeep) {
      if (tagged) throw InputError("keep operation " + std::to_string(op.index) + " carries tags");
      out += detokenize(op.tokens);
      continue;
    }
    if (tagged) {
      for (const auto& t : it->second) out += "<" + tag_label(t) + ">";
    } else {
      out += op.kind == OpKind::kInsert ? "<INS>" : "<DEL>";
    }
    out += detokenize(op.tokens);
    out += op.kind == OpKind::kInsert ? "</INS>" : "</DEL>";
  }
  return out;
}

TaggedSequence parse_tagged_markup(std::string_view text, std::string pair_id) {
  std::vector<EditOperation> ops;
  std::vector<std::vector<OpTag>> op_tags;
  for (auto& mop : scan_markup(text, /*tagged=*/true)) {
    std::vector<OpTag> parsed;
    for (const auto& label : mop.labels) parsed.push_back(parse_label(label, mop.offset));
    ops.push_back({0, mop.kind, std::move(mop.tokens)});
    op_tags.push_back(std::move(parsed));
  }
  // scan_markup never yields two adjacent keeps, but two adjacent edits of
  // one kind would be merged by the sequence constructor and lose their
  // separate tags.
  for (std::size_t i = 1; i < ops.size(); ++i) {
    if (ops[i].kind == ops[i - 1].kind) {
      throw ParseError("adjacent operations of the same kind", 0);
    }
  }
  TaggedSequence out{AlignmentSequence(pair_id, std::move(ops)), {pair_id, {}}};
  for (std::size_t i = 0; i < op_tags.size(); ++i) {
    for (const auto& t : op_tags[i]) {
      if (out.tags.categories_at(i).count(t.category)) {
        throw ParseError("repeated category on one operation", 0);
      }
      out.tags.add(i, t);
    }
  }
  return out;
}

std::map<std::string, TaggedOperations> load_predictions(const std::string& path,
                                                         const SequenceMap& seqs) {
  std::map<std::string, TaggedOperations> out;
  for (const auto& [id, seq] : seqs) out[id] = TaggedOperations{id, {}};
  for_each_jsonl(path, [&](const Json& obj, std::size_t line) {
    std::string id = require_string(obj, "pair_id", line);
    auto seq = seqs.find(id);
    if (seq == seqs.end()) throw SchemaError("field 'pair_id': unknown pair '" + id + "'", line);
    std::int64_t op = require_int(obj, "op_index", line);
    if (op < 0 || !seq->second.is_edit(static_cast<std::size_t>(op))) {
      throw SchemaError("field 'op_index': " + std::to_string(op) +
                            " is not an edit operation of pair '" + id + "'",
                        line);
    }
    OpTag tag;
    tag.category = require_category(obj, "category", line);
    if (auto bi = optional_string(obj, "bi", line)) {
      tag.bi = parse_bi(*bi);
      if (!tag.bi) throw SchemaError("field 'bi' must be B or I", line);
    }
    tag.p_begin = optional_number(obj, "p_B", line);
    tag.p_inside = optional_number(obj, "p_I", line);
    if (tag.p_begin.has_value() != tag.p_inside.has_value()) {
      throw SchemaError("fields 'p_B' and 'p_I' must appear together", line);
    }
    if ((tag.p_begin && !std::isfinite(*tag.p_begin)) ||
        (tag.p_inside && !std::isfinite(*tag.p_inside))) {
      throw SchemaError("field 'p_B'/'p_I' must be finite", line);
    }
    auto& tags = out[id];
    if (tags.categories_at(static_cast<std::size_t>(op)).count(tag.category)) {
      throw SchemaError("field 'category': repeated for operation " + std::to_string(op), line);
    }
    tags.add(static_cast<std::size_t>(op), tag);
  });
  return out;
}

void write_predictions(const std::string& path,
                       const std::map<std::string, TaggedOperations>& predictions) {
  std::vector<Json> lines;
  for (const auto& [id, tags] : predictions) {
    for (const auto& [op, list] : tags.tags) {
      for (const auto& t : list) {
        Json j{{"pair_id", id}, {"op_index", op}, {"category", std::string(to_string(t.category))}};
        if (t.bi) j["bi"] = std::string(to_string(*t.bi));
        if (t.p_begin) j["p_B"] = *t.p_begin;
        if (t.p_inside) j["p_I"] = *t.p_inside;
        lines.push_back(std::move(j));
      }
    }
  }
  write_jsonl(path, lines);
}

std::map<std::string, std::vector<EditGroup>> load_group_predictions(const std::string& path,
                                                                     const SequenceMap& seqs) {
  std::map<std::string, std::vector<EditGroup>> out;
  for (const auto& [id, seq] : seqs) out[id];
  for_each_jsonl(path, [&](const Json& obj, std::size_t line) {
    std::string id = require_string(obj, "pair_id", line);
    auto seq = seqs.find(id);
    if (seq == seqs.end()) throw SchemaError("field 'pair_id': unknown pair '" + id + "'", line);
    EditGroup g;
    g.category = require_category(obj, "category", line);
    const Json& idx = require_field(obj, "op_indices", line);
    if (!idx.is_array() || idx.empty()) {
      throw SchemaError("field 'op_indices' must be a non-empty array", line);
    }
    for (const auto& v : idx) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0 ||
          !seq->second.is_edit(v.get<std::size_t>())) {
        throw SchemaError("field 'op_indices' must name edit operations", line);
      }
      g.op_indices.insert(v.get<std::size_t>());
    }
    out[id].push_back(std::move(g));
  });
  for (auto& [id, groups] : out) groups = canonical_groups(std::move(groups));
  return out;
}

}  // namespace docsimp
