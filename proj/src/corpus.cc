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

#include "docsimp/corpus.h"

#include <unistd.h>

#include <array>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "docsimp/errors.h"

namespace docsimp {

namespace {

constexpr std::array<std::string_view, 4> kSplitIds = {"train", "valid", "test", "ood"};

std::string field_name(std::string_view f) { return "field '" + std::string(f) + "'"; }

template <typename Record, typename Decode>
std::vector<Record> read_records(const std::string& path, Decode decode) {
  std::vector<Record> out;
  for_each_jsonl(path, [&](const Json& obj, std::size_t line) { out.push_back(decode(obj, line)); });
  return out;
}

template <typename Record>
void write_records(const std::string& path, const std::vector<Record>& records) {
  std::vector<Json> lines;
  lines.reserve(records.size());
  for (const auto& r : records) lines.push_back(to_json(r));
  write_jsonl(path, lines);
}

void check_unique(const std::vector<std::string>& ids, const std::string& what) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!seen.insert(ids[i]).second) {
      throw SchemaError("duplicate " + what + " '" + ids[i] + "'", i + 1);
    }
  }
}

std::vector<DocumentRevision> revisions_from(const Json& obj, std::string_view field,
                                             std::size_t line) {
  const Json& arr = require_field(obj, field, line);
  if (!arr.is_array()) throw SchemaError(field_name(field) + " must be an array", line);
  std::vector<DocumentRevision> out;
  for (const auto& r : arr) out.push_back(revision_from_json(r, line));
  return out;
}

}  // namespace

std::string_view to_string(Split split) { return kSplitIds[static_cast<std::size_t>(split)]; }

std::optional<Split> parse_split(std::string_view id) {
  for (std::size_t i = 0; i < kSplitIds.size(); ++i) {
    if (kSplitIds[i] == id) return static_cast<Split>(i);
  }
  return std::nullopt;
}

void for_each_jsonl_text(std::string_view text,
                         const std::function<void(const Json&, std::size_t)>& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    Json obj;
    try {
      obj = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw SchemaError(std::string("malformed JSON: ") + e.what(), line_no);
    }
    if (!obj.is_object()) throw SchemaError("record is not a JSON object", line_no);
    fn(obj, line_no);
  }
}

void for_each_jsonl(const std::string& path,
                    const std::function<void(const Json&, std::size_t)>& fn) {
  for_each_jsonl_text(read_file(path), fn);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed on '" + path + "'");
  return buf.str();
}

void write_file_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  static std::atomic<unsigned long> counter{0};
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed on '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename into '" + path + "'");
  }
}

std::string dump_line(const Json& record) {
  return record.dump(-1, ' ', false, Json::error_handler_t::replace);
}

void write_jsonl(const std::string& path, const std::vector<Json>& records) {
  std::string text;
  for (const auto& r : records) {
    text += dump_line(r);
    text += '\n';
  }
  write_file_atomic(path, text);
}

const Json& require_field(const Json& obj, std::string_view field, std::size_t line) {
  auto it = obj.find(std::string(field));
  if (it == obj.end()) throw SchemaError("missing " + field_name(field), line);
  return *it;
}

std::string require_string(const Json& obj, std::string_view field, std::size_t line) {
  const Json& v = require_field(obj, field, line);
  if (!v.is_string()) throw SchemaError(field_name(field) + " must be a string", line);
  return v.get<std::string>();
}

std::int64_t require_int(const Json& obj, std::string_view field, std::size_t line) {
  const Json& v = require_field(obj, field, line);
  if (!v.is_number_integer()) throw SchemaError(field_name(field) + " must be an integer", line);
  return v.get<std::int64_t>();
}

double require_number(const Json& obj, std::string_view field, std::size_t line) {
  const Json& v = require_field(obj, field, line);
  if (!v.is_number()) throw SchemaError(field_name(field) + " must be a number", line);
  return v.get<double>();
}

bool require_bool(const Json& obj, std::string_view field, std::size_t line) {
  const Json& v = require_field(obj, field, line);
  if (!v.is_boolean()) throw SchemaError(field_name(field) + " must be a boolean", line);
  return v.get<bool>();
}

std::optional<std::string> optional_string(const Json& obj, std::string_view field,
                                           std::size_t line) {
  auto it = obj.find(std::string(field));
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw SchemaError(field_name(field) + " must be a string", line);
  return it->get<std::string>();
}

std::optional<double> optional_number(const Json& obj, std::string_view field,
                                      std::size_t line) {
  auto it = obj.find(std::string(field));
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw SchemaError(field_name(field) + " must be a number", line);
  return it->get<double>();
}

EditCategory require_category(const Json& obj, std::string_view field, std::size_t line) {
  std::string id = require_string(obj, field, line);
  auto c = parse_category(id);
  if (!c) throw SchemaError(field_name(field) + ": unknown category '" + id + "'", line);
  return *c;
}

Json to_json(const DocumentRevision& rev) {
  Json j;
  j["page_id"] = rev.page_id;
  j["revision_id"] = rev.revision_id;
  j["timestamp"] = rev.timestamp ? Json(format_timestamp(*rev.timestamp)) : Json(nullptr);
  j["title"] = rev.title;
  j["text"] = rev.text;
  j["source_wiki"] = std::string(to_string(rev.source_wiki));
  return j;
}

DocumentRevision revision_from_json(const Json& obj, std::size_t line) {
  if (!obj.is_object()) throw SchemaError("revision must be an object", line);
  DocumentRevision rev;
  rev.page_id = require_string(obj, "page_id", line);
  rev.revision_id = require_string(obj, "revision_id", line);
  if (auto ts = optional_string(obj, "timestamp", line)) {
    try {
      rev.timestamp = parse_timestamp(*ts);
    } catch (const InputError& e) {
      throw SchemaError("field 'timestamp': " + std::string(e.what()), line);
    }
  }
  rev.title = optional_string(obj, "title", line).value_or("");
  rev.text = require_string(obj, "text", line);
  std::string wiki = require_string(obj, "source_wiki", line);
  auto w = parse_wiki(wiki);
  if (!w) throw SchemaError("field 'source_wiki': unknown wiki '" + wiki + "'", line);
  rev.source_wiki = *w;
  return rev;
}

Json to_json(const PairRecord& pair) {
  Json j;
  j["pair_id"] = pair.pair_id;
  j["complex"] = to_json(pair.complex);
  j["simple"] = to_json(pair.simple);
  j["split"] = std::string(to_string(pair.split));
  j["wiki_categories"] = pair.wiki_categories;
  return j;
}

PairRecord pair_from_json(const Json& obj, std::size_t line) {
  PairRecord p;
  p.pair_id = require_string(obj, "pair_id", line);
  p.complex = revision_from_json(require_field(obj, "complex", line), line);
  p.simple = revision_from_json(require_field(obj, "simple", line), line);
  std::string split = require_string(obj, "split", line);
  auto s = parse_split(split);
  if (!s) throw SchemaError("field 'split': unknown split '" + split + "'", line);
  p.split = *s;
  if (auto it = obj.find("wiki_categories"); it != obj.end() && !it->is_null()) {
    if (!it->is_array()) throw SchemaError("field 'wiki_categories' must be an array", line);
    for (const auto& c : *it) {
      if (!c.is_string()) throw SchemaError("field 'wiki_categories' must hold strings", line);
      p.wiki_categories.push_back(c.get<std::string>());
    }
  }
  return p;
}

Json to_json(const AlignmentSequence& seq) {
  Json ops = Json::array();
  for (const auto& op : seq.operations()) {
    Json toks = Json::array();
    for (const auto& t : op.tokens) toks.push_back(t.surface);
    ops.push_back({{"index", op.index}, {"kind", std::string(to_string(op.kind))}, {"tokens", toks}});
  }
  return {{"pair_id", seq.pair_id()}, {"operations", ops}};
}

AlignmentSequence sequence_from_json(const Json& obj, std::size_t line) {
  std::string pair_id = require_string(obj, "pair_id", line);
  const Json& arr = require_field(obj, "operations", line);
  if (!arr.is_array()) throw SchemaError("field 'operations' must be an array", line);
  std::vector<EditOperation> ops;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const Json& o = arr[i];
    if (!o.is_object()) throw SchemaError("field 'operations' must hold objects", line);
    EditOperation op;
    std::int64_t index = require_int(o, "index", line);
    if (index != static_cast<std::int64_t>(i)) {
      throw SchemaError("field 'index': expected " + std::to_string(i), line);
    }
    op.index = i;
    std::string kind = require_string(o, "kind", line);
    auto k = parse_op_kind(kind);
    if (!k) throw SchemaError("field 'kind': unknown kind '" + kind + "'", line);
    op.kind = *k;
    const Json& toks = require_field(o, "tokens", line);
    if (!toks.is_array() || toks.empty()) {
      throw SchemaError("field 'tokens' must be a non-empty array", line);
    }
    for (const auto& t : toks) {
      if (!t.is_string() || t.get<std::string>().empty()) {
        throw SchemaError("field 'tokens' must hold non-empty strings", line);
      }
      op.tokens.emplace_back(t.get<std::string>());
    }
    if (i > 0 && ops.back().kind == op.kind) {
      throw SchemaError("field 'kind': adjacent operations share a kind", line);
    }
    ops.push_back(std::move(op));
  }
  return AlignmentSequence(std::move(pair_id), std::move(ops));
}

Json to_json(const AnnotationRecord& record) {
  Json groups = Json::array();
  for (const auto& g : record.groups) {
    groups.push_back({{"category", std::string(to_string(g.category))},
                      {"op_indices", std::vector<std::size_t>(g.op_indices.begin(),
                                                              g.op_indices.end())}});
  }
  Json j;
  j["pair_id"] = record.pair_id;
  j["annotator_id"] = record.annotator_id;
  j["unaligned"] = record.unaligned_flag;
  j["completed_at"] =
      record.completed_at ? Json(format_timestamp(*record.completed_at)) : Json(nullptr);
  j["groups"] = groups;
  return j;
}

AnnotationRecord annotation_from_json(const Json& obj, std::size_t line) {
  AnnotationRecord r;
  r.pair_id = require_string(obj, "pair_id", line);
  r.annotator_id = optional_string(obj, "annotator_id", line).value_or("");
  if (auto it = obj.find("unaligned"); it != obj.end() && !it->is_null()) {
    r.unaligned_flag = require_bool(obj, "unaligned", line);
  }
  if (auto ts = optional_string(obj, "completed_at", line)) {
    try {
      r.completed_at = parse_timestamp(*ts);
    } catch (const InputError& e) {
      throw SchemaError("field 'completed_at': " + std::string(e.what()), line);
    }
  }
  const Json& groups = require_field(obj, "groups", line);
  if (!groups.is_array()) throw SchemaError("field 'groups' must be an array", line);
  for (const auto& g : groups) {
    if (!g.is_object()) throw SchemaError("field 'groups' must hold objects", line);
    EditGroup group;
    group.category = require_category(g, "category", line);
    const Json& idx = require_field(g, "op_indices", line);
    if (!idx.is_array()) throw SchemaError("field 'op_indices' must be an array", line);
    for (const auto& i : idx) {
      if (!i.is_number_unsigned() && !(i.is_number_integer() && i.get<std::int64_t>() >= 0)) {
        throw SchemaError("field 'op_indices' must hold non-negative integers", line);
      }
      group.op_indices.insert(i.get<std::size_t>());
    }
    r.groups.push_back(std::move(group));
  }
  return r;
}

std::vector<PairRecord> read_pairs(const std::string& path) {
  auto pairs = read_records<PairRecord>(path, pair_from_json);
  std::vector<std::string> ids;
  for (auto& p : pairs) ids.push_back(p.pair_id);
  check_unique(ids, "pair_id");
  return pairs;
}

void write_pairs(const std::string& path, const std::vector<PairRecord>& pairs) {
  write_records(path, pairs);
}

std::vector<AlignmentSequence> read_sequences(const std::string& path) {
  auto seqs = read_records<AlignmentSequence>(path, sequence_from_json);
  std::vector<std::string> ids;
  for (auto& s : seqs) ids.push_back(s.pair_id());
  check_unique(ids, "pair_id");
  return seqs;
}

void write_sequences(const std::string& path, const std::vector<AlignmentSequence>& seqs) {
  write_records(path, seqs);
}

std::vector<AnnotationRecord> read_annotations(const std::string& path) {
  return read_records<AnnotationRecord>(path, annotation_from_json);
}

void write_annotations(const std::string& path, const std::vector<AnnotationRecord>& records) {
  write_records(path, records);
}

std::vector<PairLabel> read_labels(const std::string& path) {
  return read_records<PairLabel>(path, [](const Json& obj, std::size_t line) {
    PairLabel l;
    l.pair_id = require_string(obj, "pair_id", line);
    std::string label = require_string(obj, "label", line);
    if (label == "aligned") {
      l.aligned = true;
    } else if (label != "unaligned") {
      throw SchemaError("field 'label': expected aligned or unaligned", line);
    }
    return l;
  });
}

std::vector<Candidate> read_candidates(const std::string& path) {
  return read_records<Candidate>(path, [](const Json& obj, std::size_t line) {
    return Candidate{require_string(obj, "pair_id", line), require_string(obj, "candidate", line)};
  });
}

Json to_json(const PageHistory& h) {
  Json c = Json::array(), s = Json::array();
  for (const auto& r : h.complex_revisions) c.push_back(to_json(r));
  for (const auto& r : h.simple_revisions) s.push_back(to_json(r));
  return {{"page_id", h.page_id},
          {"complex_title", h.complex_title},
          {"simple_title", h.simple_title},
          {"complex_revisions", c},
          {"simple_revisions", s}};
}

PageHistory history_from_json(const Json& obj, std::size_t line) {
  PageHistory h;
  h.page_id = require_string(obj, "page_id", line);
  h.complex_title = require_string(obj, "complex_title", line);
  h.simple_title = require_string(obj, "simple_title", line);
  h.complex_revisions = revisions_from(obj, "complex_revisions", line);
  h.simple_revisions = revisions_from(obj, "simple_revisions", line);
  return h;
}

std::vector<PageHistory> read_histories(const std::string& path) {
  return read_records<PageHistory>(path, history_from_json);
}

void write_histories(const std::string& path, const std::vector<PageHistory>& histories) {
  write_records(path, histories);
}

}  // namespace docsimp
