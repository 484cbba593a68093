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

#include "docsimp/align.h"

#include <algorithm>
#include <cctype>
#include <cstdint>

#include "docsimp/errors.h"
#include "docsimp/utf8.h"

namespace docsimp {

namespace {

constexpr std::string_view kInsOpen = "<INS>";
constexpr std::string_view kInsClose = "</INS>";
constexpr std::string_view kDelOpen = "<DEL>";
constexpr std::string_view kDelClose = "</DEL>";

bool is_punct_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u) != 0;
}

// Length of the whitespace sequence at s[i], 0 if none. Covers ASCII
// whitespace and U+00A0, which is common in wiki dumps.
std::size_t whitespace_at(std::string_view s, std::size_t i) {
  const auto c = static_cast<unsigned char>(s[i]);
  if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') return 1;
  if (c == 0xC2 && i + 1 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0xA0) return 2;
  return 0;
}

struct Chunk {
  std::string_view text;
  std::size_t offset;
};

std::vector<Chunk> split_whitespace(std::string_view s) {
  std::vector<Chunk> chunks;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t ws = whitespace_at(s, i);
    if (ws > 0) {
      i += ws;
      continue;
    }
    std::size_t start = i;
    while (i < s.size() && whitespace_at(s, i) == 0) ++i;
    chunks.push_back({s.substr(start, i - start), start});
  }
  return chunks;
}

void append_chunk_tokens(std::string_view chunk, std::vector<Token>& out) {
  std::size_t begin = 0;
  std::size_t end = chunk.size();
  while (begin < end && is_punct_byte(chunk[begin])) {
    out.emplace_back(std::string(1, chunk[begin]));
    ++begin;
  }
  std::vector<Token> trailing;
  while (end > begin && is_punct_byte(chunk[end - 1])) {
    trailing.emplace_back(std::string(1, chunk[end - 1]));
    --end;
  }
  if (end > begin) out.emplace_back(std::string(chunk.substr(begin, end - begin)));
  out.insert(out.end(), trailing.rbegin(), trailing.rend());
}

// Backtrace steps, produced end to start.
enum class Step : std::uint8_t { kKeep, kDelete, kInsert };

std::vector<Step> min_edit_steps(std::span<const Token> a, std::span<const Token> b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const std::size_t width = m + 1;
  std::vector<std::uint32_t> cost((n + 1) * width);
  for (std::size_t j = 0; j <= m; ++j) cost[j] = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    std::uint32_t* row = &cost[i * width];
    const std::uint32_t* prev = &cost[(i - 1) * width];
    row[0] = static_cast<std::uint32_t>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      std::uint32_t best = std::min(prev[j], row[j - 1]) + 1;
      if (a[i - 1].surface == b[j - 1].surface) best = std::min(best, prev[j - 1]);
      row[j] = best;
    }
  }
  std::vector<Step> steps;
  steps.reserve(n + m);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const std::uint32_t here = cost[i * width + j];
    if (i > 0 && j > 0 && a[i - 1].surface == b[j - 1].surface &&
        here == cost[(i - 1) * width + j - 1]) {
      steps.push_back(Step::kKeep);
      --i;
      --j;
    } else if (i > 0 && here == cost[(i - 1) * width + j] + 1) {
      steps.push_back(Step::kDelete);
      --i;
    } else {
      steps.push_back(Step::kInsert);
      --j;
    }
  }
  std::reverse(steps.begin(), steps.end());
  return steps;
}

std::vector<Token> explode_characters(std::span<const Token> tokens) {
  std::vector<Token> out;
  for (const auto& t : tokens) {
    for (auto& cp : utf8::split_code_points(t.surface)) out.emplace_back(std::move(cp));
  }
  return out;
}

std::string join_surfaces(const std::vector<Token>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += tokens[i].surface;
  }
  return out;
}

bool contains_tag(std::string_view s) {
  return s.find(kInsOpen) != std::string_view::npos ||
         s.find(kInsClose) != std::string_view::npos ||
         s.find(kDelOpen) != std::string_view::npos ||
         s.find(kDelClose) != std::string_view::npos;
}

// Recognizes a generic opening label "<x>" at the start of s (tagged mode).
std::size_t label_length(std::string_view s) {
  if (s.size() < 3 || s[0] != '<' || s[1] == '/') return 0;
  std::size_t close = s.find('>');
  if (close == std::string_view::npos || close == 1) return 0;
  if (s.substr(1, close - 1).find('<') != std::string_view::npos) return 0;
  return close + 1;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  for (const auto& chunk : split_whitespace(text)) append_chunk_tokens(chunk.text, out);
  return out;
}

std::vector<Token> tokenize_characters(std::string_view text) {
  std::vector<Token> out;
  for (const auto& chunk : split_whitespace(text)) {
    for (auto& cp : utf8::split_code_points(chunk.text)) out.emplace_back(std::move(cp));
  }
  return out;
}

std::string detokenize(std::span<const Token> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += tokens[i].surface;
  }
  return out;
}

std::string normalize(std::string_view text) { return detokenize(tokenize(text)); }

AlignmentSequence align(std::span<const Token> complex, std::span<const Token> simple,
                        const AlignmentConfig& cfg, std::string pair_id) {
  std::vector<Token> exploded_a, exploded_b;
  if (cfg.granularity == Granularity::kCharacter) {
    exploded_a = explode_characters(complex);
    exploded_b = explode_characters(simple);
    complex = exploded_a;
    simple = exploded_b;
  }

  // A shared prefix and suffix is always part of some optimal alignment;
  // trimming them keeps the table small for near-identical documents.
  std::size_t prefix = 0;
  while (prefix < complex.size() && prefix < simple.size() &&
         complex[prefix].surface == simple[prefix].surface) {
    ++prefix;
  }
  std::size_t suffix = 0;
  while (suffix < complex.size() - prefix && suffix < simple.size() - prefix &&
         complex[complex.size() - 1 - suffix].surface ==
             simple[simple.size() - 1 - suffix].surface) {
    ++suffix;
  }
  auto a = complex.subspan(prefix, complex.size() - prefix - suffix);
  auto b = simple.subspan(prefix, simple.size() - prefix - suffix);
  const auto steps = min_edit_steps(a, b);

  std::vector<EditOperation> ops;
  auto push_keep = [&ops](std::span<const Token> toks) {
    if (toks.empty()) return;
    ops.push_back({0, OpKind::kKeep, {toks.begin(), toks.end()}});
  };
  push_keep(complex.first(prefix));

  std::vector<Token> kept, inserted, deleted;
  auto flush_gap = [&]() {
    if (!inserted.empty()) ops.push_back({0, OpKind::kInsert, std::move(inserted)});
    if (!deleted.empty()) ops.push_back({0, OpKind::kDelete, std::move(deleted)});
    inserted.clear();
    deleted.clear();
  };
  std::size_t i = 0, j = 0;
  for (Step step : steps) {
    switch (step) {
      case Step::kKeep:
        flush_gap();
        kept.push_back(a[i]);
        ++i;
        ++j;
        break;
      case Step::kDelete:
        if (!kept.empty()) push_keep(std::exchange(kept, {}));
        deleted.push_back(a[i++]);
        break;
      case Step::kInsert:
        if (!kept.empty()) push_keep(std::exchange(kept, {}));
        inserted.push_back(b[j++]);
        break;
    }
  }
  flush_gap();
  push_keep(kept);
  push_keep(complex.last(suffix));
  return AlignmentSequence(std::move(pair_id), std::move(ops));
}

AlignmentSequence align_texts(std::string_view complex, std::string_view simple,
                              const AlignmentConfig& cfg, std::string pair_id) {
  if (cfg.granularity == Granularity::kCharacter) {
    return align(tokenize_characters(complex), tokenize_characters(simple), {},
                 std::move(pair_id));
  }
  return align(tokenize(complex), tokenize(simple), cfg, std::move(pair_id));
}

std::vector<Token> source_tokens(const AlignmentSequence& seq) {
  std::vector<Token> out;
  for (const auto& op : seq.operations()) {
    if (op.kind != OpKind::kInsert) out.insert(out.end(), op.tokens.begin(), op.tokens.end());
  }
  return out;
}

std::vector<Token> target_tokens(const AlignmentSequence& seq) {
  std::vector<Token> out;
  for (const auto& op : seq.operations()) {
    if (op.kind != OpKind::kDelete) out.insert(out.end(), op.tokens.begin(), op.tokens.end());
  }
  return out;
}

std::string reconstruct_source(const AlignmentSequence& seq) {
  return detokenize(source_tokens(seq));
}

std::string reconstruct_target(const AlignmentSequence& seq) {
  return detokenize(target_tokens(seq));
}

std::size_t edit_cost(const AlignmentSequence& seq) {
  std::size_t cost = 0;
  for (const auto& op : seq.operations()) {
    if (op.is_edit()) cost += op.tokens.size();
  }
  return cost;
}

std::string serialize_markup(const AlignmentSequence& seq) {
  std::string out;
  for (const auto& op : seq.operations()) {
    if (!out.empty()) out.push_back(' ');
    switch (op.kind) {
      case OpKind::kKeep:
        out += join_surfaces(op.tokens);
        break;
      case OpKind::kInsert:
        out += kInsOpen;
        out += join_surfaces(op.tokens);
        out += kInsClose;
        break;
      case OpKind::kDelete:
        out += kDelOpen;
        out += join_surfaces(op.tokens);
        out += kDelClose;
        break;
    }
  }
  return out;
}

std::vector<MarkupOp> scan_markup(std::string_view text, bool tagged) {
  std::vector<MarkupOp> ops;
  MarkupOp keep;
  bool open = false;
  MarkupOp current;
  // kKeep while the open operation was started by labels rather than by
  // <INS>/<DEL>.
  OpKind opened_kind = OpKind::kKeep;

  auto flush_keep = [&]() {
    if (!keep.tokens.empty()) ops.push_back(std::move(keep));
    keep = MarkupOp{};
  };

  for (const auto& chunk : split_whitespace(text)) {
    std::string_view s = chunk.text;
    std::size_t pos = chunk.offset;

    // Opening tag(s).
    bool starts_plain = s.starts_with(kInsOpen) || s.starts_with(kDelOpen);
    std::size_t label_len = tagged && !starts_plain ? label_length(s) : 0;
    if (starts_plain || label_len > 0) {
      if (open) throw ParseError("nested tag inside an open operation", pos);
      flush_keep();
      open = true;
      current = MarkupOp{};
      current.offset = pos;
      opened_kind = OpKind::kKeep;
      if (starts_plain) {
        opened_kind = s.starts_with(kInsOpen) ? OpKind::kInsert : OpKind::kDelete;
        s.remove_prefix(kInsOpen.size());
        pos += kInsOpen.size();
      } else {
        while ((label_len = label_length(s)) > 0) {
          current.labels.emplace_back(s.substr(1, label_len - 2));
          s.remove_prefix(label_len);
          pos += label_len;
        }
      }
    }

    // Closing tag.
    std::optional<OpKind> closing;
    if (s.ends_with(kInsClose)) {
      closing = OpKind::kInsert;
      s.remove_suffix(kInsClose.size());
    } else if (s.ends_with(kDelClose)) {
      closing = OpKind::kDelete;
      s.remove_suffix(kDelClose.size());
    }

    if (!s.empty()) {
      if (contains_tag(s)) throw ParseError("unexpected tag inside token", pos);
      if (open) {
        current.tokens.emplace_back(std::string(s));
      } else {
        keep.tokens.emplace_back(std::string(s));
      }
    }

    if (closing) {
      const std::size_t close_pos = chunk.offset + chunk.text.size() -
                                    (*closing == OpKind::kInsert ? kInsClose : kDelClose).size();
      if (!open) throw ParseError("closing tag without an opening tag", close_pos);
      if (opened_kind != OpKind::kKeep && opened_kind != *closing) {
        throw ParseError("closing tag does not match opening tag", close_pos);
      }
      if (current.tokens.empty()) throw ParseError("empty operation", current.offset);
      current.kind = *closing;
      ops.push_back(std::move(current));
      current = MarkupOp{};
      open = false;
    }
  }
  if (open) throw ParseError("unclosed tag", current.offset);
  flush_keep();
  return ops;
}

AlignmentSequence parse_markup(std::string_view text, std::string pair_id) {
  std::vector<EditOperation> ops;
  for (auto& mop : scan_markup(text, /*tagged=*/false)) {
    ops.push_back({0, mop.kind, std::move(mop.tokens)});
  }
  return AlignmentSequence(std::move(pair_id), std::move(ops));
}

}  // namespace docsimp
