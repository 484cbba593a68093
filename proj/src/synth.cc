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

#include "docsimp/synth.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <random>

#include "docsimp/align.h"
#include "docsimp/errors.h"

namespace docsimp {

namespace {

using Tokens = std::vector<std::string>;

struct Pools {
  Tokens names{"Anna", "Boris", "Clara", "Dmitri", "Elena", "Felix", "Greta", "Hugo"};
  Tokens places{"Paris", "Vienna", "Oslo", "Lima", "Kyoto", "Cairo", "Quebec"};
  Tokens adjs{"ancient", "prominent", "substantial", "elaborate", "renowned", "modest"};
  Tokens nouns{"theatre", "bridge", "library", "orchestra", "museum", "railway", "garden"};
  Tokens verbs{"constructed", "established", "renovated", "administered", "financed"};
  // complex word -> simpler word
  std::vector<std::pair<std::string, std::string>> synonyms{
      {"constructed", "built"},  {"established", "started"}, {"renovated", "fixed"},
      {"administered", "ran"},   {"financed", "paid"},       {"substantial", "big"},
      {"renowned", "famous"},    {"elaborate", "fancy"},     {"prominent", "well-known"},
      {"ancient", "old"},        {"modest", "small"}};
};

const Pools& pools() {
  static const Pools p;
  return p;
}

class Rng {
 public:
  explicit Rng(std::uint32_t seed) : g_(seed) {}
  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(g_); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(g_) < p; }
  const std::string& pick(const Tokens& v) { return v[below(v.size())]; }

 private:
  std::mt19937 g_;
};

struct Sentence {
  Tokens subject_verb;  // "Anna constructed the"
  Tokens object;        // "renowned theatre"
  Tokens place;         // "in Paris"
  Tokens cite;          // "[ 3 ]" or empty
};

Sentence make_sentence(Rng& rng) {
  const auto& p = pools();
  Sentence s;
  s.subject_verb = {rng.pick(p.names), rng.pick(p.verbs), "the"};
  s.object = {rng.pick(p.adjs), rng.pick(p.nouns)};
  s.place = {"in", rng.pick(p.places)};
  if (rng.chance(0.3)) s.cite = {"[", std::to_string(1 + rng.below(9)), "]"};
  return s;
}

void append(Tokens& out, const Tokens& t) { out.insert(out.end(), t.begin(), t.end()); }

Tokens render_complex(const Sentence& s) {
  Tokens out;
  append(out, s.subject_verb);
  append(out, s.object);
  append(out, s.place);
  out.push_back(".");
  append(out, s.cite);
  return out;
}

std::string simpler(const std::string& w) {
  for (const auto& [from, to] : pools().synonyms) {
    if (from == w) return to;
  }
  return w;
}

// One simplified rendering with a random mix of rewrites. With `keep` the
// sentence survives even when the drop roll says otherwise, so no simple
// document ends up empty.
Tokens render_simple(const Sentence& s, Rng& rng, bool keep) {
  if (rng.chance(0.1) && !keep) return {};  // sentence dropped
  Sentence t = s;
  if (rng.chance(0.6)) t.subject_verb[1] = simpler(t.subject_verb[1]);
  if (rng.chance(0.4)) t.object[0] = simpler(t.object[0]);
  t.cite.clear();
  bool drop_place = rng.chance(0.25);
  bool front_place = !drop_place && rng.chance(0.2);
  Tokens out;
  if (front_place) {
    Tokens lead = t.place;
    lead[0] = "In";
    append(out, lead);
    out.push_back(",");
  }
  append(out, t.subject_verb);
  append(out, t.object);
  if (!drop_place && !front_place) append(out, t.place);
  out.push_back(".");
  if (rng.chance(0.2)) {
    // Background sentence about the subject.
    append(out, {t.subject_verb[0], "was", "a", "local", "builder", "."});
  }
  if (rng.chance(0.05)) append(out, {"(", "listen", ")"});
  return out;
}

std::string join(const Tokens& t) {
  std::vector<Token> toks;
  toks.reserve(t.size());
  for (const auto& s : t) toks.emplace_back(s);
  return detokenize(toks);
}

bool is_citation(const std::vector<Token>& toks) {
  return !toks.empty() && toks.front().surface == "[" && toks.back().surface == "]";
}

// Same words, ignoring case and punctuation tokens.
bool same_words(const std::vector<Token>& a, const std::vector<Token>& b) {
  auto words = [](const std::vector<Token>& v) {
    std::vector<std::string> out;
    for (const auto& t : v) {
      if (t.is_punct) continue;
      std::string w = t.surface;
      for (auto& ch : w) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      out.push_back(w);
    }
    return out;
  };
  auto wa = words(a);
  return !wa.empty() && wa == words(b);
}

// Heuristic labels for the edits of one sequence. Every edit lands in at
// least one group.
std::vector<EditGroup> label(const AlignmentSequence& seq, Rng& rng) {
  std::vector<EditGroup> groups;
  std::vector<char> done(seq.size(), 0);
  const auto& ops = seq.operations();

  // Moved text: a delete and an insert with the same tokens.
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].kind != OpKind::kDelete || done[i]) continue;
    for (std::size_t j = 0; j < ops.size(); ++j) {
      if (ops[j].kind == OpKind::kInsert && !done[j] && same_words(ops[i].tokens, ops[j].tokens)) {
        groups.push_back({EditCategory::kReordering, {i, j}});
        done[i] = done[j] = 1;
        break;
      }
    }
  }
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (!ops[i].is_edit() || done[i]) continue;
    // An edit directly followed by the opposite edit is a rewrite.
    std::size_t j = i + 1;
    if (j < ops.size() && ops[j].is_edit() && !done[j]) {
      auto cat = rng.chance(0.85) ? EditCategory::kLexical : EditCategory::kSyntacticGeneric;
      groups.push_back({cat, {i, j}});
      done[i] = done[j] = 1;
      continue;
    }
    EditCategory cat;
    if (ops[i].kind == OpKind::kDelete) {
      if (is_citation(ops[i].tokens)) {
        cat = EditCategory::kNoiseDeletion;
      } else if (ops[i].tokens.size() > 4) {
        cat = EditCategory::kSemanticDeletion;
      } else {
        cat = rng.chance(0.5) ? EditCategory::kSyntacticDeletion : EditCategory::kSemanticDeletion;
      }
    } else {
      if (ops[i].tokens.size() == 3 && ops[i].tokens[1].surface == "listen") {
        cat = EditCategory::kFormat;
      } else if (ops[i].tokens.size() >= 5) {
        cat = EditCategory::kElaborationBackground;
      } else {
        cat = rng.chance(0.5) ? EditCategory::kElaborationGeneric : EditCategory::kLexical;
      }
    }
    groups.push_back({cat, {i}});
    done[i] = 1;
  }
  return canonical_groups(std::move(groups));
}

// Relabels some groups within their class (or occasionally anywhere) and
// splits some pairs of ops apart.
std::vector<EditGroup> perturb(std::vector<EditGroup> groups, double noise, Rng& rng) {
  std::vector<EditGroup> out;
  for (auto g : groups) {
    if (!rng.chance(noise)) {
      out.push_back(g);
      continue;
    }
    if (g.op_indices.size() > 1 && rng.chance(0.3)) {
      for (auto op : g.op_indices) out.push_back({g.category, {op}});
      continue;
    }
    std::vector<EditCategory> same;
    for (auto c : all_categories()) {
      if (c != g.category && class_of(c) == class_of(g.category)) same.push_back(c);
    }
    if (!same.empty() && rng.chance(0.7)) {
      g.category = same[rng.below(same.size())];
    } else {
      g.category = all_categories()[rng.below(kNumCategories)];
    }
    out.push_back(g);
  }
  return canonical_groups(std::move(out));
}

Timestamp at_day(int day, int seconds = 0) {
  using namespace std::chrono;
  return sys_seconds{sys_days{year{2020} / January / 1}} + days{day} + std::chrono::seconds{seconds};
}

Split split_for(std::size_t i) {
  switch (i % 10) {
    case 8:
      return Split::kValid;
    case 9:
      return Split::kTest;
    default:
      return Split::kTrain;
  }
}

}  // namespace

SynthCorpus generate_corpus(const SynthConfig& cfg) {
  if (cfg.min_sentences == 0 || cfg.min_sentences > cfg.max_sentences) {
    throw InputError("synthetic corpus needs 1 <= min_sentences <= max_sentences");
  }
  if (!(cfg.overlap >= 0 && cfg.overlap <= 1)) throw InputError("overlap must lie in [0, 1]");
  if (!(cfg.second_annotator_noise >= 0 && cfg.second_annotator_noise <= 1)) {
    throw InputError("second_annotator_noise must lie in [0, 1]");
  }
  Rng rng(cfg.seed);
  SynthCorpus out;
  for (std::size_t i = 0; i < cfg.pairs; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "syn-%05zu", i);
    std::size_t n = cfg.min_sentences + rng.below(cfg.max_sentences - cfg.min_sentences + 1);
    Tokens complex, simple;
    for (std::size_t k = 0; k < n; ++k) {
      auto s = make_sentence(rng);
      append(complex, render_complex(s));
      append(simple, render_simple(s, rng, k + 1 == n && simple.empty()));
    }
    PairRecord p;
    p.pair_id = id;
    p.split = split_for(i);
    p.wiki_categories = {"Synthetic"};
    p.complex = {"c" + std::to_string(i), std::to_string(1000 + 2 * i), at_day(static_cast<int>(i)),
                 "Page " + std::to_string(i), join(complex), Wiki::kComplex};
    p.simple = {"s" + std::to_string(i), std::to_string(1001 + 2 * i),
                at_day(static_cast<int>(i), 3600), "Page " + std::to_string(i), join(simple),
                Wiki::kSimple};

    auto seq = align_texts(p.complex.text, p.simple.text, {}, p.pair_id);
    auto groups = label(seq, rng);
    out.annotations.push_back({p.pair_id, groups, "a1", false, at_day(400)});
    if (rng.chance(cfg.overlap)) {
      out.annotations.push_back({p.pair_id, perturb(groups, cfg.second_annotator_noise, rng),
                                 "a2", false, at_day(401)});
    }
    out.pairs.push_back(std::move(p));
    out.sequences.push_back(std::move(seq));
  }
  return out;
}

std::vector<PageHistory> generate_histories(const SynthHistoryConfig& cfg) {
  if (cfg.complex_revisions == 0) throw InputError("need at least one complex revision");
  Rng rng(cfg.seed);
  std::vector<PageHistory> out;
  long rev = 5000;
  for (std::size_t pg = 0; pg < cfg.pages; ++pg) {
    PageHistory h;
    h.page_id = "page-" + std::to_string(pg);
    h.complex_title = "Page " + std::to_string(pg);
    h.simple_title = h.complex_title;
    std::vector<Sentence> doc;
    for (std::size_t k = 0; k < 3; ++k) doc.push_back(make_sentence(rng));

    // Complex revision r lives on day 10 * r; simple revisions land at
    // random days after some complex revision.
    std::vector<std::vector<Sentence>> states;
    for (std::size_t r = 0; r < cfg.complex_revisions; ++r) {
      if (r > 0) {
        auto& s = doc[rng.below(doc.size())];
        if (rng.chance(0.5)) {
          s.object[1] = rng.pick(pools().nouns);
        } else {
          doc.push_back(make_sentence(rng));
        }
      }
      states.push_back(doc);
      Tokens text;
      for (const auto& s : doc) append(text, render_complex(s));
      h.complex_revisions.push_back({h.page_id, std::to_string(rev++),
                                     at_day(static_cast<int>(10 * r)), h.complex_title, join(text),
                                     Wiki::kComplex});
    }
    std::vector<std::size_t> anchors;
    for (std::size_t k = 0; k < cfg.simple_revisions; ++k) {
      anchors.push_back(rng.below(cfg.complex_revisions));
    }
    std::sort(anchors.begin(), anchors.end());
    for (std::size_t k = 0, same = 0; k < anchors.size(); ++k) {
      same = k > 0 && anchors[k] == anchors[k - 1] ? same + 1 : 0;
      Tokens text;
      const auto& state = states[anchors[k]];
      for (std::size_t j = 0; j < state.size(); ++j) {
        append(text, render_simple(state[j], rng, j + 1 == state.size() && text.empty()));
      }
      h.simple_revisions.push_back({h.page_id, std::to_string(rev++),
                                    at_day(static_cast<int>(10 * anchors[k] + 1), static_cast<int>(same)),
                                    h.simple_title, join(text), Wiki::kSimple});
    }
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace docsimp
