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

#include "docsimp/metrics.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

#include "docsimp/align.h"
#include "docsimp/errors.h"

namespace docsimp {

namespace {

double pct(double num, double den) { return den == 0 ? 0.0 : 100.0 * num / den; }

// Weighted multi-label F1 over any label type; `labels_of` maps one
// operation's categories to its label set.
template <typename Label, typename LabelsOf>
double weighted_f1(std::span<const OpCategories> pred, std::span<const OpCategories> ref,
                   LabelsOf labels_of, std::map<Label, LabelScore>* out) {
  if (pred.size() != ref.size()) throw InputError("prediction and reference pair counts differ");
  std::map<Label, LabelScore> scores;
  bool any_pred = false;
  for (std::size_t p = 0; p < ref.size(); ++p) {
    std::set<std::size_t> ops;
    for (const auto& kv : pred[p]) ops.insert(kv.first);
    for (const auto& kv : ref[p]) ops.insert(kv.first);
    for (auto op : ops) {
      std::set<Label> pl, rl;
      if (auto it = pred[p].find(op); it != pred[p].end()) pl = labels_of(it->second);
      if (auto it = ref[p].find(op); it != ref[p].end()) rl = labels_of(it->second);
      any_pred = any_pred || !pl.empty();
      for (const auto& l : rl) {
        ++scores[l].support;
        if (pl.count(l)) {
          ++scores[l].tp;
        } else {
          ++scores[l].fn;
        }
      }
      for (const auto& l : pl) {
        if (!rl.count(l)) ++scores[l].fp;
      }
    }
  }
  double num = 0, den = 0;
  for (auto& [label, s] : scores) {
    double d = 2.0 * s.tp + s.fp + s.fn;
    s.f1 = d == 0 ? 0.0 : 100.0 * 2.0 * s.tp / d;
    if (s.support > 0) {
      num += s.f1 * static_cast<double>(s.support);
      den += static_cast<double>(s.support);
    }
  }
  if (out) *out = scores;
  if (den == 0) return any_pred ? 0.0 : 100.0;
  return num / den;
}

double group_match(std::span<const EditGroup> pred, std::span<const EditGroup> ref, bool exact) {
  if (ref.empty()) return pred.empty() ? 100.0 : 0.0;
  std::size_t hits = 0;
  for (const auto& r : ref) {
    hits += std::any_of(pred.begin(), pred.end(), [&](const EditGroup& p) {
      return p.category == r.category &&
             (exact ? p.op_indices == r.op_indices : jaccard(p.op_indices, r.op_indices) >= 0.5);
    });
  }
  return pct(static_cast<double>(hits), static_cast<double>(ref.size()));
}

bool is_terminal(const Token& t) {
  return !t.surface.empty() && std::all_of(t.surface.begin(), t.surface.end(), [](char c) {
    return c == '.' || c == '!' || c == '?';
  });
}

bool is_word(const Token& t) {
  return std::any_of(t.surface.begin(), t.surface.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || std::isalnum(u) != 0;
  });
}

// Annotators of one pair, sorted by id, flagged records removed.
std::map<std::string, std::vector<const AnnotationRecord*>> by_pair(
    std::span<const AnnotationRecord> records) {
  std::map<std::string, std::map<std::string, const AnnotationRecord*>> tmp;
  for (const auto& r : records) {
    if (r.unaligned_flag) continue;
    tmp[r.pair_id].emplace(r.annotator_id, &r);
  }
  std::map<std::string, std::vector<const AnnotationRecord*>> out;
  for (auto& [pair, m] : tmp) {
    for (auto& kv : m) out[pair].push_back(kv.second);
  }
  return out;
}

std::set<EditClass> classes_in(const AnnotationRecord& r) {
  std::set<EditClass> out;
  for (const auto& g : r.groups) out.insert(class_of(g.category));
  return out;
}

const AlignmentSequence& sequence_for(const SequenceMap& seqs, const std::string& pair_id) {
  auto it = seqs.find(pair_id);
  if (it == seqs.end()) throw LookupError("no sequence for pair '" + pair_id + "'");
  return it->second;
}

// n-grams joined with a unit separator, counted.
using Counts = std::unordered_map<std::string, int>;

Counts count_ngrams(const std::vector<std::string>& toks, std::size_t n) {
  Counts c;
  if (toks.size() < n) return c;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    std::string key = toks[i];
    for (std::size_t k = 1; k < n; ++k) {
      key += '\x1f';
      key += toks[i + k];
    }
    ++c[key];
  }
  return c;
}

int count_of(const Counts& c, const std::string& key) {
  auto it = c.find(key);
  return it == c.end() ? 0 : it->second;
}

double f1_or_vacuous(bool p_empty, bool r_empty, double p, double r) {
  if (p_empty && r_empty) return 1.0;
  return p + r > 0 ? 2 * p * r / (p + r) : 0.0;
}

// One n-gram order: mean of keep F1, deletion precision, addition F1.
double sari_order(const std::vector<std::string>& src, const std::vector<std::string>& cand,
                  const std::vector<std::vector<std::string>>& refs, std::size_t n) {
  const int k = static_cast<int>(refs.size());
  Counts s = count_ngrams(src, n), c = count_ngrams(cand, n), r;
  for (const auto& ref : refs) {
    for (const auto& [g, v] : count_ngrams(ref, n)) r[g] += v;
  }

  double keep_p_sum = 0, keep_r_sum = 0, del_p_sum = 0;
  int keep_p_n = 0, keep_r_n = 0, del_n = 0, del_ref_n = 0;
  for (const auto& [g, sv] : s) {
    int sk = sv * k, ck = count_of(c, g) * k, rv = count_of(r, g);
    int keep = std::min(sk, ck), keep_ref = std::min(sk, rv);
    int kept_good = std::min(keep, rv);
    if (keep > 0) {
      ++keep_p_n;
      keep_p_sum += static_cast<double>(kept_good) / keep;
    }
    if (keep_ref > 0) {
      ++keep_r_n;
      keep_r_sum += static_cast<double>(kept_good) / keep_ref;
    }
    int del = std::max(sk - ck, 0);
    if (del > 0) {
      ++del_n;
      del_p_sum += static_cast<double>(std::max(del - rv, 0)) / del;
    }
    if (sk - rv > 0) ++del_ref_n;
  }
  double keep_f1 = f1_or_vacuous(keep_p_n == 0, keep_r_n == 0,
                                 keep_p_n ? keep_p_sum / keep_p_n : 0.0,
                                 keep_r_n ? keep_r_sum / keep_r_n : 0.0);
  double del_p = (del_n == 0 && del_ref_n == 0) ? 1.0 : (del_n ? del_p_sum / del_n : 0.0);

  std::size_t added = 0, added_good = 0, ref_added = 0;
  for (const auto& [g, v] : c) {
    if (s.count(g)) continue;
    ++added;
    added_good += r.count(g);
  }
  for (const auto& [g, v] : r) ref_added += !s.count(g);
  double add_f1 = f1_or_vacuous(added == 0, ref_added == 0,
                                added ? static_cast<double>(added_good) / added : 0.0,
                                ref_added ? static_cast<double>(added_good) / ref_added : 0.0);
  return (keep_f1 + del_p + add_f1) / 3.0;
}

std::vector<std::string> surfaces(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize(text)) out.push_back(std::move(t.surface));
  return out;
}

std::string fmt(double v, int decimals = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v, 4) : "undefined"; }

Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string pad(std::string s, std::size_t width) {
  s.append(s.size() < width ? width - s.size() : 1, ' ');
  return s;
}

}  // namespace

OpCategories op_categories(const TaggedOperations& tags) {
  OpCategories out;
  for (const auto& [op, list] : tags.tags) {
    for (const auto& t : list) out[op].insert(t.category);
  }
  return out;
}

OpCategories op_categories(std::span<const EditGroup> groups) {
  OpCategories out;
  for (const auto& g : groups) {
    for (auto op : g.op_indices) out[op].insert(g.category);
  }
  return out;
}

double category_f1(std::span<const OpCategories> pred, std::span<const OpCategories> ref,
                   std::map<EditCategory, LabelScore>* per_category) {
  return weighted_f1<EditCategory>(
      pred, ref, [](const std::set<EditCategory>& s) { return s; }, per_category);
}

double class_f1(std::span<const OpCategories> pred, std::span<const OpCategories> ref,
                std::map<EditClass, LabelScore>* per_class) {
  return weighted_f1<EditClass>(
      pred, ref,
      [](const std::set<EditCategory>& s) {
        std::set<EditClass> out;
        for (auto c : s) out.insert(class_of(c));
        return out;
      },
      per_class);
}

double jaccard(const std::set<std::size_t>& a, const std::set<std::size_t>& b) {
  std::size_t inter = 0;
  for (auto x : a) inter += b.count(x);
  std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double group_exact(std::span<const EditGroup> pred, std::span<const EditGroup> ref) {
  return group_match(pred, ref, true);
}

double group_partial(std::span<const EditGroup> pred, std::span<const EditGroup> ref) {
  return group_match(pred, ref, false);
}

IdentificationReport evaluate_identification(std::span<const PairGroups> pairs) {
  IdentificationReport rep;
  rep.pairs = pairs.size();
  std::vector<OpCategories> pred, ref;
  for (const auto& p : pairs) {
    pred.push_back(op_categories(p.pred));
    ref.push_back(op_categories(p.ref));
  }
  std::map<EditCategory, LabelScore> per_cat;
  rep.category_f1 = category_f1(pred, ref, &per_cat);
  rep.class_f1 = class_f1(pred, ref);

  std::size_t ref_groups = 0, pred_groups = 0;
  double exact_hits = 0, partial_hits = 0;
  std::map<EditCategory, std::pair<double, double>> cat_hits;
  for (const auto& p : pairs) {
    pred_groups += p.pred.size();
    for (const auto& r : p.ref) {
      std::span<const EditGroup> one(&r, 1);
      double e = group_exact(p.pred, one) / 100.0, q = group_partial(p.pred, one) / 100.0;
      exact_hits += e;
      partial_hits += q;
      ++ref_groups;
      auto& b = rep.per_category[r.category];
      ++b.ref_groups;
      cat_hits[r.category].first += e;
      cat_hits[r.category].second += q;
    }
  }
  if (ref_groups == 0) {
    rep.pct_exact = rep.pct_partial = pred_groups == 0 ? 100.0 : 0.0;
  } else {
    rep.pct_exact = pct(exact_hits, static_cast<double>(ref_groups));
    rep.pct_partial = pct(partial_hits, static_cast<double>(ref_groups));
  }
  for (auto& [c, s] : per_cat) rep.per_category[c].f1 = s;
  for (auto& [c, b] : rep.per_category) {
    b.pct_exact = pct(cat_hits[c].first, static_cast<double>(b.ref_groups));
    b.pct_partial = pct(cat_hits[c].second, static_cast<double>(b.ref_groups));
  }
  return rep;
}

std::optional<double> fleiss_kappa(const std::vector<std::vector<int>>& ratings,
                                   int num_categories) {
  if (ratings.empty()) return std::nullopt;
  const std::size_t n = ratings[0].size();
  if (n < 2) throw InputError("Fleiss kappa needs at least two raters per item");
  std::vector<double> totals(static_cast<std::size_t>(num_categories), 0.0);
  double agreement_sum = 0;
  for (const auto& item : ratings) {
    if (item.size() != n) throw InputError("Fleiss kappa needs the same rater count per item");
    std::vector<double> counts(totals.size(), 0.0);
    for (int c : item) {
      if (c < 0 || c >= num_categories) throw InputError("rating outside the category range");
      counts[static_cast<std::size_t>(c)] += 1;
    }
    double same = 0;
    for (std::size_t j = 0; j < counts.size(); ++j) {
      same += counts[j] * (counts[j] - 1);
      totals[j] += counts[j];
    }
    agreement_sum += same / (static_cast<double>(n) * static_cast<double>(n - 1));
  }
  const double items = static_cast<double>(ratings.size());
  const double p_bar = agreement_sum / items;
  double p_e = 0;
  for (double t : totals) {
    double share = t / (items * static_cast<double>(n));
    p_e += share * share;
  }
  if (p_e >= 1.0) return std::nullopt;
  if (p_bar == 1.0) return 1.0;
  return (p_bar - p_e) / (1.0 - p_e);
}

std::optional<double> cohen_kappa(const std::vector<bool>& a, const std::vector<bool>& b) {
  if (a.size() != b.size()) throw InputError("Cohen kappa needs equally long rating vectors");
  if (a.empty()) return std::nullopt;
  double n = static_cast<double>(a.size());
  double agree = 0, a_yes = 0, b_yes = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    agree += a[i] == b[i];
    a_yes += a[i];
    b_yes += b[i];
  }
  double p_o = agree / n;
  double p_e = (a_yes / n) * (b_yes / n) + (1 - a_yes / n) * (1 - b_yes / n);
  if (p_e >= 1.0) return std::nullopt;
  if (p_o == 1.0) return 1.0;
  return (p_o - p_e) / (1 - p_e);
}

std::vector<AnnotationRecord> primary_annotations(std::span<const AnnotationRecord> records) {
  std::map<std::string, const AnnotationRecord*> best;
  for (const auto& r : records) {
    auto& slot = best[r.pair_id];
    auto key = [](const AnnotationRecord* x) {
      return std::make_pair(x->unaligned_flag, x->annotator_id);
    };
    if (slot == nullptr || key(&r) < key(slot)) slot = &r;
  }
  std::vector<AnnotationRecord> out;
  for (auto& kv : best) out.push_back(*kv.second);
  return out;
}

AgreementReport agreement(std::span<const AnnotationRecord> records, const SequenceMap& seqs) {
  AgreementReport rep;
  std::map<std::string, std::vector<const AnnotationRecord*>> multi;
  for (auto& [pair, list] : by_pair(records)) {
    if (list.size() >= 2) multi[pair] = list;
  }
  if (multi.empty()) return rep;
  rep.pairs = multi.size();
  rep.raters = SIZE_MAX;
  for (auto& kv : multi) rep.raters = std::min(rep.raters, kv.second.size());
  for (auto& kv : multi) kv.second.resize(rep.raters);

  std::vector<std::vector<int>> pooled, op_level;
  std::map<EditClass, std::vector<std::vector<int>>> per_class;
  std::map<EditCategory, std::pair<std::vector<bool>, std::vector<bool>>> cohen;
  for (const auto& [pair, annotators] : multi) {
    const auto& seq = sequence_for(seqs, pair);
    std::vector<std::set<EditClass>> present;
    std::vector<OpCategories> per_op;
    for (const auto* a : annotators) {
      present.push_back(classes_in(*a));
      per_op.push_back(op_categories(a->groups));
    }
    for (auto cls : all_classes()) {
      std::vector<int> row;
      for (const auto& p : present) row.push_back(p.count(cls) ? 1 : 0);
      pooled.push_back(row);
      per_class[cls].push_back(row);
    }
    auto edits = seq.edit_indices();
    for (auto op : edits) {
      for (auto cls : all_classes()) {
        std::vector<int> row;
        for (const auto& m : per_op) {
          bool has = false;
          if (auto it = m.find(op); it != m.end()) {
            for (auto c : it->second) has = has || class_of(c) == cls;
          }
          row.push_back(has ? 1 : 0);
        }
        op_level.push_back(row);
      }
    }
    for (std::size_t i = 0; i < per_op.size(); ++i) {
      for (std::size_t j = i + 1; j < per_op.size(); ++j) {
        for (auto c : all_categories()) {
          auto& [va, vb] = cohen[c];
          for (auto op : edits) {
            auto has = [&](const OpCategories& m) {
              auto it = m.find(op);
              return it != m.end() && it->second.count(c) > 0;
            };
            va.push_back(has(per_op[i]));
            vb.push_back(has(per_op[j]));
          }
        }
      }
    }
  }
  rep.fleiss_pooled = fleiss_kappa(pooled, 2);
  rep.fleiss_op_level = fleiss_kappa(op_level, 2);
  double sum = 0;
  int defined = 0;
  for (auto cls : all_classes()) {
    auto k = fleiss_kappa(per_class[cls], 2);
    rep.fleiss_per_class[cls] = k;
    if (k) {
      sum += *k;
      ++defined;
    }
  }
  if (defined > 0) rep.fleiss_class_average = sum / defined;
  for (auto c : all_categories()) {
    auto& [va, vb] = cohen[c];
    rep.cohen_per_category[c] = cohen_kappa(va, vb);
  }
  return rep;
}

std::vector<std::size_t> sentence_ids(std::span<const Token> tokens) {
  std::vector<std::size_t> out;
  std::size_t sentence = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out.push_back(sentence);
    if (is_terminal(tokens[i]) && (i + 1 == tokens.size() || !is_terminal(tokens[i + 1]))) {
      ++sentence;
    }
  }
  return out;
}

std::map<EditCategory, double> multi_sentence_rate(std::span<const AnnotationRecord> records,
                                                   const SequenceMap& seqs) {
  std::map<EditCategory, std::pair<double, double>> tally;  // (multi, total)
  for (const auto& r : records) {
    if (r.unaligned_flag) continue;
    const auto& seq = sequence_for(seqs, r.pair_id);
    auto src = source_tokens(seq);
    auto sid = sentence_ids(src);
    // Sentences touched by each operation.
    std::vector<std::set<std::size_t>> op_sentences(seq.size());
    std::size_t pos = 0;
    for (const auto& op : seq.operations()) {
      if (op.kind == OpKind::kInsert) {
        if (!sid.empty()) op_sentences[op.index].insert(pos < sid.size() ? sid[pos] : sid.back());
        continue;
      }
      for (std::size_t k = 0; k < op.tokens.size(); ++k) op_sentences[op.index].insert(sid[pos++]);
    }
    for (const auto& g : r.groups) {
      std::set<std::size_t> touched;
      for (auto op : g.op_indices) {
        if (op < op_sentences.size()) touched.insert(op_sentences[op].begin(), op_sentences[op].end());
      }
      auto& t = tally[g.category];
      t.first += touched.size() > 1;
      t.second += 1;
    }
  }
  std::map<EditCategory, double> out;
  for (auto& [c, t] : tally) out[c] = pct(t.first, t.second);
  return out;
}

CorpusStats corpus_stats(std::span<const AnnotationRecord> records, const SequenceMap& seqs) {
  CorpusStats st;
  std::map<EditCategory, std::size_t> docs_with, ops_total, ins_only, del_only, both;
  std::map<EditClass, std::size_t> class_docs;
  std::size_t representable = 0;
  for (const auto& r : records) {
    if (r.unaligned_flag) {
      ++st.flagged;
      continue;
    }
    ++st.documents;
    const auto& seq = sequence_for(seqs, r.pair_id);
    std::set<EditCategory> cats;
    for (const auto& g : r.groups) {
      cats.insert(g.category);
      ++st.per_category[g.category].groups;
      ops_total[g.category] += g.op_indices.size();
      bool ins = false, del = false;
      for (auto op : g.op_indices) {
        if (op >= seq.size()) continue;
        ins = ins || seq[op].kind == OpKind::kInsert;
        del = del || seq[op].kind == OpKind::kDelete;
      }
      if (ins && del) {
        ++both[g.category];
      } else if (ins) {
        ++ins_only[g.category];
      } else if (del) {
        ++del_only[g.category];
      }
    }
    for (auto c : cats) ++docs_with[c];
    auto classes = classes_in(r);
    for (auto cls : classes) ++class_docs[cls];
    ++st.groups_per_doc[r.groups.size()];
    classes.erase(EditClass::kNonSimplification);
    ++st.classes_per_doc[classes.size()];
    try {
      encode_bic(r, seq);
      ++representable;
    } catch (const RepresentabilityError&) {
    } catch (const InputError&) {
    }
  }
  const double docs = static_cast<double>(st.documents);
  for (auto& [c, s] : st.per_category) {
    const double n = static_cast<double>(s.groups);
    s.pct_docs = pct(static_cast<double>(docs_with[c]), docs);
    s.mean_ops = n == 0 ? 0 : static_cast<double>(ops_total[c]) / n;
    s.pct_insert_only = pct(static_cast<double>(ins_only[c]), n);
    s.pct_delete_only = pct(static_cast<double>(del_only[c]), n);
    s.pct_replace = pct(static_cast<double>(both[c]), n);
  }
  for (auto cls : all_classes()) {
    st.class_pct_docs[cls] = pct(static_cast<double>(class_docs[cls]), docs);
  }
  st.pct_bic_representable = pct(static_cast<double>(representable), docs);
  return st;
}

double compression_ratio(std::string_view complex, std::string_view simple) {
  auto c = tokenize(complex).size(), s = tokenize(simple).size();
  if (c == 0) {
    if (s == 0) return 1.0;
    throw InputError("compression ratio of an empty complex document");
  }
  return static_cast<double>(s) / static_cast<double>(c);
}

std::size_t count_syllables(std::string_view word) {
  std::string w;
  for (char ch : word) {
    auto u = static_cast<unsigned char>(ch);
    if (std::isalpha(u)) w += static_cast<char>(std::tolower(u));
  }
  auto vowel = [](char ch) { return std::string_view("aeiouy").find(ch) != std::string_view::npos; };
  std::size_t groups = 0;
  bool prev = false;
  for (char ch : w) {
    bool v = vowel(ch);
    if (v && !prev) ++groups;
    prev = v;
  }
  if (groups > 1 && w.size() >= 2 && w.back() == 'e' && w[w.size() - 2] != 'l') --groups;
  return std::max<std::size_t>(groups, 1);
}

double fkgl(std::string_view text) {
  auto tokens = tokenize(text);
  auto sid = sentence_ids(tokens);
  std::set<std::size_t> sentences;
  double words = 0, syllables = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!is_word(tokens[i])) continue;
    words += 1;
    syllables += static_cast<double>(count_syllables(tokens[i].surface));
    sentences.insert(sid[i]);
  }
  if (words == 0) throw InputError("FKGL needs at least one word");
  return 0.39 * (words / static_cast<double>(sentences.size())) + 11.8 * (syllables / words) -
         15.59;
}

double sari(std::string_view source, std::string_view candidate,
            const std::vector<std::string>& references, std::size_t max_n) {
  if (references.empty()) throw InputError("SARI needs at least one reference");
  if (max_n == 0) throw InputError("SARI needs max_n >= 1");
  auto src = surfaces(source), cand = surfaces(candidate);
  std::vector<std::vector<std::string>> refs;
  for (const auto& r : references) refs.push_back(surfaces(r));
  double total = 0;
  for (std::size_t n = 1; n <= max_n; ++n) total += sari_order(src, cand, refs, n);
  return 100.0 * total / static_cast<double>(max_n);
}

std::map<EditCategory, double> category_distribution(
    std::span<const std::vector<EditGroup>> groups_per_doc) {
  std::map<EditCategory, double> counts;
  double total = 0;
  for (const auto& doc : groups_per_doc) {
    for (const auto& g : doc) {
      counts[g.category] += 1;
      total += 1;
    }
  }
  for (auto& [c, v] : counts) v = pct(v, total);
  return counts;
}

// ---------------------------------------------------------------------------
// Rendering

Json to_json(const IdentificationReport& r) {
  Json per = Json::object();
  for (const auto& [c, b] : r.per_category) {
    per[std::string(to_string(c))] = {{"f1", b.f1.f1},
                                      {"support", b.f1.support},
                                      {"ref_groups", b.ref_groups},
                                      {"pct_exact", b.pct_exact},
                                      {"pct_partial", b.pct_partial}};
  }
  return {{"pairs", r.pairs},       {"category_f1", r.category_f1}, {"class_f1", r.class_f1},
          {"pct_exact", r.pct_exact}, {"pct_partial", r.pct_partial}, {"per_category", per}};
}

Json to_json(const AgreementReport& r) {
  Json per_class = Json::object(), cohen = Json::object();
  for (const auto& [c, k] : r.fleiss_per_class) per_class[std::string(to_string(c))] = opt_json(k);
  for (const auto& [c, k] : r.cohen_per_category) cohen[std::string(to_string(c))] = opt_json(k);
  return {{"pairs", r.pairs},
          {"raters", r.raters},
          {"fleiss_pooled", opt_json(r.fleiss_pooled)},
          {"fleiss_per_class", per_class},
          {"fleiss_class_average", opt_json(r.fleiss_class_average)},
          {"fleiss_op_level", opt_json(r.fleiss_op_level)},
          {"cohen_per_category", cohen}};
}

Json to_json(const CorpusStats& r) {
  Json per = Json::object(), cls = Json::object(), gpd = Json::object(), cpd = Json::object();
  for (const auto& [c, s] : r.per_category) {
    per[std::string(to_string(c))] = {{"groups", s.groups},
                                      {"pct_docs", s.pct_docs},
                                      {"mean_ops", s.mean_ops},
                                      {"pct_insert_only", s.pct_insert_only},
                                      {"pct_delete_only", s.pct_delete_only},
                                      {"pct_replace", s.pct_replace}};
  }
  for (const auto& [c, v] : r.class_pct_docs) cls[std::string(to_string(c))] = v;
  for (const auto& [k, v] : r.groups_per_doc) gpd[std::to_string(k)] = v;
  for (const auto& [k, v] : r.classes_per_doc) cpd[std::to_string(k)] = v;
  return {{"documents", r.documents},     {"flagged", r.flagged},
          {"per_category", per},          {"class_pct_docs", cls},
          {"groups_per_doc", gpd},        {"classes_per_doc", cpd},
          {"pct_bic_representable", r.pct_bic_representable}};
}

Json to_json(const GenerationReport& r) {
  Json dist = Json::object();
  for (const auto& [c, v] : r.category_distribution) dist[std::string(to_string(c))] = v;
  return {{"documents", r.documents},
          {"sari", r.sari},
          {"fkgl", r.fkgl},
          {"compression_ratio", r.compression_ratio},
          {"category_distribution", dist}};
}

std::string to_text(const IdentificationReport& r) {
  std::string s = "pairs        " + std::to_string(r.pairs) + "\n";
  s += "category_f1  " + fmt(r.category_f1) + "\n";
  s += "class_f1     " + fmt(r.class_f1) + "\n";
  s += "pct_partial  " + fmt(r.pct_partial) + "\n";
  s += "pct_exact    " + fmt(r.pct_exact) + "\n";
  if (!r.per_category.empty()) {
    s += "\n" + pad("category", 24) + pad("f1", 9) + pad("support", 9) + pad("groups", 8) +
         pad("%part", 9) + "%exact\n";
    for (const auto& [c, b] : r.per_category) {
      s += pad(std::string(to_string(c)), 24) + pad(fmt(b.f1.f1), 9) +
           pad(std::to_string(b.f1.support), 9) + pad(std::to_string(b.ref_groups), 8) +
           pad(fmt(b.pct_partial), 9) + fmt(b.pct_exact) + "\n";
    }
  }
  return s;
}

std::string to_text(const AgreementReport& r) {
  std::string s = "pairs                 " + std::to_string(r.pairs) + "\n";
  s += "raters                " + std::to_string(r.raters) + "\n";
  s += "fleiss_pooled         " + fmt(r.fleiss_pooled) + "\n";
  s += "fleiss_class_average  " + fmt(r.fleiss_class_average) + "\n";
  s += "fleiss_op_level       " + fmt(r.fleiss_op_level) + "\n";
  for (const auto& [c, k] : r.fleiss_per_class) {
    s += pad("fleiss." + std::string(to_string(c)), 22) + fmt(k) + "\n";
  }
  for (const auto& [c, k] : r.cohen_per_category) {
    s += pad("cohen." + std::string(to_string(c)), 34) + fmt(k) + "\n";
  }
  return s;
}

std::string to_text(const CorpusStats& r) {
  std::string s = "documents  " + std::to_string(r.documents) + "\n";
  s += "flagged    " + std::to_string(r.flagged) + "\n";
  s += "bic_ok     " + fmt(r.pct_bic_representable) + "\n\n";
  s += pad("category", 24) + pad("N", 7) + pad("%docs", 9) + pad("#O", 7) + pad("%I", 9) +
       pad("%D", 9) + "%I+D\n";
  for (const auto& [c, st] : r.per_category) {
    s += pad(std::string(to_string(c)), 24) + pad(std::to_string(st.groups), 7) +
         pad(fmt(st.pct_docs), 9) + pad(fmt(st.mean_ops), 7) + pad(fmt(st.pct_insert_only), 9) +
         pad(fmt(st.pct_delete_only), 9) + fmt(st.pct_replace) + "\n";
  }
  s += "\n";
  for (const auto& [c, v] : r.class_pct_docs) {
    s += pad("class." + std::string(to_string(c)), 30) + fmt(v) + "\n";
  }
  for (const auto& [k, v] : r.groups_per_doc) {
    s += pad("groups_per_doc." + std::to_string(k), 30) + std::to_string(v) + "\n";
  }
  for (const auto& [k, v] : r.classes_per_doc) {
    s += pad("classes_per_doc." + std::to_string(k), 30) + std::to_string(v) + "\n";
  }
  return s;
}

std::string to_text(const GenerationReport& r) {
  std::string s = "documents          " + std::to_string(r.documents) + "\n";
  s += "sari               " + fmt(r.sari) + "\n";
  s += "fkgl               " + fmt(r.fkgl) + "\n";
  s += "compression_ratio  " + fmt(r.compression_ratio, 3) + "\n";
  for (const auto& [c, v] : r.category_distribution) {
    s += pad(std::string(to_string(c)), 24) + fmt(v) + "\n";
  }
  return s;
}

std::string to_csv(const IdentificationReport& r) {
  std::string s = "category,f1,support,ref_groups,pct_partial,pct_exact\n";
  s += "ALL," + fmt(r.category_f1, 4) + ",,," + fmt(r.pct_partial, 4) + "," +
       fmt(r.pct_exact, 4) + "\n";
  for (const auto& [c, b] : r.per_category) {
    s += std::string(to_string(c)) + "," + fmt(b.f1.f1, 4) + "," + std::to_string(b.f1.support) +
         "," + std::to_string(b.ref_groups) + "," + fmt(b.pct_partial, 4) + "," +
         fmt(b.pct_exact, 4) + "\n";
  }
  return s;
}

std::string to_csv(const AgreementReport& r) {
  std::string s = "measure,label,kappa\n";
  auto cell = [](const std::optional<double>& k) { return k ? fmt(*k, 6) : std::string(); };
  s += "fleiss_pooled,," + cell(r.fleiss_pooled) + "\n";
  s += "fleiss_class_average,," + cell(r.fleiss_class_average) + "\n";
  s += "fleiss_op_level,," + cell(r.fleiss_op_level) + "\n";
  for (const auto& [c, k] : r.fleiss_per_class) {
    s += "fleiss_class," + std::string(to_string(c)) + "," + cell(k) + "\n";
  }
  for (const auto& [c, k] : r.cohen_per_category) {
    s += "cohen_category," + std::string(to_string(c)) + "," + cell(k) + "\n";
  }
  return s;
}

std::string to_csv(const CorpusStats& r) {
  std::string s = "category,class,groups,pct_docs,mean_ops,pct_insert_only,pct_delete_only,"
                  "pct_replace\n";
  for (const auto& [c, st] : r.per_category) {
    s += std::string(to_string(c)) + "," + std::string(to_string(class_of(c))) + "," +
         std::to_string(st.groups) + "," + fmt(st.pct_docs, 4) + "," + fmt(st.mean_ops, 4) + "," +
         fmt(st.pct_insert_only, 4) + "," + fmt(st.pct_delete_only, 4) + "," +
         fmt(st.pct_replace, 4) + "\n";
  }
  return s;
}

std::string to_csv(const GenerationReport& r) {
  std::string s = "category,class,percent\n";
  for (auto c : all_categories()) {
    auto it = r.category_distribution.find(c);
    double v = it == r.category_distribution.end() ? 0.0 : it->second;
    s += std::string(to_string(c)) + "," + std::string(to_string(class_of(c))) + "," + fmt(v, 4) +
         "\n";
  }
  return s;
}

}  // namespace docsimp
