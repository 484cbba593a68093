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

#include "docsimp/match.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "docsimp/align.h"
#include "docsimp/corpus.h"
#include "docsimp/errors.h"
#include "docsimp/utf8.h"

namespace docsimp {

namespace {

std::size_t levenshtein(const std::u32string& a, const std::u32string& b) {
  if (a.size() < b.size()) return levenshtein(b, a);
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] != b[j - 1])});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Sellers' variant: the pattern must be consumed entirely, the text may
// start and stop anywhere.
std::size_t best_window_distance(const std::u32string& pattern, const std::u32string& text) {
  std::vector<std::size_t> prev(text.size() + 1, 0), cur(text.size() + 1);
  for (std::size_t i = 1; i <= pattern.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= text.size(); ++j) {
      cur[j] = std::min(
          {prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (pattern[i - 1] != text[j - 1])});
    }
    std::swap(prev, cur);
  }
  return *std::min_element(prev.begin(), prev.end());
}

bool sentence_final(const Token& t) {
  return t.surface == "." || t.surface == "!" || t.surface == "?";
}

bool capitalized(const Token& t) {
  return !t.surface.empty() && std::isupper(static_cast<unsigned char>(t.surface[0])) != 0;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

double levenshtein_ratio(std::string_view a, std::string_view b) {
  auto ua = utf8::decode(a), ub = utf8::decode(b);
  std::size_t longest = std::max(ua.size(), ub.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(ua, ub)) / static_cast<double>(longest);
}

double partial_levenshtein_ratio(std::string_view a, std::string_view b) {
  auto ua = utf8::decode(a), ub = utf8::decode(b);
  if (ua.empty() || ub.empty()) return 1.0;
  std::size_t cost;
  if (ua.size() < ub.size()) {
    cost = best_window_distance(ua, ub);
  } else if (ub.size() < ua.size()) {
    cost = best_window_distance(ub, ua);
  } else {
    cost = std::min(best_window_distance(ua, ub), best_window_distance(ub, ua));
  }
  double r = 1.0 - static_cast<double>(cost) / static_cast<double>(std::min(ua.size(), ub.size()));
  return std::clamp(r, 0.0, 1.0);
}

std::set<std::string> capitalized_runs(std::string_view text) {
  std::set<std::string> out;
  auto tokens = tokenize(text);
  std::string run;
  bool at_start = true;
  auto flush = [&] {
    if (!run.empty()) out.insert(lower(run));
    run.clear();
  };
  for (const auto& t : tokens) {
    if (!at_start && capitalized(t)) {
      if (!run.empty()) run += ' ';
      run += t.surface;
    } else {
      flush();
    }
    at_start = sentence_final(t);
  }
  flush();
  return out;
}

double entity_overlap(std::string_view a, std::string_view b, const EntityExtractor& extractor) {
  auto ea = extractor(a), eb = extractor(b);
  if (ea.empty() && eb.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& e : ea) inter += eb.count(e);
  return static_cast<double>(inter) / static_cast<double>(ea.size() + eb.size() - inter);
}

double delta_publish(const DocumentRevision& a, const DocumentRevision& b) {
  if (!a.timestamp || !b.timestamp) {
    throw InputError("delta_publish needs timestamps on revisions '" + a.revision_id +
                     "' and '" + b.revision_id + "'");
  }
  auto d = (*a.timestamp - *b.timestamp).count();
  return -static_cast<double>(d < 0 ? -d : d);
}

std::string revision_pair_id(const DocumentRevision& simple, const DocumentRevision& complex) {
  return simple.revision_id + ":" + complex.revision_id;
}

ExternalScores ExternalScores::load(const std::string& path) {
  std::map<std::string, double> scores;
  for_each_jsonl(path, [&](const Json& obj, std::size_t line) {
    std::string id = require_string(obj, "pair_id", line);
    double s = require_number(obj, "score", line);
    if (!std::isfinite(s)) throw SchemaError("field 'score' must be finite", line);
    if (!scores.emplace(id, s).second) throw SchemaError("duplicate pair_id '" + id + "'", line);
  });
  return ExternalScores(std::move(scores));
}

double ExternalScores::at(const std::string& pair_id) const {
  auto it = scores_.find(pair_id);
  if (it == scores_.end()) throw LookupError("no external score for pair '" + pair_id + "'");
  return it->second;
}

const std::vector<std::string>& scorer_ids() {
  static const std::vector<std::string> ids = {"majority",           "delta_publish",
                                               "levenshtein",        "partial_levenshtein",
                                               "entity_overlap",     "external"};
  return ids;
}

RevisionScorer make_scorer(std::string_view scorer_id, const ExternalScores* external) {
  using R = const DocumentRevision&;
  if (scorer_id == "majority") return majority_score;
  if (scorer_id == "delta_publish") return [](R s, R c) { return delta_publish(s, c); };
  if (scorer_id == "levenshtein") return [](R s, R c) { return levenshtein_ratio(s.text, c.text); };
  if (scorer_id == "partial_levenshtein") {
    return [](R s, R c) { return partial_levenshtein_ratio(s.text, c.text); };
  }
  if (scorer_id == "entity_overlap") {
    return [](R s, R c) { return entity_overlap(s.text, c.text); };
  }
  if (scorer_id == "external") {
    if (external == nullptr) throw InputError("the external scorer needs a score file");
    return [external](R s, R c) { return external->at(revision_pair_id(s, c)); };
  }
  throw InputError("unknown scorer '" + std::string(scorer_id) + "'");
}

BinaryScores classification_scores(std::span<const LabeledScore> data, double threshold) {
  double tp = 0, fp = 0, fn = 0;
  for (const auto& d : data) {
    bool pred = d.score >= threshold;
    tp += pred && d.aligned;
    fp += pred && !d.aligned;
    fn += !pred && d.aligned;
  }
  BinaryScores s;
  s.precision = tp + fp > 0 ? 100.0 * tp / (tp + fp) : 0.0;
  s.recall = tp + fn > 0 ? 100.0 * tp / (tp + fn) : 0.0;
  s.f1 = tp > 0 ? 100.0 * 2 * tp / (2 * tp + fp + fn) : 0.0;
  return s;
}

Calibration calibrate_threshold(std::span<const LabeledScore> data) {
  bool pos = false, neg = false;
  for (const auto& d : data) {
    if (!std::isfinite(d.score)) throw CalibrationError("non-finite score in calibration data");
    (d.aligned ? pos : neg) = true;
  }
  if (!pos || !neg) throw CalibrationError("calibration needs both aligned and unaligned labels");

  std::vector<double> scores;
  for (const auto& d : data) scores.push_back(d.score);
  std::sort(scores.begin(), scores.end());
  scores.erase(std::unique(scores.begin(), scores.end()), scores.end());

  std::vector<double> candidates{-std::numeric_limits<double>::infinity()};
  for (std::size_t i = 1; i < scores.size(); ++i) {
    candidates.push_back(scores[i - 1] + (scores[i] - scores[i - 1]) / 2.0);
  }
  candidates.push_back(std::numeric_limits<double>::infinity());

  Calibration best{candidates[0], classification_scores(data, candidates[0])};
  for (std::size_t k = 1; k < candidates.size(); ++k) {
    auto s = classification_scores(data, candidates[k]);
    if (s.f1 > best.scores.f1) best = {candidates[k], s};
  }
  return best;
}

std::vector<RevisionMatch> match_revisions(std::span<const DocumentRevision> complex_revs,
                                           std::span<const DocumentRevision> simple_revs,
                                           const MatcherConfig& cfg,
                                           const RevisionScorer& scorer) {
  if (cfg.dedup_similarity_max < 0 || cfg.dedup_similarity_max > 1) {
    throw InputError("dedup_similarity_max must lie in [0, 1]");
  }
  std::vector<RevisionMatch> accepted;
  std::set<std::string> used;
  for (const auto& simple : simple_revs) {
    const DocumentRevision* best = nullptr;
    double best_score = 0;
    for (const auto& complex : complex_revs) {
      double s = scorer(simple, complex);
      if (s < cfg.threshold) continue;
      if (best == nullptr || s > best_score) {
        best = &complex;
        best_score = s;
      }
    }
    if (best == nullptr || used.count(best->revision_id) > 0) continue;
    bool distinct = std::all_of(accepted.begin(), accepted.end(), [&](const RevisionMatch& m) {
      return levenshtein_ratio(simple.text, m.simple.text) <= cfg.dedup_similarity_max;
    });
    if (!distinct) continue;
    used.insert(best->revision_id);
    accepted.push_back({simple, *best, best_score});
  }
  return accepted;
}

}  // namespace docsimp
