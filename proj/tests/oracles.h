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

// Test-only reference implementations. They are written the slow, obvious
// way and share no code with the library paths they check.

#ifndef DOCSIMP_TESTS_ORACLES_H_
#define DOCSIMP_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

// Insert/delete distance by memoized recursion over suffixes.
inline std::size_t indel_distance(const std::vector<std::string>& a,
                                  const std::vector<std::string>& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i,
                                                                std::size_t j) -> std::size_t {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t best = std::min(go(i + 1, j), go(i, j + 1)) + 1;
    if (a[i] == b[j]) best = std::min(best, go(i + 1, j + 1));
    memo[key] = best;
    return best;
  };
  return go(0, 0);
}

// Classic Levenshtein (substitution cost 1) by memoized recursion.
template <typename Seq>
std::size_t levenshtein(const Seq& a, const Seq& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i,
                                                                std::size_t j) -> std::size_t {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t best = std::min({go(i + 1, j) + 1, go(i, j + 1) + 1,
                                 go(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1)});
    memo[key] = best;
    return best;
  };
  return go(0, 0);
}

// Best Levenshtein distance between the shorter string and any window of
// the longer one (both directions when the lengths tie).
inline double partial_ratio(const std::u32string& a, const std::u32string& b) {
  if (a.empty() || b.empty()) return 1.0;
  auto best_in = [](const std::u32string& pat, const std::u32string& text) {
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::size_t s = 0; s <= text.size(); ++s) {
      for (std::size_t e = s; e <= text.size(); ++e) {
        best = std::min(best, levenshtein(pat, text.substr(s, e - s)));
      }
    }
    return best;
  };
  std::size_t cost;
  if (a.size() < b.size()) {
    cost = best_in(a, b);
  } else if (b.size() < a.size()) {
    cost = best_in(b, a);
  } else {
    cost = std::min(best_in(a, b), best_in(b, a));
  }
  double r = 1.0 - static_cast<double>(cost) / static_cast<double>(std::min(a.size(), b.size()));
  return std::clamp(r, 0.0, 1.0);
}

struct Labeled {
  double score;
  bool aligned;
};

struct Threshold {
  double tau;
  double f1;
};

// Tries "score >= s" for every observed score s and for +inf, keeps the best
// F1 (ties to the lower threshold), then expresses the winner as the
// midpoint below s (or -inf when s is the minimum).
inline Threshold calibrate(const std::vector<Labeled>& data) {
  std::vector<double> cands;
  for (auto& d : data) cands.push_back(d.score);
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  std::vector<double> tries = cands;
  tries.push_back(std::numeric_limits<double>::infinity());
  double best_f1 = -1;
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < tries.size(); ++k) {
    double tp = 0, fp = 0, fn = 0;
    for (auto& d : data) {
      bool pred = d.score >= tries[k];
      if (pred && d.aligned) ++tp;
      if (pred && !d.aligned) ++fp;
      if (!pred && d.aligned) ++fn;
    }
    double f1 = tp == 0 ? 0.0 : 2 * tp / (2 * tp + fp + fn);
    if (f1 > best_f1) {
      best_f1 = f1;
      best_k = k;
    }
  }
  double tau;
  if (best_k == 0) {
    tau = -std::numeric_limits<double>::infinity();
  } else if (best_k == tries.size() - 1) {
    tau = std::numeric_limits<double>::infinity();
  } else {
    tau = (cands[best_k - 1] + cands[best_k]) / 2.0;
  }
  return {tau, best_f1};
}

struct Group {
  int category;
  std::set<std::size_t> ops;
};

inline double jaccard(const std::set<std::size_t>& a, const std::set<std::size_t>& b) {
  std::size_t inter = 0;
  for (auto x : a) inter += b.count(x);
  std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

// Percentage of reference groups with a matching prediction, by scanning
// every (reference, prediction) pair.
inline double group_match(const std::vector<Group>& pred, const std::vector<Group>& ref,
                          bool exact) {
  if (ref.empty()) return pred.empty() ? 100.0 : 0.0;
  std::size_t hit = 0;
  for (const auto& r : ref) {
    bool found = false;
    for (const auto& p : pred) {
      if (p.category != r.category) continue;
      if (exact ? p.ops == r.ops : jaccard(p.ops, r.ops) >= 0.5) found = true;
    }
    if (found) ++hit;
  }
  return 100.0 * static_cast<double>(hit) / static_cast<double>(ref.size());
}

// Fleiss kappa straight from the textbook definition. ratings[i][r] is the
// category chosen by rater r for item i.
inline double fleiss(const std::vector<std::vector<int>>& ratings, int num_categories) {
  const double items = static_cast<double>(ratings.size());
  const double raters = static_cast<double>(ratings[0].size());
  double p_bar = 0;
  std::vector<double> column(num_categories, 0.0);
  for (const auto& row : ratings) {
    std::vector<double> n(num_categories, 0.0);
    for (int c : row) n[c] += 1;
    double agree = 0;
    for (int j = 0; j < num_categories; ++j) {
      agree += n[j] * (n[j] - 1);
      column[j] += n[j];
    }
    p_bar += agree / (raters * (raters - 1));
  }
  p_bar /= items;
  double p_e = 0;
  for (double c : column) {
    double p = c / (items * raters);
    p_e += p * p;
  }
  return (p_bar - p_e) / (1 - p_e);
}

inline double cohen(const std::vector<bool>& a, const std::vector<bool>& b) {
  double n = static_cast<double>(a.size());
  double both1 = 0, both0 = 0, a1 = 0, b1 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    both1 += (a[i] && b[i]);
    both0 += (!a[i] && !b[i]);
    a1 += a[i];
    b1 += b[i];
  }
  double po = (both1 + both0) / n;
  double pe = (a1 / n) * (b1 / n) + (1 - a1 / n) * (1 - b1 / n);
  return (po - pe) / (1 - pe);
}

// SARI for one n-gram order, counting with std::map tallies and explicit
// loops over the definitions (keep F1, deletion precision, add F1).
struct SariParts {
  double keep, del, add;
};

inline std::map<std::vector<std::string>, int> ngrams(const std::vector<std::string>& toks,
                                                      std::size_t n) {
  std::map<std::vector<std::string>, int> out;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    out[std::vector<std::string>(toks.begin() + i, toks.begin() + i + n)] += 1;
  }
  return out;
}

inline SariParts sari_order(const std::vector<std::string>& src,
                            const std::vector<std::string>& cand,
                            const std::vector<std::vector<std::string>>& refs, std::size_t n) {
  using Counter = std::map<std::vector<std::string>, int>;
  const int k = static_cast<int>(refs.size());
  Counter s = ngrams(src, n), c = ngrams(cand, n), r;
  for (const auto& ref : refs) {
    for (auto& [g, v] : ngrams(ref, n)) r[g] += v;
  }
  auto get = [](const Counter& m, const std::vector<std::string>& g) {
    auto it = m.find(g);
    return it == m.end() ? 0 : it->second;
  };
  std::set<std::vector<std::string>> all;
  for (auto* m : {&s, &c, &r}) {
    for (auto& kv : *m) all.insert(kv.first);
  }
  // keep
  double kp_num = 0, kr_num = 0;
  int kp_den = 0, kr_den = 0;
  for (const auto& g : all) {
    int sk = get(s, g) * k, ck = get(c, g) * k, rr = get(r, g);
    int keep = std::min(sk, ck);
    int keep_all = std::min(sk, rr);
    if (keep > 0) {
      kp_den += 1;
      kp_num += static_cast<double>(std::min(keep, rr)) / keep;
    }
    if (keep_all > 0) {
      kr_den += 1;
      kr_num += static_cast<double>(std::min(keep, rr)) / keep_all;
    }
  }
  double keep_f1;
  if (kp_den == 0 && kr_den == 0) {
    keep_f1 = 1.0;
  } else {
    double p = kp_den ? kp_num / kp_den : 0, rc = kr_den ? kr_num / kr_den : 0;
    keep_f1 = (p + rc) > 0 ? 2 * p * rc / (p + rc) : 0.0;
  }
  // deletion precision
  double dp_num = 0;
  int dp_den = 0, d_all = 0;
  for (const auto& g : all) {
    int sk = get(s, g) * k, ck = get(c, g) * k, rr = get(r, g);
    int del = std::max(sk - ck, 0);
    int del_good = std::max(del - rr, 0);
    if (std::max(sk - rr, 0) > 0) d_all += 1;
    if (del > 0) {
      dp_den += 1;
      dp_num += static_cast<double>(del_good) / del;
    }
  }
  double del_p = (dp_den == 0 && d_all == 0) ? 1.0 : (dp_den ? dp_num / dp_den : 0.0);
  // addition
  int add = 0, add_good = 0, add_all = 0;
  for (const auto& g : all) {
    bool in_s = get(s, g) > 0, in_c = get(c, g) > 0, in_r = get(r, g) > 0;
    if (in_c && !in_s) ++add;
    if (in_c && !in_s && in_r) ++add_good;
    if (in_r && !in_s) ++add_all;
  }
  double add_f1;
  if (add == 0 && add_all == 0) {
    add_f1 = 1.0;
  } else {
    double p = add ? static_cast<double>(add_good) / add : 0;
    double rc = add_all ? static_cast<double>(add_good) / add_all : 0;
    add_f1 = (p + rc) > 0 ? 2 * p * rc / (p + rc) : 0.0;
  }
  return {keep_f1, del_p, add_f1};
}

inline double sari(const std::vector<std::string>& src, const std::vector<std::string>& cand,
                   const std::vector<std::vector<std::string>>& refs, std::size_t max_n) {
  double keep = 0, del = 0, add = 0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    auto p = sari_order(src, cand, refs, n);
    keep += p.keep;
    del += p.del;
    add += p.add;
  }
  double m = static_cast<double>(max_n);
  return 100.0 * (keep / m + del / m + add / m) / 3.0;
}

}  // namespace oracle

#endif  // DOCSIMP_TESTS_ORACLES_H_
