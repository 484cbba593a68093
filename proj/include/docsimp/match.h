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

// Scoring how well a simple-wiki revision lines up with a complex-wiki
// revision, threshold calibration on labeled pairs, and best-revision
// selection with near-duplicate suppression.

#ifndef DOCSIMP_MATCH_H_
#define DOCSIMP_MATCH_H_

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "docsimp/core.h"

namespace docsimp {

// 1 - lev(a, b) / max(|a|, |b|) over code points, substitution cost 1.
// Both empty gives 1.
double levenshtein_ratio(std::string_view a, std::string_view b);

// The shorter string is aligned against its best window of the longer one
// (gaps before and after the window are free): 1 - cost / min(|a|, |b|),
// clamped to [0, 1]. Equal lengths take the better of both directions.
// Either side empty gives 1.
double partial_levenshtein_ratio(std::string_view a, std::string_view b);

using EntityExtractor = std::function<std::set<std::string>(std::string_view)>;

// Maximal runs of capitalized tokens, skipping the first token of each
// sentence, lowercased and joined with single spaces.
std::set<std::string> capitalized_runs(std::string_view text);

// Jaccard index of the two entity sets; 1 when both are empty.
double entity_overlap(std::string_view a, std::string_view b,
                      const EntityExtractor& extractor = capitalized_runs);

// -|t(a) - t(b)| in seconds. Throws InputError if a timestamp is missing.
double delta_publish(const DocumentRevision& a, const DocumentRevision& b);

inline double majority_score(const DocumentRevision&, const DocumentRevision&) { return 1.0; }

// Identifier of a (simple revision, complex revision) candidate, used as the
// key of external score and label files.
std::string revision_pair_id(const DocumentRevision& simple, const DocumentRevision& complex);

// Scores produced outside the toolkit (NLI or supervised models), read from
// {"pair_id", "score"} lines.
class ExternalScores {
 public:
  ExternalScores() = default;
  explicit ExternalScores(std::map<std::string, double> scores) : scores_(std::move(scores)) {}

  // Throws SchemaError on duplicate ids or non-finite scores.
  static ExternalScores load(const std::string& path);

  // Throws LookupError for unknown ids.
  double at(const std::string& pair_id) const;
  std::size_t size() const { return scores_.size(); }
  const std::map<std::string, double>& scores() const { return scores_; }

 private:
  std::map<std::string, double> scores_;
};

// Higher is more aligned.
using RevisionScorer =
    std::function<double(const DocumentRevision& simple, const DocumentRevision& complex)>;

// Known ids: majority, delta_publish, levenshtein, partial_levenshtein,
// entity_overlap, external. "external" needs `external`, which must outlive
// the scorer. Throws InputError for other ids.
RevisionScorer make_scorer(std::string_view scorer_id, const ExternalScores* external = nullptr);
const std::vector<std::string>& scorer_ids();

// ---------------------------------------------------------------------------
// Calibration

struct LabeledScore {
  double score = 0;
  bool aligned = false;
};

// Precision, recall and F1 of "score >= threshold means aligned", in 0-100.
struct BinaryScores {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};
BinaryScores classification_scores(std::span<const LabeledScore> data, double threshold);

struct Calibration {
  double threshold = 0;
  BinaryScores scores;
};

// Tries -inf, every midpoint between adjacent distinct scores and +inf, and
// keeps the best F1; ties go to the lower threshold. Throws CalibrationError
// unless both labels occur.
Calibration calibrate_threshold(std::span<const LabeledScore> data);

// ---------------------------------------------------------------------------
// Revision matching

struct MatcherConfig {
  std::string scorer_id = "levenshtein";
  double threshold = 0.0;
  double dedup_similarity_max = 0.3;
};

struct RevisionMatch {
  DocumentRevision simple;
  DocumentRevision complex;
  double score = 0;
};

// Walks the simple revisions in the given (chronological) order. Each one is
// paired with its best-scoring complex revision at or above the threshold,
// ties going to the earliest. A match is kept only if its simple text has
// levenshtein_ratio <= dedup_similarity_max to every kept simple revision and
// its complex revision has not been used yet.
std::vector<RevisionMatch> match_revisions(std::span<const DocumentRevision> complex_revs,
                                           std::span<const DocumentRevision> simple_revs,
                                           const MatcherConfig& cfg,
                                           const RevisionScorer& scorer);

}  // namespace docsimp

#endif  // DOCSIMP_MATCH_H_
