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

// Evaluation math: edit identification scores, annotator agreement, corpus
// statistics and generation metrics, plus JSON/text/CSV rendering.

#ifndef DOCSIMP_METRICS_H_
#define DOCSIMP_METRICS_H_

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "docsimp/core.h"
#include "docsimp/corpus.h"
#include "docsimp/identify.h"

namespace docsimp {

// ---------------------------------------------------------------------------
// Identification

using OpCategories = std::map<std::size_t, std::set<EditCategory>>;
OpCategories op_categories(const TaggedOperations& tags);
OpCategories op_categories(std::span<const EditGroup> groups);

struct LabelScore {
  double f1 = 0;  // 0-100
  std::size_t support = 0;
  std::size_t tp = 0, fp = 0, fn = 0;
};

// Multi-label F1 over (pair, operation) membership, averaged over labels
// weighted by reference support; labels without support are left out. Every
// element of `pred` is paired with the element of `ref` at the same
// position. 0-100. With no reference labels at all: 100 if the prediction
// is empty too, else 0.
double category_f1(std::span<const OpCategories> pred, std::span<const OpCategories> ref,
                   std::map<EditCategory, LabelScore>* per_category = nullptr);
double class_f1(std::span<const OpCategories> pred, std::span<const OpCategories> ref,
                std::map<EditClass, LabelScore>* per_class = nullptr);

// Percentage of reference groups with a same-category prediction of equal
// op set (exact) or Jaccard >= 0.5 (partial). No reference groups: 100 if
// there are no predictions either, else 0.
double group_exact(std::span<const EditGroup> pred, std::span<const EditGroup> ref);
double group_partial(std::span<const EditGroup> pred, std::span<const EditGroup> ref);
double jaccard(const std::set<std::size_t>& a, const std::set<std::size_t>& b);

struct PairGroups {
  std::string pair_id;
  std::vector<EditGroup> pred;
  std::vector<EditGroup> ref;
};

struct CategoryBreakdown {
  LabelScore f1;
  std::size_t ref_groups = 0;
  double pct_exact = 0;
  double pct_partial = 0;
};

struct IdentificationReport {
  std::size_t pairs = 0;
  double category_f1 = 0;
  double class_f1 = 0;
  double pct_partial = 0;  // pooled over every reference group of the corpus
  double pct_exact = 0;
  std::map<EditCategory, CategoryBreakdown> per_category;
};

IdentificationReport evaluate_identification(std::span<const PairGroups> pairs);

// ---------------------------------------------------------------------------
// Agreement

// ratings[item][rater] is a category id in [0, num_categories). Every item
// needs the same number (>= 2) of raters, else InputError. nullopt when the
// expected agreement is 1 (kappa undefined) or there are no items.
std::optional<double> fleiss_kappa(const std::vector<std::vector<int>>& ratings,
                                   int num_categories);
// nullopt when undefined (empty input or expected agreement 1). Throws
// InputError on different lengths.
std::optional<double> cohen_kappa(const std::vector<bool>& a, const std::vector<bool>& b);

struct AgreementReport {
  std::size_t pairs = 0;   // pairs with at least two usable annotations
  std::size_t raters = 0;  // raters per pair used for Fleiss
  // Items are (pair, class) presence ratings.
  std::optional<double> fleiss_pooled;
  std::map<EditClass, std::optional<double>> fleiss_per_class;
  std::optional<double> fleiss_class_average;  // mean of defined per-class values
  // Items are (pair, edit operation, class) presence ratings.
  std::optional<double> fleiss_op_level;
  // Per-operation category presence across every annotator pair.
  std::map<EditCategory, std::optional<double>> cohen_per_category;
};

// Uses non-flagged records; when pairs have different annotator counts the
// smallest count is used, taking annotators in id order. Throws LookupError
// when a multiply-annotated pair has no sequence.
AgreementReport agreement(std::span<const AnnotationRecord> records, const SequenceMap& seqs);

// One record per pair: the first non-flagged record by annotator id, or
// the first flagged one if all are flagged. Output sorted by pair id.
std::vector<AnnotationRecord> primary_annotations(std::span<const AnnotationRecord> records);

// ---------------------------------------------------------------------------
// Corpus statistics

// Sentence number of each token. A sentence ends after a run of ".", "!"
// or "?" tokens.
std::vector<std::size_t> sentence_ids(std::span<const Token> tokens);

// Per category, percentage of groups whose operations touch more than one
// sentence of the complex document. Inserts belong to the sentence of the
// next complex token (the previous one at the end). Flagged records skipped.
std::map<EditCategory, double> multi_sentence_rate(std::span<const AnnotationRecord> records,
                                                   const SequenceMap& seqs);

struct CategoryStats {
  std::size_t groups = 0;       // N
  double pct_docs = 0;          // documents with at least one such group
  double mean_ops = 0;          // #O
  double pct_insert_only = 0;   // %I
  double pct_delete_only = 0;   // %D
  double pct_replace = 0;       // %I+D
};

struct CorpusStats {
  std::size_t documents = 0;
  std::size_t flagged = 0;
  std::map<EditCategory, CategoryStats> per_category;  // every category present
  std::map<EditClass, double> class_pct_docs;
  std::map<std::size_t, std::size_t> groups_per_doc;      // histogram
  std::map<std::size_t, std::size_t> classes_per_doc;     // simplification classes only
  double pct_bic_representable = 0;  // share of documents encode_bic accepts
};

// Flagged records are counted and skipped. Group kinds come from `seqs`;
// pairs without a sequence throw LookupError.
CorpusStats corpus_stats(std::span<const AnnotationRecord> records, const SequenceMap& seqs);

// ---------------------------------------------------------------------------
// Generation

// |simple tokens| / |complex tokens|; 1 when both are empty. InputError when
// only the complex side is empty.
double compression_ratio(std::string_view complex, std::string_view simple);

// 0.39 * words/sentences + 11.8 * syllables/words - 15.59. Words are tokens
// with a letter or digit. Syllables: vowel groups (a e i o u y), minus a
// final silent "e" (not "le") when more than one group, at least 1.
// InputError when there is no word.
double fkgl(std::string_view text);
std::size_t count_syllables(std::string_view word);

// 0-100. Mean over n = 1..max_n of keep F1, deletion precision and
// addition F1 computed from n-gram counts. An empty component scores 1 when
// neither candidate nor references have anything in it, else 0. InputError
// without references.
double sari(std::string_view source, std::string_view candidate,
            const std::vector<std::string>& references, std::size_t max_n = 4);

struct GenerationReport {
  std::size_t documents = 0;
  double sari = 0;
  double fkgl = 0;
  double compression_ratio = 0;
  std::map<EditCategory, double> category_distribution;  // % of groups
};

// Share of groups per category across all documents, in percent.
std::map<EditCategory, double> category_distribution(
    std::span<const std::vector<EditGroup>> groups_per_doc);

// ---------------------------------------------------------------------------
// Rendering. JSON is key-sorted; floats keep full precision.

Json to_json(const IdentificationReport& r);
Json to_json(const AgreementReport& r);
Json to_json(const CorpusStats& r);
Json to_json(const GenerationReport& r);
std::string to_text(const IdentificationReport& r);
std::string to_text(const AgreementReport& r);
std::string to_text(const CorpusStats& r);
std::string to_text(const GenerationReport& r);
std::string to_csv(const IdentificationReport& r);
std::string to_csv(const AgreementReport& r);
std::string to_csv(const CorpusStats& r);
// One row per category: category,class,percent.
std::string to_csv(const GenerationReport& r);

}  // namespace docsimp

#endif  // DOCSIMP_METRICS_H_
