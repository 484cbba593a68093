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

#include "cli.h"

#include <pthread.h>
#include <signal.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "docsimp/align.h"
#include "docsimp/annotate_service.h"
#include "docsimp/clean.h"
#include "docsimp/core.h"
#include "docsimp/corpus.h"
#include "docsimp/errors.h"
#include "docsimp/identify.h"
#include "docsimp/ingest.h"
#include "docsimp/match.h"
#include "docsimp/metrics.h"
#include "docsimp/synth.h"

namespace docsimp {
namespace {

// Flag combinations CLI11 cannot express; reported like parse errors.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Runs fn(0..n-1) on up to `jobs` threads and returns the results in index
// order. The exception of the lowest failing index is rethrown.
template <typename F>
auto parallel_map(std::size_t n, unsigned jobs, F fn) {
  using R = decltype(fn(std::size_t{0}));
  std::vector<std::optional<R>> slots(n);
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_at = n;
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
        next.store(n);
        return;
      }
    }
  };

  std::size_t threads = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

void emit(std::ostream& out, const std::string& path, const std::string& content) {
  if (path.empty()) {
    out << content;
  } else {
    write_file_atomic(path, content);
  }
}

template <typename T>
std::string jsonl(const std::vector<T>& items) {
  std::string text;
  for (const auto& item : items) {
    text += dump_line(to_json(item));
    text += '\n';
  }
  return text;
}

template <typename Report>
std::string render(const Report& r, const std::string& format) {
  if (format == "text") return to_text(r);
  if (format == "csv") return to_csv(r);
  return to_json(r).dump(2) + "\n";
}

AlignmentConfig alignment_config(const std::string& granularity) {
  AlignmentConfig cfg;
  cfg.granularity = granularity == "character" ? Granularity::kCharacter : Granularity::kToken;
  return cfg;
}

// ---------------------------------------------------------------------------
// Identification pipelines: a tagger and a grouper.

enum class Tagger { kOpMajority, kExternal, kExternalBic, kOracleCc, kAdjacentCc };
enum class Grouper { kNone, kSingle, kAdjacent, kRules };

struct Pipeline {
  std::string name;
  Tagger tagger = Tagger::kOpMajority;
  Grouper grouper = Grouper::kNone;

  bool uses_op_predictions() const {
    return tagger == Tagger::kExternal || tagger == Tagger::kExternalBic;
  }
  bool is_group_classifier() const {
    return tagger == Tagger::kOracleCc || tagger == Tagger::kAdjacentCc;
  }
};

const std::vector<std::string>& pipeline_names() {
  static const std::vector<std::string> names = {
      "op-majority+single", "op-majority+adjacent", "op-majority+rules",
      "external+single",    "external+adjacent",    "external+rules",
      "external-bic",       "oracle-cc",            "adjacent-cc",
  };
  return names;
}

Pipeline parse_pipeline(const std::string& name) {
  Pipeline p;
  p.name = name;
  if (name == "external-bic") {
    p.tagger = Tagger::kExternalBic;
    return p;
  }
  if (name == "oracle-cc") {
    p.tagger = Tagger::kOracleCc;
    return p;
  }
  if (name == "adjacent-cc") {
    p.tagger = Tagger::kAdjacentCc;
    return p;
  }
  auto plus = name.find('+');
  std::string tagger = name.substr(0, plus);
  std::string grouper = plus == std::string::npos ? "" : name.substr(plus + 1);
  if (tagger == "op-majority") {
    p.tagger = Tagger::kOpMajority;
  } else if (tagger == "external") {
    p.tagger = Tagger::kExternal;
  } else {
    throw UsageError("unknown pipeline " + name);
  }
  if (grouper == "single") {
    p.grouper = Grouper::kSingle;
  } else if (grouper == "adjacent") {
    p.grouper = Grouper::kAdjacent;
  } else if (grouper == "rules") {
    p.grouper = Grouper::kRules;
  } else {
    throw UsageError("unknown pipeline " + name);
  }
  return p;
}

std::vector<EditGroup> group_with(const Pipeline& p, const TaggedOperations& tags,
                                  const AlignmentSequence& seq, const CategoryModeTable& modes) {
  if (p.tagger == Tagger::kExternalBic) return canonical_groups(decode_bic(tags, seq));
  switch (p.grouper) {
    case Grouper::kSingle:
      return group_single(tags);
    case Grouper::kAdjacent:
      return group_adjacent(tags, seq);
    case Grouper::kRules:
      return group_rules(tags, seq, modes);
    case Grouper::kNone:
      break;
  }
  throw UsageError("pipeline " + p.name + " has no grouper");
}

// Tags and groups one sequence. `external` holds op-level predictions for
// the external taggers.
std::vector<EditGroup> run_pipeline(const Pipeline& p, const AlignmentSequence& seq,
                                    const std::map<std::string, TaggedOperations>* external,
                                    const CategoryModeTable& modes) {
  if (p.tagger == Tagger::kOpMajority) return group_with(p, op_majority(seq), seq, modes);
  auto it = external->find(seq.pair_id());
  if (it == external->end()) throw LookupError("no predictions for pair " + seq.pair_id());
  return group_with(p, it->second, seq, modes);
}

CategoryModeTable modes_from(const std::string& annotations_path, const SequenceMap& seqs) {
  if (annotations_path.empty()) return all_contiguous();
  auto records = primary_annotations(read_annotations(annotations_path));
  std::erase_if(records, [&](const AnnotationRecord& r) {
    return r.unaligned_flag || !seqs.count(r.pair_id);
  });
  return derive_category_modes(records, seqs);
}

// ---------------------------------------------------------------------------
// Subcommands. Each returns an exit code.

struct Options {
  std::string pairs, annotations, sequences, pred, ref, out, histories, labels, scores;
  std::string candidates, cc_inputs, pipeline, scorer = "levenshtein";
  std::string format = "json", granularity = "token";
  std::optional<double> threshold;
  double dedup = 0.3;
  unsigned jobs = 1;
  std::uint32_t seed = 1;
};

int cmd_align(const Options& o, std::ostream& out) {
  auto pairs = read_pairs(o.pairs);
  auto cfg = alignment_config(o.granularity);
  auto seqs = parallel_map(pairs.size(), o.jobs, [&](std::size_t i) {
    return align_texts(pairs[i].complex.text, pairs[i].simple.text, cfg, pairs[i].pair_id);
  });
  emit(out, o.out, jsonl(seqs));
  return kExitOk;
}

std::optional<ExternalScores> external_scores(const Options& o) {
  if (o.scorer != "external") return std::nullopt;
  if (o.scores.empty()) throw UsageError("--scorer external needs --scores");
  return ExternalScores::load(o.scores);
}

int cmd_match(const Options& o, std::ostream& out) {
  auto histories = read_histories(o.histories);
  auto ext = external_scores(o);
  auto scorer = make_scorer(o.scorer, ext ? &*ext : nullptr);
  MatcherConfig cfg;
  cfg.scorer_id = o.scorer;
  cfg.threshold = o.threshold.value_or(0.0);
  cfg.dedup_similarity_max = o.dedup;

  auto per_page = parallel_map(histories.size(), o.jobs, [&](std::size_t i) {
    const auto& h = histories[i];
    std::vector<PairRecord> pairs;
    for (auto& m : match_revisions(h.complex_revisions, h.simple_revisions, cfg, scorer)) {
      PairRecord p;
      p.pair_id = revision_pair_id(m.simple, m.complex);
      p.complex = std::move(m.complex);
      p.simple = std::move(m.simple);
      pairs.push_back(std::move(p));
    }
    return pairs;
  });
  std::vector<PairRecord> pairs;
  for (auto& page : per_page) {
    for (auto& p : page) pairs.push_back(std::move(p));
  }
  emit(out, o.out, jsonl(pairs));
  return kExitOk;
}

Json threshold_json(double t) {
  if (std::isfinite(t)) return t;
  return t > 0 ? "inf" : "-inf";
}

int cmd_calibrate(const Options& o, std::ostream& out) {
  std::map<std::string, PairRecord> by_id;
  for (auto& p : read_pairs(o.pairs)) by_id.emplace(p.pair_id, std::move(p));
  auto labels = read_labels(o.labels);
  auto ext = external_scores(o);
  auto scorer = make_scorer(o.scorer, ext ? &*ext : nullptr);

  auto data = parallel_map(labels.size(), o.jobs, [&](std::size_t i) {
    auto it = by_id.find(labels[i].pair_id);
    if (it == by_id.end()) throw LookupError("label for unknown pair " + labels[i].pair_id);
    return LabeledScore{scorer(it->second.simple, it->second.complex), labels[i].aligned};
  });

  Calibration cal;
  if (o.threshold) {
    cal.threshold = *o.threshold;
    cal.scores = classification_scores(data, *o.threshold);
  } else {
    cal = calibrate_threshold(data);
  }

  std::ostringstream s;
  if (o.format == "json") {
    Json j = {{"scorer", o.scorer},
              {"pairs", data.size()},
              {"calibrated", !o.threshold.has_value()},
              {"threshold", threshold_json(cal.threshold)},
              {"precision", cal.scores.precision},
              {"recall", cal.scores.recall},
              {"f1", cal.scores.f1}};
    s << j.dump(2) << "\n";
  } else if (o.format == "csv") {
    s << "scorer,pairs,threshold,precision,recall,f1\n"
      << o.scorer << "," << data.size() << "," << cal.threshold << "," << cal.scores.precision
      << "," << cal.scores.recall << "," << cal.scores.f1 << "\n";
  } else {
    s << "scorer     " << o.scorer << "\n"
      << "pairs      " << data.size() << "\n"
      << "threshold  " << cal.threshold << "\n"
      << "precision  " << cal.scores.precision << "\n"
      << "recall     " << cal.scores.recall << "\n"
      << "f1         " << cal.scores.f1 << "\n";
  }
  emit(out, o.out, s.str());
  return kExitOk;
}

// Proposals for the group classifier: one adjusted sequence per candidate
// group, for an external model to label.
int write_cc_inputs(const Pipeline& p, const Options& o, const std::vector<AlignmentSequence>& seqs) {
  std::map<std::string, std::set<std::set<std::size_t>>> oracle;
  if (p.tagger == Tagger::kOracleCc) {
    if (o.ref.empty()) throw UsageError("oracle-cc needs --ref for its proposals");
    for (const auto& r : primary_annotations(read_annotations(o.ref))) {
      if (r.unaligned_flag) continue;
      for (const auto& g : r.groups) oracle[r.pair_id].insert(g.op_indices);
    }
  }
  auto lines = parallel_map(seqs.size(), o.jobs, [&](std::size_t i) {
    const auto& seq = seqs[i];
    std::vector<std::set<std::size_t>> proposals;
    if (p.tagger == Tagger::kOracleCc) {
      auto it = oracle.find(seq.pair_id());
      if (it != oracle.end()) proposals.assign(it->second.begin(), it->second.end());
    } else {
      proposals = adjacent_proposals(seq);
    }
    std::string text;
    for (const auto& ops : proposals) {
      Json j = {{"pair_id", seq.pair_id()},
                {"op_indices", ops},
                {"markup", serialize_markup(build_adjusted_sequence(seq, ops))}};
      text += dump_line(j);
      text += '\n';
    }
    return text;
  });
  std::string text;
  for (const auto& l : lines) text += l;
  write_file_atomic(o.cc_inputs, text);
  return kExitOk;
}

int cmd_identify(const Options& o, std::ostream& out) {
  Pipeline p = parse_pipeline(o.pipeline);
  auto seqs = read_sequences(o.sequences);
  if (p.is_group_classifier() && !o.cc_inputs.empty()) return write_cc_inputs(p, o, seqs);

  SequenceMap index = index_sequences(seqs);
  std::map<std::string, TaggedOperations> external;
  std::map<std::string, std::vector<EditGroup>> classified;
  if (p.uses_op_predictions()) {
    if (o.pred.empty()) throw UsageError(p.name + " needs --pred");
    external = load_predictions(o.pred, index);
  } else if (p.is_group_classifier()) {
    if (o.pred.empty()) throw UsageError(p.name + " needs --pred or --cc-inputs");
    classified = load_group_predictions(o.pred, index);
  }
  CategoryModeTable modes =
      p.grouper == Grouper::kRules ? modes_from(o.annotations, index) : all_contiguous();

  auto records = parallel_map(seqs.size(), o.jobs, [&](std::size_t i) {
    AnnotationRecord r;
    r.pair_id = seqs[i].pair_id();
    r.annotator_id = p.name;
    if (p.is_group_classifier()) {
      auto it = classified.find(r.pair_id);
      if (it != classified.end()) r.groups = canonical_groups(it->second);
    } else {
      r.groups = run_pipeline(p, seqs[i], &external, modes);
    }
    return r;
  });
  emit(out, o.out, jsonl(records));
  return kExitOk;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  std::map<std::string, AnnotationRecord> pred;
  for (auto& r : primary_annotations(read_annotations(o.pred))) pred.emplace(r.pair_id, std::move(r));
  std::vector<PairGroups> pairs;
  for (auto& r : primary_annotations(read_annotations(o.ref))) {
    if (r.unaligned_flag) continue;
    PairGroups pg;
    pg.pair_id = r.pair_id;
    pg.ref = std::move(r.groups);
    auto it = pred.find(pg.pair_id);
    if (it != pred.end() && !it->second.unaligned_flag) pg.pred = it->second.groups;
    pairs.push_back(std::move(pg));
  }
  emit(out, o.out, render(evaluate_identification(pairs), o.format));
  return kExitOk;
}

int cmd_agreement(const Options& o, std::ostream& out) {
  auto records = read_annotations(o.annotations);
  auto seqs = index_sequences(read_sequences(o.sequences));
  emit(out, o.out, render(agreement(records, seqs), o.format));
  return kExitOk;
}

double mean_compression(const std::vector<PairRecord>& pairs) {
  if (pairs.empty()) throw InputError("no pairs");
  double sum = 0;
  for (const auto& p : pairs) sum += compression_ratio(p.complex.text, p.simple.text);
  return sum / static_cast<double>(pairs.size());
}

int cmd_stats(const Options& o, std::ostream& out) {
  auto records = primary_annotations(read_annotations(o.annotations));
  auto seqs = index_sequences(read_sequences(o.sequences));
  CorpusStats stats = corpus_stats(records, seqs);
  auto multi = multi_sentence_rate(records, seqs);
  std::optional<double> compression;
  if (!o.pairs.empty()) compression = mean_compression(read_pairs(o.pairs));

  std::string text;
  if (o.format == "json") {
    Json j = to_json(stats);
    Json m = Json::object();
    for (const auto& [c, v] : multi) m[std::string(to_string(c))] = v;
    j["multi_sentence_pct"] = m;
    if (compression) j["compression_ratio_mean"] = *compression;
    text = j.dump(2) + "\n";
  } else if (o.format == "csv") {
    text = to_csv(stats);
  } else {
    std::ostringstream s;
    s << to_text(stats) << "\nmulti-sentence groups (%)\n";
    for (const auto& [c, v] : multi) s << "  " << to_string(c) << "  " << v << "\n";
    if (compression) s << "compression ratio mean  " << *compression << "\n";
    text = s.str();
  }
  emit(out, o.out, text);
  return kExitOk;
}

int cmd_clean(const Options& o, std::ostream& out, std::ostream& err) {
  auto pairs = read_pairs(o.pairs);
  auto groups = groups_by_pair(read_annotations(o.annotations));
  CleanReport report;
  auto cleaned = clean_corpus(pairs, groups, &report, alignment_config(o.granularity));
  write_pairs(o.out, cleaned);
  if (report.uncovered_ops > 0) {
    err << "warning: " << report.uncovered_ops
        << " edit operations are in no group and were kept\n";
  }
  out << to_json(report).dump(2) << "\n";
  return kExitOk;
}

int cmd_genmetrics(const Options& o, std::ostream& out) {
  std::map<std::string, PairRecord> by_id;
  for (auto& p : read_pairs(o.pairs)) by_id.emplace(p.pair_id, std::move(p));
  auto candidates = read_candidates(o.candidates);
  if (candidates.empty()) throw InputError("no candidates");

  struct Scores {
    double sari, fkgl, compression;
  };
  auto scores = parallel_map(candidates.size(), o.jobs, [&](std::size_t i) {
    const auto& c = candidates[i];
    auto it = by_id.find(c.pair_id);
    if (it == by_id.end()) throw LookupError("candidate for unknown pair " + c.pair_id);
    const auto& p = it->second;
    return Scores{sari(p.complex.text, c.text, {p.simple.text}), fkgl(c.text),
                  compression_ratio(p.complex.text, c.text)};
  });

  GenerationReport r;
  r.documents = scores.size();
  for (const auto& s : scores) {
    r.sari += s.sari;
    r.fkgl += s.fkgl;
    r.compression_ratio += s.compression;
  }
  auto n = static_cast<double>(scores.size());
  r.sari /= n;
  r.fkgl /= n;
  r.compression_ratio /= n;

  if (!o.annotations.empty()) {
    std::vector<std::vector<EditGroup>> groups;
    for (auto& [id, g] : groups_by_pair(read_annotations(o.annotations))) groups.push_back(g);
    r.category_distribution = category_distribution(groups);
  }
  emit(out, o.out, render(r, o.format));
  return kExitOk;
}

int cmd_bench(const Options& o, std::size_t repeat, std::ostream& out) {
  Pipeline p = parse_pipeline(o.pipeline);
  if (p.is_group_classifier()) throw UsageError("bench cannot run " + p.name);
  auto pairs = read_pairs(o.pairs);
  auto cfg = alignment_config(o.granularity);

  // Predictions and rule modes refer to op indices of the aligned pairs,
  // so they are loaded against one untimed alignment pass.
  std::map<std::string, TaggedOperations> external;
  CategoryModeTable modes = all_contiguous();
  if (p.uses_op_predictions() || p.grouper == Grouper::kRules) {
    auto index = index_sequences(parallel_map(pairs.size(), o.jobs, [&](std::size_t i) {
      return align_texts(pairs[i].complex.text, pairs[i].simple.text, cfg, pairs[i].pair_id);
    }));
    if (p.uses_op_predictions()) {
      if (o.pred.empty()) throw UsageError(p.name + " needs --pred");
      external = load_predictions(o.pred, index);
    }
    if (p.grouper == Grouper::kRules) modes = modes_from(o.annotations, index);
  }

  std::size_t groups = 0;
  auto start = std::chrono::steady_clock::now();
  for (std::size_t rep = 0; rep < repeat; ++rep) {
    auto counts = parallel_map(pairs.size(), o.jobs, [&](std::size_t i) {
      auto seq = align_texts(pairs[i].complex.text, pairs[i].simple.text, cfg, pairs[i].pair_id);
      return run_pipeline(p, seq, &external, modes).size();
    });
    for (auto c : counts) groups += c;
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::size_t docs = pairs.size() * repeat;
  double rate = seconds > 0 ? static_cast<double>(docs) / seconds
                            : std::numeric_limits<double>::infinity();

  std::ostringstream s;
  if (o.format == "json") {
    Json j = {{"pipeline", p.name}, {"documents", docs},       {"groups", groups},
              {"jobs", o.jobs},     {"seconds", seconds},      {"docs_per_second", rate}};
    s << j.dump(2) << "\n";
  } else if (o.format == "csv") {
    s << "pipeline,documents,groups,jobs,seconds,docs_per_second\n"
      << p.name << "," << docs << "," << groups << "," << o.jobs << "," << seconds << "," << rate
      << "\n";
  } else {
    s << p.name << ": " << docs << " documents in " << seconds << " s, " << rate
      << " docs/s\n";
  }
  emit(out, o.out, s.str());
  return kExitOk;
}

struct FetchOptions {
  std::string complex_api = "https://en.wikipedia.org/w/api.php";
  std::string simple_api = "https://simple.wikipedia.org/w/api.php";
  std::string kb_api = "https://www.wikidata.org/w/api.php";
  std::string titles;
  std::vector<std::string> entities;
  std::string category;
  std::string cache;
  bool offline = false;
  double rate = 1.0;
  std::size_t max_revisions = 200;
};

// "complex title<TAB>simple title" per line; blank lines skipped.
std::vector<std::pair<std::string, std::string>> read_title_pairs(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw SchemaError("expected two tab-separated titles", n);
    }
    out.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return out;
}

int cmd_fetch(const Options& o, const FetchOptions& f, std::ostream& out, std::ostream& err) {
  int sources = !f.titles.empty() + !f.entities.empty() + !f.category.empty();
  if (sources != 1) throw UsageError("give exactly one of --titles, --entities, --category");

  auto transport = f.offline ? nullptr : make_http_transport();
  auto client = [&](const std::string& url) {
    IngestionConfig cfg;
    cfg.api_base_url = url;
    cfg.revisions_per_page_max = f.max_revisions;
    cfg.request_rate_limit = f.rate;
    cfg.cache_dir = f.cache;
    cfg.offline = f.offline;
    return ApiClient(cfg, transport);
  };
  ApiClient complex_wiki = client(f.complex_api);
  ApiClient simple_wiki = client(f.simple_api);

  std::vector<std::pair<std::string, std::string>> titles;
  if (!f.titles.empty()) {
    titles = read_title_pairs(f.titles);
  } else {
    ApiClient kb = client(f.kb_api);
    auto ids = f.entities;
    if (!f.category.empty()) ids = category_entities(complex_wiki, f.category);
    titles = fetch_paired_titles(kb, ids);
  }

  auto histories = parallel_map(titles.size(), o.jobs, [&](std::size_t i) {
    return fetch_history(complex_wiki, simple_wiki, titles[i].first, titles[i].second);
  });
  emit(out, o.out, jsonl(histories));
  err << "fetched " << histories.size() << " pages ("
      << complex_wiki.network_calls() + simple_wiki.network_calls() << " requests, "
      << complex_wiki.cache_hits() + simple_wiki.cache_hits() << " cache hits)\n";
  return kExitOk;
}

struct ServeOptions {
  std::string data_dir;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string token;
  std::string port_file;
  std::vector<std::string> annotators;
  double overlap = 0.0;
  std::size_t snapshot_every = 200;
};

int cmd_serve(const Options& o, const ServeOptions& s, std::ostream& err) {
  StoreOptions store_opts;
  store_opts.snapshot_every = s.snapshot_every;
  if (!s.data_dir.empty()) {
    std::filesystem::create_directories(s.data_dir);
    store_opts.log_path = (std::filesystem::path(s.data_dir) / "events.jsonl").string();
    store_opts.snapshot_path = (std::filesystem::path(s.data_dir) / "snapshot.jsonl").string();
  }
  AnnotationStore store(read_sequences(o.sequences), store_opts);
  if (!s.annotators.empty()) {
    auto n = store.assign(s.annotators, s.overlap, o.seed);
    err << "assigned " << n << " pairs\n";
  }

  ServiceConfig cfg;
  if (!s.token.empty()) cfg.token = s.token;
  AnnotationService service(store, cfg);

  // SIGINT/SIGTERM are taken by a waiter thread so shutdown runs outside a
  // signal handler. Server threads inherit the blocked mask.
  sigset_t stop_signals, previous;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, &previous);

  int port = service.bind(s.host, s.port);
  if (!s.port_file.empty()) write_file_atomic(s.port_file, std::to_string(port) + "\n");
  err << "listening on http://" << s.host << ":" << port << "\n";

  std::atomic<bool> done{false};
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&stop_signals, &sig);
    if (!done.load()) service.stop();
  });
  service.listen();
  done.store(true);
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);

  store.write_snapshot();
  return kExitOk;
}

struct SynthOptions {
  std::string pairs_out, sequences_out, annotations_out, histories_out;
  SynthConfig corpus;
  SynthHistoryConfig histories;
};

int cmd_synth(const Options& o, SynthOptions s) {
  if (s.pairs_out.empty() && s.sequences_out.empty() && s.annotations_out.empty() &&
      s.histories_out.empty()) {
    throw UsageError("synth needs at least one output");
  }
  s.corpus.seed = o.seed;
  s.histories.seed = o.seed;
  if (!s.pairs_out.empty() || !s.sequences_out.empty() || !s.annotations_out.empty()) {
    SynthCorpus c = generate_corpus(s.corpus);
    if (!s.pairs_out.empty()) write_pairs(s.pairs_out, c.pairs);
    if (!s.sequences_out.empty()) write_sequences(s.sequences_out, c.sequences);
    if (!s.annotations_out.empty()) write_annotations(s.annotations_out, c.annotations);
  }
  if (!s.histories_out.empty()) write_histories(s.histories_out, generate_histories(s.histories));
  return kExitOk;
}

// ---------------------------------------------------------------------------

CLI::Option* format_flag(CLI::App* sub, Options& o) {
  return sub->add_option("--format", o.format, "json, text or csv")
      ->check(CLI::IsMember({"json", "text", "csv"}))
      ->capture_default_str();
}

CLI::Option* jobs_flag(CLI::App* sub, Options& o) {
  return sub->add_option("--jobs", o.jobs, "worker threads; output order is unchanged")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
}

CLI::Option* granularity_flag(CLI::App* sub, Options& o) {
  return sub->add_option("--granularity", o.granularity, "token or character alignment")
      ->check(CLI::IsMember({"token", "character"}))
      ->capture_default_str();
}

CLI::Option* scorer_flag(CLI::App* sub, Options& o) {
  return sub->add_option("--scorer", o.scorer, "revision scorer")
      ->check(CLI::IsMember(scorer_ids()))
      ->capture_default_str();
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Document-level simplification toolkit", "docsimp"};
  app.require_subcommand(1);
  app.fallthrough(false);

  Options o;
  std::size_t repeat = 1;
  FetchOptions fetch;
  ServeOptions serve;
  SynthOptions synth;

  auto* align = app.add_subcommand("align", "Align each pair into an edit sequence");
  align->add_option("--pairs", o.pairs, "pair records (JSONL)")->required();
  align->add_option("--out", o.out, "sequences (JSONL); stdout when omitted");
  granularity_flag(align, o);
  jobs_flag(align, o);

  auto* match = app.add_subcommand("match", "Pair simple revisions with complex revisions");
  match->add_option("--histories", o.histories, "page histories (JSONL)")->required();
  scorer_flag(match, o);
  match->add_option("--scores", o.scores, "external scores (JSONL) for --scorer external");
  match->add_option("--threshold", o.threshold, "minimum score of a match");
  match->add_option("--dedup", o.dedup, "maximum similarity between kept simple revisions")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  match->add_option("--out", o.out, "pair records (JSONL); stdout when omitted");
  jobs_flag(match, o);

  auto* calibrate = app.add_subcommand("calibrate", "Pick the F1-optimal scorer threshold");
  calibrate->add_option("--pairs", o.pairs, "candidate pairs (JSONL)")->required();
  calibrate->add_option("--labels", o.labels, "aligned/unaligned labels (JSONL)")->required();
  scorer_flag(calibrate, o);
  calibrate->add_option("--scores", o.scores, "external scores (JSONL)");
  calibrate->add_option("--threshold", o.threshold, "score this threshold instead of searching");
  calibrate->add_option("--out", o.out, "report path; stdout when omitted");
  format_flag(calibrate, o);
  jobs_flag(calibrate, o);

  auto* identify = app.add_subcommand("identify", "Predict edit groups with a named pipeline");
  identify->add_option("--sequences", o.sequences, "sequences (JSONL)")->required();
  identify->add_option("--pipeline", o.pipeline, "tagger+grouper")
      ->required()
      ->check(CLI::IsMember(pipeline_names()));
  identify->add_option("--pred", o.pred, "external op or group predictions (JSONL)");
  identify->add_option("--ref", o.ref, "reference annotations proposing oracle-cc groups");
  identify->add_option("--annotations", o.annotations, "training annotations for rules");
  identify->add_option("--cc-inputs", o.cc_inputs, "write classifier inputs here and stop");
  identify->add_option("--out", o.out, "annotation records (JSONL); stdout when omitted");
  jobs_flag(identify, o);

  auto* evaluate = app.add_subcommand("evaluate", "Score predicted groups against references");
  evaluate->add_option("--pred", o.pred, "predicted annotations (JSONL)")->required();
  evaluate->add_option("--ref", o.ref, "reference annotations (JSONL)")->required();
  evaluate->add_option("--out", o.out, "report path; stdout when omitted");
  format_flag(evaluate, o);

  auto* agree = app.add_subcommand("agreement", "Inter-annotator agreement");
  agree->add_option("--annotations", o.annotations, "annotations (JSONL)")->required();
  agree->add_option("--sequences", o.sequences, "sequences (JSONL)")->required();
  agree->add_option("--out", o.out, "report path; stdout when omitted");
  format_flag(agree, o);

  auto* stats = app.add_subcommand("stats", "Corpus statistics");
  stats->add_option("--annotations", o.annotations, "annotations (JSONL)")->required();
  stats->add_option("--sequences", o.sequences, "sequences (JSONL)")->required();
  stats->add_option("--pairs", o.pairs, "pair records, for the compression ratio");
  stats->add_option("--out", o.out, "report path; stdout when omitted");
  format_flag(stats, o);

  auto* clean = app.add_subcommand("clean", "Undo non-simplification edits");
  clean->add_option("--pairs", o.pairs, "pair records (JSONL)")->required();
  clean->add_option("--annotations", o.annotations, "annotated or predicted groups")->required();
  clean->add_option("--out", o.out, "cleaned pair records (JSONL)")->required();
  granularity_flag(clean, o);

  auto* gen = app.add_subcommand("genmetrics", "SARI, FKGL and compression of system outputs");
  gen->add_option("--pairs", o.pairs, "pair records with sources and references")->required();
  gen->add_option("--candidates", o.candidates, "system outputs (JSONL)")->required();
  gen->add_option("--annotations", o.annotations, "groups found in the outputs");
  gen->add_option("--out", o.out, "report path; stdout when omitted");
  format_flag(gen, o);
  jobs_flag(gen, o);

  auto* bench = app.add_subcommand("bench", "Throughput of an identification pipeline");
  bench->add_option("--pipeline", o.pipeline, "tagger+grouper")
      ->required()
      ->check(CLI::IsMember(pipeline_names()));
  bench->add_option("--pairs", o.pairs, "pair records (JSONL)")->required();
  bench->add_option("--pred", o.pred, "external op predictions (JSONL)");
  bench->add_option("--annotations", o.annotations, "training annotations for rules");
  bench->add_option("--repeat", repeat, "passes over the corpus")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--out", o.out, "report path; stdout when omitted");
  granularity_flag(bench, o);
  format_flag(bench, o);
  jobs_flag(bench, o);

  auto* fetch_cmd = app.add_subcommand("fetch", "Download paired page histories");
  fetch_cmd->add_option("--titles", fetch.titles, "TSV of complex and simple titles");
  fetch_cmd->add_option("--entities", fetch.entities, "knowledge-base ids")->delimiter(',');
  fetch_cmd->add_option("--category", fetch.category, "complex-wiki category to list");
  fetch_cmd->add_option("--complex-api", fetch.complex_api)->capture_default_str();
  fetch_cmd->add_option("--simple-api", fetch.simple_api)->capture_default_str();
  fetch_cmd->add_option("--kb-api", fetch.kb_api)->capture_default_str();
  fetch_cmd->add_option("--cache", fetch.cache, "response cache directory");
  fetch_cmd->add_flag("--offline", fetch.offline, "serve from the cache only");
  fetch_cmd->add_option("--rate", fetch.rate, "requests per second per wiki")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fetch_cmd->add_option("--max-revisions", fetch.max_revisions, "per page")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fetch_cmd->add_option("--out", o.out, "page histories (JSONL); stdout when omitted");
  jobs_flag(fetch_cmd, o);

  auto* serve_cmd = app.add_subcommand("serve", "Run the annotation service");
  serve_cmd->add_option("--sequences", o.sequences, "sequences (JSONL)")->required();
  serve_cmd->add_option("--data-dir", serve.data_dir, "event log and snapshot; memory only if omitted");
  serve_cmd->add_option("--host", serve.host)->capture_default_str();
  serve_cmd->add_option("--port", serve.port, "0 picks a free port")
      ->check(CLI::Range(0, 65535))
      ->capture_default_str();
  serve_cmd->add_option("--token", serve.token, "required X-Annotator-Token for writes");
  serve_cmd->add_option("--port-file", serve.port_file, "write the bound port here");
  serve_cmd->add_option("--assign", serve.annotators, "assign unassigned pairs to these annotators")
      ->delimiter(',');
  serve_cmd->add_option("--overlap", serve.overlap, "share of pairs given a second annotator")
      ->check(CLI::Range(0.0, 1.0));
  serve_cmd->add_option("--snapshot-every", serve.snapshot_every)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  serve_cmd->add_option("--seed", o.seed)->capture_default_str();

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic annotated corpus");
  synth_cmd->add_option("--pairs-out", synth.pairs_out);
  synth_cmd->add_option("--sequences-out", synth.sequences_out);
  synth_cmd->add_option("--annotations-out", synth.annotations_out);
  synth_cmd->add_option("--histories-out", synth.histories_out);
  synth_cmd->add_option("--n", synth.corpus.pairs, "pairs")->capture_default_str();
  synth_cmd->add_option("--overlap", synth.corpus.overlap, "share with a second annotator")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  synth_cmd->add_option("--pages", synth.histories.pages)->capture_default_str();
  synth_cmd->add_option("--seed", o.seed)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitIo;
  }

  try {
    if (align->parsed()) return cmd_align(o, out);
    if (match->parsed()) return cmd_match(o, out);
    if (calibrate->parsed()) return cmd_calibrate(o, out);
    if (identify->parsed()) return cmd_identify(o, out);
    if (evaluate->parsed()) return cmd_evaluate(o, out);
    if (agree->parsed()) return cmd_agreement(o, out);
    if (stats->parsed()) return cmd_stats(o, out);
    if (clean->parsed()) return cmd_clean(o, out, err);
    if (gen->parsed()) return cmd_genmetrics(o, out);
    if (bench->parsed()) return cmd_bench(o, repeat, out);
    if (fetch_cmd->parsed()) return cmd_fetch(o, fetch, out, err);
    if (serve_cmd->parsed()) return cmd_serve(o, serve, err);
    if (synth_cmd->parsed()) return cmd_synth(o, synth);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitIo;
  }
  return kExitIo;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const NetworkError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace docsimp

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return docsimp::run_cli(args, std::cout, std::cerr);
}
