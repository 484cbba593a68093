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

// Annotation workflow backend: an event-sourced store of assignments and
// annotation records, and the JSON-over-HTTP API the browser workbench
// talks to.

#ifndef DOCSIMP_ANNOTATE_SERVICE_H_
#define DOCSIMP_ANNOTATE_SERVICE_H_

#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "docsimp/core.h"
#include "docsimp/corpus.h"
#include "docsimp/identify.h"

namespace httplib {
class Server;
}

namespace docsimp {

enum class PairStatus { kUnassigned, kInProgress, kComplete, kFlaggedUnaligned };
std::string_view to_string(PairStatus s);
std::optional<PairStatus> parse_status(std::string_view s);

struct AssignmentState {
  std::string pair_id;
  PairStatus status = PairStatus::kUnassigned;
  // Everyone the pair is assigned to; two or more on overlap pairs.
  std::vector<std::string> assigned_to;
  std::int64_t version = 0;
};
Json to_json(const AssignmentState& s);

// Everything known about one pair. Immutable once published.
struct PairEntry {
  AssignmentState state;
  std::map<std::string, AnnotationRecord> records;  // by annotator
  bool flagged = false;
};

struct StoreState {
  std::map<std::string, std::shared_ptr<const PairEntry>> pairs;
  std::uint64_t last_event = 0;
};

struct StoreOptions {
  std::string log_path;        // empty: memory only
  std::string snapshot_path;   // empty: no snapshots
  std::size_t snapshot_every = 200;  // events between snapshots
};

struct WriteResult {
  enum class Kind { kOk, kInvalid, kConflict, kNotFound };
  Kind kind = Kind::kOk;
  std::int64_t version = 0;  // current version after the call
  // {"kind", "message", "op_index"?, "group_index"?} per problem.
  std::vector<Json> violations;
  std::optional<AnnotationRecord> record;
};

// All mutations go through one writer lock and are appended to the event
// log before they become visible; readers take the published snapshot
// without locking.
class AnnotationStore {
 public:
  // Replays snapshot + log when present. A torn last log line (crash during
  // append) is dropped and the file truncated back to the last complete
  // event. Events for pairs outside `sequences` throw SchemaError.
  AnnotationStore(std::vector<AlignmentSequence> sequences, StoreOptions options = {});
  ~AnnotationStore();

  AnnotationStore(const AnnotationStore&) = delete;
  AnnotationStore& operator=(const AnnotationStore&) = delete;

  std::shared_ptr<const StoreState> snapshot() const;
  const SequenceMap& sequences() const { return seqs_; }

  // The record must validate against the pair's sequence unless it carries
  // the unaligned flag. A resubmission by the same annotator replaces the
  // earlier record. `if_version`, when given, must equal the current
  // version.
  WriteResult submit(const std::string& pair_id, AnnotationRecord record,
                     std::optional<std::int64_t> if_version);
  // Idempotent: flagging a flagged pair changes nothing.
  WriteResult flag(const std::string& pair_id, const std::string& annotator_id);

  // Random assignment of currently unassigned pairs: each gets one
  // annotator, round robin over a seeded shuffle, and round(overlap * n) of
  // them get a second distinct annotator. Returns the number assigned.
  // Throws InputError without annotators, with overlap outside [0, 1], or
  // when overlap > 0 and fewer than two annotators.
  std::size_t assign(const std::vector<std::string>& annotators, double overlap,
                     std::uint32_t seed);

  // Writes the snapshot file now (no-op without a snapshot path).
  void write_snapshot();

  // Every record in the store, sorted by (pair, annotator).
  std::vector<AnnotationRecord> all_records() const;

 private:
  void load();
  void apply(StoreState& st, const Json& event) const;
  // Appends the event, applies it to a copy of the current state and
  // publishes the copy. Caller holds writer_.
  void commit(Json event);
  void write_snapshot_locked();

  SequenceMap seqs_;
  StoreOptions opts_;
  std::mutex writer_;
  std::shared_ptr<const StoreState> state_;
  std::FILE* log_ = nullptr;
  std::size_t since_snapshot_ = 0;
};

struct ServiceConfig {
  // When set, mutating requests need a matching X-Annotator-Token header.
  std::optional<std::string> token;
  std::size_t max_page_size = 500;
};

// Routes:
//   GET  /api/taxonomy
//   GET  /api/pairs?status=&annotator=&page=&page_size=
//   GET  /api/pairs/{id}
//   POST /api/pairs/{id}/annotation   {"record": ..., "if_version": n}
//   POST /api/pairs/{id}/flag         {"annotator_id": ...}
//   POST /api/assign                  {"annotators": [...], "overlap": x, "seed": n}
//   GET  /api/agreement
class AnnotationService {
 public:
  AnnotationService(AnnotationStore& store, ServiceConfig cfg = {});
  ~AnnotationService();

  // Binds (port 0 picks a free one) and returns the port.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();
  void wait_until_ready();

 private:
  void routes();

  AnnotationStore& store_;
  ServiceConfig cfg_;
  std::unique_ptr<httplib::Server> server_;
};

// Taxonomy payload served by GET /api/taxonomy.
Json taxonomy_json();

}  // namespace docsimp

#endif  // DOCSIMP_ANNOTATE_SERVICE_H_
