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

#include "docsimp/annotate_service.h"

#include <httplib.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "docsimp/align.h"
#include "docsimp/errors.h"
#include "docsimp/metrics.h"

namespace docsimp {

namespace {

constexpr std::string_view kStatusNames[] = {"unassigned", "in_progress", "complete",
                                             "flagged_unaligned"};

void refresh_status(PairEntry& e) {
  auto& st = e.state;
  if (e.flagged) {
    st.status = PairStatus::kFlaggedUnaligned;
  } else if (!st.assigned_to.empty()) {
    bool all = std::all_of(st.assigned_to.begin(), st.assigned_to.end(),
                           [&](const std::string& a) { return e.records.count(a) > 0; });
    st.status = all ? PairStatus::kComplete : PairStatus::kInProgress;
  } else {
    st.status = e.records.empty() ? PairStatus::kUnassigned : PairStatus::kComplete;
  }
}

Json violation_json(const Violation& v) {
  Json j{{"kind", std::string(to_string(v.kind))}, {"message", v.message()}};
  if (v.kind == Violation::Kind::kEmptyGroup) {
    j["group_index"] = v.group_index;
  } else if (v.kind == Violation::Kind::kUncoveredOp) {
    j["op_index"] = v.op_index;
  } else {
    j["op_index"] = v.op_index;
    j["group_index"] = v.group_index;
  }
  return j;
}

Json entry_json(const PairEntry& e) {
  Json j = to_json(e.state);
  j["flagged"] = e.flagged;
  Json recs = Json::array();
  for (const auto& [_, r] : e.records) recs.push_back(to_json(r));
  j["records"] = recs;
  return j;
}

}  // namespace

std::string_view to_string(PairStatus s) { return kStatusNames[static_cast<int>(s)]; }

std::optional<PairStatus> parse_status(std::string_view s) {
  for (int i = 0; i < 4; ++i) {
    if (kStatusNames[i] == s) return static_cast<PairStatus>(i);
  }
  return std::nullopt;
}

Json to_json(const AssignmentState& s) {
  return Json{{"pair_id", s.pair_id},
              {"status", std::string(to_string(s.status))},
              {"assigned_to", s.assigned_to},
              {"version", s.version}};
}

// ---------------------------------------------------------------------------
// Store

AnnotationStore::AnnotationStore(std::vector<AlignmentSequence> sequences, StoreOptions options)
    : seqs_(index_sequences(std::move(sequences))), opts_(std::move(options)) {
  load();
}

AnnotationStore::~AnnotationStore() {
  if (log_) std::fclose(log_);
}

std::shared_ptr<const StoreState> AnnotationStore::snapshot() const {
  return std::atomic_load(&state_);
}

void AnnotationStore::load() {
  namespace fs = std::filesystem;
  auto st = std::make_shared<StoreState>();
  for (const auto& [id, _] : seqs_) {
    auto e = std::make_shared<PairEntry>();
    e->state.pair_id = id;
    st->pairs[id] = e;
  }

  if (!opts_.snapshot_path.empty() && fs::exists(opts_.snapshot_path)) {
    bool header = true;
    for_each_jsonl(opts_.snapshot_path, [&](const Json& j, std::size_t line) {
      if (header) {
        st->last_event = static_cast<std::uint64_t>(require_int(j, "last_event", line));
        header = false;
        return;
      }
      auto id = require_string(j, "pair_id", line);
      if (!seqs_.count(id)) throw SchemaError("snapshot names unknown pair '" + id + "'", line);
      auto e = std::make_shared<PairEntry>();
      e->state.pair_id = id;
      e->state.version = require_int(j, "version", line);
      e->flagged = require_bool(j, "flagged", line);
      for (const auto& a : require_field(j, "assigned_to", line)) {
        e->state.assigned_to.push_back(a.get<std::string>());
      }
      for (const auto& r : require_field(j, "records", line)) {
        auto rec = annotation_from_json(r, line);
        e->records[rec.annotator_id] = rec;
      }
      refresh_status(*e);
      st->pairs[id] = e;
    });
  }

  if (!opts_.log_path.empty()) {
    if (fs::exists(opts_.log_path)) {
      std::string text = read_file(opts_.log_path);
      std::size_t pos = 0, line = 0;
      bool need_newline = false;
      while (pos < text.size()) {
        ++line;
        auto nl = text.find('\n', pos);
        bool last = nl == std::string::npos || nl + 1 >= text.size();
        std::string_view row(text.data() + pos, (nl == std::string::npos ? text.size() : nl) - pos);
        Json ev = Json::parse(row, nullptr, false);
        if (ev.is_discarded() || !ev.is_object()) {
          if (!last) throw SchemaError("corrupt event in annotation log", line);
          // Torn final append: cut it off.
          fs::resize_file(opts_.log_path, pos);
          break;
        }
        auto seq = static_cast<std::uint64_t>(require_int(ev, "event", line));
        if (seq > st->last_event) {
          try {
            apply(*st, ev);
          } catch (const SchemaError& e) {
            throw SchemaError(e.what(), line);
          }
        }
        need_newline = nl == std::string::npos;
        if (nl == std::string::npos) break;
        pos = nl + 1;
      }
      log_ = std::fopen(opts_.log_path.c_str(), "ab");
      if (log_ && need_newline) std::fputc('\n', log_);
    } else {
      log_ = std::fopen(opts_.log_path.c_str(), "ab");
    }
    if (!log_) throw IoError("cannot open annotation log '" + opts_.log_path + "'");
  }
  std::atomic_store(&state_, std::shared_ptr<const StoreState>(st));
}

void AnnotationStore::apply(StoreState& st, const Json& ev) const {
  auto edit = [&](const std::string& id) -> PairEntry& {
    auto it = st.pairs.find(id);
    if (it == st.pairs.end()) throw SchemaError("event for unknown pair '" + id + "'");
    auto copy = std::make_shared<PairEntry>(*it->second);
    it->second = copy;
    return *copy;
  };
  auto type = require_string(ev, "type", 0);
  if (type == "annotation") {
    auto rec = annotation_from_json(require_field(ev, "record", 0));
    auto& e = edit(rec.pair_id);
    if (rec.unaligned_flag) e.flagged = true;
    e.records[rec.annotator_id] = std::move(rec);
    ++e.state.version;
    refresh_status(e);
  } else if (type == "flag") {
    auto& e = edit(require_string(ev, "pair_id", 0));
    e.flagged = true;
    ++e.state.version;
    refresh_status(e);
  } else if (type == "assign") {
    for (const auto& [id, who] : require_field(ev, "assignments", 0).items()) {
      auto& e = edit(id);
      e.state.assigned_to = who.get<std::vector<std::string>>();
      ++e.state.version;
      refresh_status(e);
    }
  } else {
    throw SchemaError("unknown event type '" + type + "'");
  }
  st.last_event = static_cast<std::uint64_t>(require_int(ev, "event", 0));
}

void AnnotationStore::commit(Json event) {
  auto cur = std::atomic_load(&state_);
  event["event"] = cur->last_event + 1;
  auto next = std::make_shared<StoreState>(*cur);
  apply(*next, event);
  if (log_) {
    std::string line = dump_line(event) + "\n";
    if (std::fwrite(line.data(), 1, line.size(), log_) != line.size() || std::fflush(log_) != 0 ||
        ::fsync(::fileno(log_)) != 0) {
      throw IoError("cannot append to annotation log '" + opts_.log_path + "'");
    }
  }
  std::atomic_store(&state_, std::shared_ptr<const StoreState>(next));
  if (!opts_.snapshot_path.empty() && ++since_snapshot_ >= opts_.snapshot_every) {
    write_snapshot_locked();
  }
}

WriteResult AnnotationStore::submit(const std::string& pair_id, AnnotationRecord record,
                                    std::optional<std::int64_t> if_version) {
  std::lock_guard lock(writer_);
  auto cur = std::atomic_load(&state_);
  WriteResult out;
  auto it = cur->pairs.find(pair_id);
  if (it == cur->pairs.end()) {
    out.kind = WriteResult::Kind::kNotFound;
    return out;
  }
  out.version = it->second->state.version;
  if (record.pair_id != pair_id) {
    out.violations.push_back({{"kind", "pair_mismatch"},
                              {"message", "record is for pair '" + record.pair_id + "'"}});
  }
  if (record.annotator_id.empty()) {
    out.violations.push_back({{"kind", "missing_annotator"}, {"message", "annotator_id is empty"}});
  }
  if (out.violations.empty()) {
    for (const auto& v : validate_annotation(record, seqs_.at(pair_id)).violations) {
      out.violations.push_back(violation_json(v));
    }
  }
  if (!out.violations.empty()) {
    out.kind = WriteResult::Kind::kInvalid;
    return out;
  }
  if (if_version && *if_version != out.version) {
    out.kind = WriteResult::Kind::kConflict;
    return out;
  }
  if (!record.completed_at) {
    record.completed_at = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  }
  record.groups = canonical_groups(std::move(record.groups));
  commit(Json{{"type", "annotation"}, {"record", to_json(record)}});
  out.version = std::atomic_load(&state_)->pairs.at(pair_id)->state.version;
  out.record = std::move(record);
  return out;
}

WriteResult AnnotationStore::flag(const std::string& pair_id, const std::string& annotator_id) {
  std::lock_guard lock(writer_);
  auto cur = std::atomic_load(&state_);
  WriteResult out;
  auto it = cur->pairs.find(pair_id);
  if (it == cur->pairs.end()) {
    out.kind = WriteResult::Kind::kNotFound;
    return out;
  }
  if (!it->second->flagged) {
    commit(Json{{"type", "flag"}, {"pair_id", pair_id}, {"annotator_id", annotator_id}});
  }
  out.version = std::atomic_load(&state_)->pairs.at(pair_id)->state.version;
  return out;
}

std::size_t AnnotationStore::assign(const std::vector<std::string>& annotators, double overlap,
                                    std::uint32_t seed) {
  if (annotators.empty()) throw InputError("assignment needs at least one annotator");
  if (!(overlap >= 0 && overlap <= 1)) throw InputError("overlap must lie in [0, 1]");
  if (overlap > 0 && annotators.size() < 2) {
    throw InputError("overlapping assignment needs two annotators");
  }
  std::lock_guard lock(writer_);
  auto cur = std::atomic_load(&state_);
  std::vector<std::string> open;
  for (const auto& [id, e] : cur->pairs) {
    if (e->state.status == PairStatus::kUnassigned) open.push_back(id);
  }
  if (open.empty()) return 0;
  std::mt19937 rng(seed);
  std::shuffle(open.begin(), open.end(), rng);
  auto doubled = static_cast<std::size_t>(std::llround(overlap * static_cast<double>(open.size())));
  Json assignments = Json::object();
  for (std::size_t i = 0; i < open.size(); ++i) {
    std::size_t a = i % annotators.size();
    std::vector<std::string> who{annotators[a]};
    if (i < doubled) who.push_back(annotators[(a + 1) % annotators.size()]);
    assignments[open[i]] = who;
  }
  commit(Json{{"type", "assign"}, {"assignments", assignments}});
  return open.size();
}

void AnnotationStore::write_snapshot() {
  std::lock_guard lock(writer_);
  write_snapshot_locked();
}

void AnnotationStore::write_snapshot_locked() {
  since_snapshot_ = 0;
  if (opts_.snapshot_path.empty()) return;
  auto cur = std::atomic_load(&state_);
  std::vector<Json> lines{Json{{"last_event", cur->last_event}}};
  for (const auto& [_, e] : cur->pairs) lines.push_back(entry_json(*e));
  write_jsonl(opts_.snapshot_path, lines);
}

std::vector<AnnotationRecord> AnnotationStore::all_records() const {
  std::vector<AnnotationRecord> out;
  auto snap = snapshot();
  for (const auto& [_, e] : snap->pairs) {
    for (const auto& [__, r] : e->records) out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// HTTP

Json taxonomy_json() {
  Json out = Json::array();
  for (auto c : all_categories()) {
    const auto& info = category_info(c);
    out.push_back({{"category", std::string(to_string(c))},
                   {"class", std::string(to_string(class_of(c)))},
                   {"label", std::string(info.label)},
                   {"definition", std::string(info.definition)},
                   {"example", std::string(info.example)}});
  }
  return out;
}

namespace {

void send(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& msg) {
  send(res, status, Json{{"error", msg}});
}

std::optional<std::size_t> positive_param(const httplib::Request& req, const char* name,
                                          std::size_t fallback) {
  if (!req.has_param(name)) return fallback;
  const auto& v = req.get_param_value(name);
  if (v.empty() || v.size() > 9 || !std::all_of(v.begin(), v.end(), ::isdigit)) return std::nullopt;
  auto n = static_cast<std::size_t>(std::stoul(v));
  if (n == 0) return std::nullopt;
  return n;
}

}  // namespace

AnnotationService::AnnotationService(AnnotationStore& store, ServiceConfig cfg)
    : store_(store), cfg_(std::move(cfg)), server_(std::make_unique<httplib::Server>()) {
  routes();
}

AnnotationService::~AnnotationService() { stop(); }

int AnnotationService::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  if (!server_->bind_to_port(host, port)) {
    throw IoError("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void AnnotationService::listen() { server_->listen_after_bind(); }
void AnnotationService::stop() {
  if (server_) server_->stop();
}
void AnnotationService::wait_until_ready() { server_->wait_until_ready(); }

void AnnotationService::routes() {
  auto& svr = *server_;
  auto authorized = [this](const httplib::Request& req, httplib::Response& res) {
    if (!cfg_.token) return true;
    if (req.get_header_value("X-Annotator-Token") == *cfg_.token) return true;
    send_error(res, 401, "missing or wrong X-Annotator-Token");
    return false;
  };

  svr.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
    send_error(res, res.status, res.status == 404 ? "not found" : "request failed");
    return httplib::Server::HandlerResponse::Handled;
  });
  svr.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    } catch (...) {
      send_error(res, 500, "internal error");
    }
  });

  svr.Get("/api/taxonomy", [](const httplib::Request&, httplib::Response& res) {
    send(res, 200, taxonomy_json());
  });

  svr.Get("/api/pairs", [this](const httplib::Request& req, httplib::Response& res) {
    std::optional<PairStatus> status;
    if (req.has_param("status") && !req.get_param_value("status").empty()) {
      status = parse_status(req.get_param_value("status"));
      if (!status) return send_error(res, 400, "unknown status '" + req.get_param_value("status") + "'");
    }
    std::string annotator = req.get_param_value("annotator");
    auto page = positive_param(req, "page", 1);
    auto size = positive_param(req, "page_size", 50);
    if (!page || !size || *size > cfg_.max_page_size) {
      return send_error(res, 400, "page and page_size must be positive integers, page_size <= " +
                                      std::to_string(cfg_.max_page_size));
    }
    auto snap = store_.snapshot();
    std::vector<const PairEntry*> hits;
    for (const auto& [_, e] : snap->pairs) {
      if (status && e->state.status != *status) continue;
      if (!annotator.empty() &&
          std::find(e->state.assigned_to.begin(), e->state.assigned_to.end(), annotator) ==
              e->state.assigned_to.end()) {
        continue;
      }
      hits.push_back(e.get());
    }
    Json items = Json::array();
    std::size_t from = (*page - 1) * *size;
    for (std::size_t i = from; i < hits.size() && i < from + *size; ++i) {
      items.push_back(to_json(hits[i]->state));
    }
    send(res, 200, Json{{"items", items}, {"page", *page}, {"page_size", *size}, {"total", hits.size()}});
  });

  svr.Get(R"(/api/pairs/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    std::string id = req.matches[1];
    auto snap = store_.snapshot();
    auto it = snap->pairs.find(id);
    if (it == snap->pairs.end()) return send_error(res, 404, "unknown pair '" + id + "'");
    const auto& seq = store_.sequences().at(id);
    Json body = entry_json(*it->second);
    body["state"] = to_json(it->second->state);
    body["sequence"] = to_json(seq);
    body["markup"] = serialize_markup(seq);
    body["edit_indices"] = seq.edit_indices();
    send(res, 200, body);
  });

  svr.Post(R"(/api/pairs/([^/]+)/annotation)", [this, authorized](const httplib::Request& req,
                                                                   httplib::Response& res) {
    if (!authorized(req, res)) return;
    std::string id = req.matches[1];
    Json body = Json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object() || !body.contains("record")) {
      return send_error(res, 400, "body must be a JSON object with a 'record'");
    }
    std::optional<std::int64_t> if_version;
    if (body.contains("if_version") && !body["if_version"].is_null()) {
      if (!body["if_version"].is_number_integer()) return send_error(res, 400, "if_version must be an integer");
      if_version = body["if_version"].get<std::int64_t>();
    }
    AnnotationRecord rec;
    try {
      rec = annotation_from_json(body["record"]);
    } catch (const SchemaError& e) {
      return send(res, 422, Json{{"violations", Json::array({{{"kind", "schema"}, {"message", e.what()}}})}});
    }
    auto r = store_.submit(id, std::move(rec), if_version);
    switch (r.kind) {
      case WriteResult::Kind::kNotFound:
        return send_error(res, 404, "unknown pair '" + id + "'");
      case WriteResult::Kind::kInvalid:
        return send(res, 422, Json{{"violations", r.violations}, {"version", r.version}});
      case WriteResult::Kind::kConflict:
        return send(res, 409, Json{{"error", "version conflict"}, {"version", r.version}});
      case WriteResult::Kind::kOk:
        break;
    }
    auto snap = store_.snapshot();
    send(res, 200, Json{{"record", to_json(*r.record)},
                        {"version", r.version},
                        {"state", to_json(snap->pairs.at(id)->state)}});
  });

  svr.Post(R"(/api/pairs/([^/]+)/flag)", [this, authorized](const httplib::Request& req,
                                                             httplib::Response& res) {
    if (!authorized(req, res)) return;
    std::string id = req.matches[1];
    std::string annotator;
    if (!req.body.empty()) {
      Json body = Json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.is_object()) return send_error(res, 400, "body must be a JSON object");
      annotator = body.value("annotator_id", "");
    }
    auto r = store_.flag(id, annotator);
    if (r.kind == WriteResult::Kind::kNotFound) return send_error(res, 404, "unknown pair '" + id + "'");
    auto snap = store_.snapshot();
    send(res, 200, Json{{"version", r.version}, {"state", to_json(snap->pairs.at(id)->state)}});
  });

  svr.Post("/api/assign", [this, authorized](const httplib::Request& req, httplib::Response& res) {
    if (!authorized(req, res)) return;
    Json body = Json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object() || !body.contains("annotators") ||
        !body["annotators"].is_array()) {
      return send_error(res, 400, "body needs an 'annotators' array");
    }
    try {
      auto n = store_.assign(body["annotators"].get<std::vector<std::string>>(), body.value("overlap", 0.0),
                             body.value("seed", 0u));
      send(res, 200, Json{{"assigned", n}});
    } catch (const InputError& e) {
      send_error(res, 400, e.what());
    } catch (const Json::exception& e) {
      send_error(res, 400, e.what());
    }
  });

  svr.Get("/api/agreement", [this](const httplib::Request&, httplib::Response& res) {
    auto records = store_.all_records();
    send(res, 200, to_json(agreement(records, store_.sequences())));
  });
}

}  // namespace docsimp
