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

// Desk-scale clients for MediaWiki-style APIs: page pairing through
// knowledge-base site links, category listings and revision histories with
// introduction extraction. Responses are cached on disk by full request URL.

#ifndef DOCSIMP_INGEST_H_
#define DOCSIMP_INGEST_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "docsimp/core.h"
#include "docsimp/corpus.h"

namespace docsimp {

struct HttpResponse {
  int status = 0;
  std::string body;
};

// GET only. Implementations throw NetworkError when no response arrives.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse get(const std::string& url) = 0;
};

// cpp-httplib transport; https needs the library built with OpenSSL.
std::shared_ptr<HttpTransport> make_http_transport(std::chrono::seconds timeout = std::chrono::seconds(30));

struct IngestionConfig {
  std::string api_base_url;  // e.g. https://en.wikipedia.org/w/api.php
  std::size_t revisions_per_page_max = 200;
  double request_rate_limit = 1.0;  // requests per second
  std::string cache_dir;            // empty: no cache
  bool offline = false;             // cache only; a miss is a NetworkError
  int max_retries = 3;
  std::chrono::milliseconds backoff{500};  // doubled per retry
};

// Client-side token bucket (burst 1). Thread safe.
class RateLimiter {
 public:
  explicit RateLimiter(double per_second);
  void acquire();

 private:
  std::mutex mu_;
  std::chrono::steady_clock::duration interval_;
  std::chrono::steady_clock::time_point next_;
};

std::uint64_t fnv1a64(std::string_view data);

// Query string with sorted, percent-encoded parameters.
std::string build_url(const std::string& base, const std::map<std::string, std::string>& params);

class ApiClient {
 public:
  // Throws InputError on an empty base url, a non-positive rate or
  // revisions_per_page_max == 0.
  explicit ApiClient(IngestionConfig cfg, std::shared_ptr<HttpTransport> transport = nullptr);

  const IngestionConfig& config() const { return cfg_; }

  // format=json and formatversion=2 are added. Served from the cache when
  // present. Retries transport failures, 429 and 5xx with exponential
  // backoff, then throws NetworkError. A body that is not a JSON object is a
  // SchemaError and is not cached. Thread safe.
  Json get(std::map<std::string, std::string> params);

  std::size_t network_calls() const { return network_calls_.load(); }
  std::size_t cache_hits() const { return cache_hits_.load(); }

 private:
  std::string cache_path(const std::string& url) const;

  IngestionConfig cfg_;
  std::shared_ptr<HttpTransport> transport_;
  RateLimiter limiter_;
  std::atomic<std::size_t> network_calls_{0};
  std::atomic<std::size_t> cache_hits_{0};
};

// (complex title, simple title) for every entity carrying both site links,
// in input order. `kb` talks to the knowledge-base API.
std::vector<std::pair<std::string, std::string>> fetch_paired_titles(
    ApiClient& kb, const std::vector<std::string>& entity_ids,
    const std::string& complex_site = "enwiki", const std::string& simple_site = "simplewiki");

// Knowledge-base ids of the main-namespace members of a category, ordered
// by page id. `wiki` talks to the wiki that owns the category.
std::vector<std::string> category_entities(ApiClient& wiki, const std::string& category);

// Up to revisions_per_page_max most recent revisions, oldest first, with
// text reduced to the introduction. Revisions with hidden content are
// skipped. Throws NotFoundError for a missing page.
std::vector<DocumentRevision> fetch_revisions(ApiClient& wiki, const std::string& title,
                                              Wiki which);

PageHistory fetch_history(ApiClient& complex_wiki, ApiClient& simple_wiki,
                          const std::string& complex_title, const std::string& simple_title);

// Identifies the stripping rules below; bump when they change.
inline constexpr std::string_view kIntroStripVersion = "strip-v1";

// Text before the first "==" heading line, with comments, <ref> elements,
// templates, tables, file links and HTML tags removed, wiki links reduced
// to their label, bold/italic quotes dropped, common entities decoded and
// whitespace collapsed (paragraphs joined by "\n").
std::string extract_intro(std::string_view wikitext);

}  // namespace docsimp

#endif  // DOCSIMP_INGEST_H_
