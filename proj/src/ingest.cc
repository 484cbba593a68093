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

#include "docsimp/ingest.h"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <thread>

#include "docsimp/errors.h"

namespace docsimp {

namespace {

// ---------------------------------------------------------------------------
// Transport

class HttplibTransport : public HttpTransport {
 public:
  explicit HttplibTransport(std::chrono::seconds timeout) : timeout_(timeout) {}

  HttpResponse get(const std::string& url) override {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw NetworkError("not an absolute url: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    std::string origin = url.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
    httplib::Client cli(origin);
    if (!cli.is_valid()) throw NetworkError("unsupported url (https needs OpenSSL): " + url);
    cli.set_connection_timeout(timeout_);
    cli.set_read_timeout(timeout_);
    cli.set_follow_location(true);
    httplib::Headers headers{{"User-Agent", "docsimp/0.1 (document simplification research)"}};
    auto res = cli.Get(path, headers);
    if (!res) throw NetworkError(url + ": " + httplib::to_string(res.error()));
    return {res->status, res->body};
  }

 private:
  std::chrono::seconds timeout_;
};

// ---------------------------------------------------------------------------
// JSON access

const Json& field(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) {
    throw SchemaError(what + ": response lacks '" + key + "'");
  }
  return j.at(key);
}

std::string id_string(const Json& j) {
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  if (j.is_string()) return j.get<std::string>();
  throw SchemaError("id is neither a number nor a string");
}

// Copies every continuation parameter into the next request; false when
// there is nothing more.
bool continue_with(const Json& j, std::map<std::string, std::string>& params) {
  if (!j.contains("continue")) return false;
  const auto& c = j.at("continue");
  if (!c.is_object()) throw SchemaError("'continue' is not an object");
  for (const auto& [k, v] : c.items()) params[k] = v.is_string() ? v.get<std::string>() : v.dump();
  return true;
}

// ---------------------------------------------------------------------------
// Wikitext stripping

bool starts_with_ci(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[pos + i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i]))) {
      return false;
    }
  }
  return true;
}

std::size_t find_ci(std::string_view s, std::string_view needle, std::size_t from) {
  for (std::size_t i = from; i + needle.size() <= s.size(); ++i) {
    if (starts_with_ci(s, i, needle)) return i;
  }
  return std::string_view::npos;
}

std::string remove_comments(std::string_view s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    auto open = s.find("<!--", i);
    if (open == std::string_view::npos) {
      out.append(s.substr(i));
      break;
    }
    out.append(s.substr(i, open - i));
    auto close = s.find("-->", open + 4);
    if (close == std::string_view::npos) break;
    i = close + 3;
  }
  return out;
}

std::string cut_at_heading(std::string_view s) {
  std::size_t line = 0;
  while (line < s.size()) {
    if (s.compare(line, 2, "==") == 0) return std::string(s.substr(0, line));
    auto nl = s.find('\n', line);
    if (nl == std::string_view::npos) break;
    line = nl + 1;
  }
  return std::string(s);
}

std::string remove_refs(std::string_view s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    auto open = find_ci(s, "<ref", i);
    if (open == std::string_view::npos) {
      out.append(s.substr(i));
      break;
    }
    char next = open + 4 < s.size() ? s[open + 4] : '>';
    if (!(next == '>' || next == '/' || std::isspace(static_cast<unsigned char>(next)))) {
      out.append(s.substr(i, open + 4 - i));  // <references>, <refname...
      i = open + 4;
      continue;
    }
    out.append(s.substr(i, open - i));
    auto gt = s.find('>', open);
    if (gt == std::string_view::npos) break;
    if (s[gt - 1] == '/') {
      i = gt + 1;
      continue;
    }
    auto close = find_ci(s, "</ref>", gt + 1);
    if (close == std::string_view::npos) break;
    i = close + 6;
  }
  return out;
}

// Drops balanced open...close spans, nested ones included. An unbalanced
// opener drops the rest.
std::string remove_nested(std::string_view s, std::string_view open, std::string_view close) {
  std::string out;
  int depth = 0;
  for (std::size_t i = 0; i < s.size();) {
    if (s.compare(i, open.size(), open) == 0) {
      ++depth;
      i += open.size();
    } else if (depth > 0 && s.compare(i, close.size(), close) == 0) {
      --depth;
      i += close.size();
    } else {
      if (depth == 0) out += s[i];
      ++i;
    }
  }
  return out;
}

// Index just past the "]]" matching the "[[" at `start`, or npos.
std::size_t link_end(std::string_view s, std::size_t start) {
  int depth = 0;
  for (std::size_t i = start; i + 1 < s.size();) {
    if (s.compare(i, 2, "[[") == 0) {
      ++depth;
      i += 2;
    } else if (s.compare(i, 2, "]]") == 0) {
      if (--depth == 0) return i + 2;
      i += 2;
    } else {
      ++i;
    }
  }
  return std::string_view::npos;
}

std::string strip_links(std::string_view s);

std::string link_label(std::string_view inner) {
  std::string_view t = inner;
  while (!t.empty() && (t.front() == ':' || t.front() == ' ')) t.remove_prefix(1);
  for (auto ns : {"file:", "image:", "category:", "media:"}) {
    if (starts_with_ci(t, 0, ns)) return "";
  }
  // Label = text after the first top-level '|'.
  int depth = 0;
  std::size_t bar = std::string_view::npos;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    if (inner.compare(i, 2, "[[") == 0) {
      ++depth;
      ++i;
    } else if (inner.compare(i, 2, "]]") == 0) {
      --depth;
      ++i;
    } else if (inner[i] == '|' && depth == 0 && bar == std::string_view::npos) {
      bar = i;
    }
  }
  return strip_links(bar == std::string_view::npos ? t : inner.substr(bar + 1));
}

std::string strip_links(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    if (s.compare(i, 2, "[[") == 0) {
      auto end = link_end(s, i);
      if (end == std::string_view::npos) break;
      out += link_label(s.substr(i + 2, end - i - 4));
      i = end;
    } else if (s[i] == '[' &&
               (starts_with_ci(s, i + 1, "http://") || starts_with_ci(s, i + 1, "https://") ||
                s.compare(i + 1, 2, "//") == 0)) {
      auto close = s.find(']', i);
      if (close == std::string_view::npos) break;
      auto inner = s.substr(i + 1, close - i - 1);
      auto sp = inner.find(' ');
      if (sp != std::string_view::npos) out.append(inner.substr(sp + 1));
      i = close + 1;
    } else {
      out += s[i++];
    }
  }
  return out;
}

std::string strip_tags(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] == '<' && i + 1 < s.size() &&
        (std::isalpha(static_cast<unsigned char>(s[i + 1])) || s[i + 1] == '/')) {
      auto gt = s.find('>', i);
      if (gt == std::string_view::npos) break;
      i = gt + 1;
    } else {
      out += s[i++];
    }
  }
  return out;
}

std::string strip_quotes_and_entities(std::string_view s) {
  static const std::pair<std::string_view, std::string_view> kEntities[] = {
      {"&nbsp;", " "},  {"&amp;", "&"},   {"&lt;", "<"},                {"&gt;", ">"},
      {"&quot;", "\""}, {"&#39;", "'"},   {"&ndash;", "\xE2\x80\x93"}, {"&mdash;", "\xE2\x80\x94"},
  };
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] == '\'' && i + 1 < s.size() && s[i + 1] == '\'') {
      while (i < s.size() && s[i] == '\'') ++i;
      continue;
    }
    if (s[i] == '_' && s.compare(i, 2, "__") == 0) {
      // Behaviour switches such as __NOTOC__.
      auto end = s.find("__", i + 2);
      if (end != std::string_view::npos &&
          std::all_of(s.begin() + i + 2, s.begin() + end,
                      [](char c) { return std::isupper(static_cast<unsigned char>(c)); })) {
        i = end + 2;
        continue;
      }
    }
    if (s[i] == '&') {
      bool hit = false;
      for (const auto& [from, to] : kEntities) {
        if (s.compare(i, from.size(), from) == 0) {
          out.append(to);
          i += from.size();
          hit = true;
          break;
        }
      }
      if (hit) continue;
    }
    out += s[i++];
  }
  return out;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto nl = s.find('\n', start);
    auto line = s.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    std::string collapsed;
    bool space = false;
    for (char c : line) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        space = !collapsed.empty();
      } else {
        if (space) collapsed += ' ';
        space = false;
        collapsed += c;
      }
    }
    if (!collapsed.empty()) {
      if (!out.empty()) out += '\n';
      out += collapsed;
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return out;
}

}  // namespace

std::shared_ptr<HttpTransport> make_http_transport(std::chrono::seconds timeout) {
  return std::make_shared<HttplibTransport>(timeout);
}

RateLimiter::RateLimiter(double per_second) {
  if (!(per_second > 0)) throw InputError("request rate limit must be positive");
  interval_ = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(1.0 / per_second));
  next_ = std::chrono::steady_clock::now();
}

void RateLimiter::acquire() {
  std::lock_guard lock(mu_);
  auto now = std::chrono::steady_clock::now();
  if (next_ > now) {
    std::this_thread::sleep_until(next_);
    now = next_;
  }
  next_ = now + interval_;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string build_url(const std::string& base, const std::map<std::string, std::string>& params) {
  std::string url = base;
  char sep = base.find('?') == std::string::npos ? '?' : '&';
  for (const auto& [k, v] : params) {
    url += sep;
    sep = '&';
    url += httplib::detail::encode_query_param(k);
    url += '=';
    url += httplib::detail::encode_query_param(v);
  }
  return url;
}

ApiClient::ApiClient(IngestionConfig cfg, std::shared_ptr<HttpTransport> transport)
    : cfg_(std::move(cfg)),
      transport_(transport ? std::move(transport) : make_http_transport()),
      limiter_(cfg_.request_rate_limit) {
  if (cfg_.api_base_url.empty()) throw InputError("api_base_url is empty");
  if (cfg_.revisions_per_page_max == 0) throw InputError("revisions_per_page_max must be >= 1");
  if (cfg_.max_retries < 0) throw InputError("max_retries must be >= 0");
  if (!cfg_.cache_dir.empty()) std::filesystem::create_directories(cfg_.cache_dir);
}

std::string ApiClient::cache_path(const std::string& url) const {
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.json", static_cast<unsigned long long>(fnv1a64(url)));
  return (std::filesystem::path(cfg_.cache_dir) / name).string();
}

Json ApiClient::get(std::map<std::string, std::string> params) {
  params["format"] = "json";
  params["formatversion"] = "2";
  const std::string url = build_url(cfg_.api_base_url, params);

  auto parse = [&](const std::string& body) {
    Json j = Json::parse(body, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
      throw SchemaError("malformed JSON response for " + url);
    }
    if (j.contains("error")) {
      const auto& e = j.at("error");
      throw InputError("API error for " + url + ": " + e.value("code", "?") + ": " +
                       e.value("info", ""));
    }
    return j;
  };

  std::string path;
  if (!cfg_.cache_dir.empty()) {
    path = cache_path(url);
    if (std::filesystem::exists(path)) {
      ++cache_hits_;
      return parse(read_file(path));
    }
  }
  if (cfg_.offline) throw NetworkError("offline and not cached: " + url);

  std::string last_error;
  for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(cfg_.backoff * (1 << (attempt - 1)));
    limiter_.acquire();
    ++network_calls_;
    HttpResponse res;
    try {
      res = transport_->get(url);
    } catch (const NetworkError& e) {
      last_error = e.what();
      continue;
    }
    if (res.status == 429 || res.status >= 500) {
      last_error = "HTTP " + std::to_string(res.status);
      continue;
    }
    if (res.status != 200) {
      throw NetworkError("HTTP " + std::to_string(res.status) + " for " + url);
    }
    Json j = parse(res.body);
    if (!path.empty()) write_file_atomic(path, res.body);
    return j;
  }
  throw NetworkError("giving up after " + std::to_string(cfg_.max_retries + 1) +
                     " attempts on " + url + ": " + last_error);
}

std::vector<std::pair<std::string, std::string>> fetch_paired_titles(
    ApiClient& kb, const std::vector<std::string>& entity_ids, const std::string& complex_site,
    const std::string& simple_site) {
  std::vector<std::pair<std::string, std::string>> out;
  constexpr std::size_t kBatch = 50;
  for (std::size_t b = 0; b < entity_ids.size(); b += kBatch) {
    std::string ids;
    auto end = std::min(entity_ids.size(), b + kBatch);
    for (std::size_t i = b; i < end; ++i) ids += (i > b ? "|" : "") + entity_ids[i];
    Json j = kb.get({{"action", "wbgetentities"},
                     {"ids", ids},
                     {"props", "sitelinks"},
                     {"sitefilter", complex_site + "|" + simple_site}});
    const auto& entities = field(j, "entities", "wbgetentities");
    for (std::size_t i = b; i < end; ++i) {
      if (!entities.contains(entity_ids[i])) continue;
      const auto& e = entities.at(entity_ids[i]);
      if (!e.is_object() || e.contains("missing") || !e.contains("sitelinks")) continue;
      const auto& links = e.at("sitelinks");
      if (!links.is_object() || !links.contains(complex_site) || !links.contains(simple_site)) {
        continue;
      }
      out.emplace_back(field(links.at(complex_site), "title", "sitelink").get<std::string>(),
                       field(links.at(simple_site), "title", "sitelink").get<std::string>());
    }
  }
  return out;
}

std::vector<std::string> category_entities(ApiClient& wiki, const std::string& category) {
  std::string title = starts_with_ci(category, 0, "category:") ? category : "Category:" + category;
  std::map<std::string, std::string> params{{"action", "query"},
                                            {"generator", "categorymembers"},
                                            {"gcmtitle", title},
                                            {"gcmnamespace", "0"},
                                            {"gcmlimit", "500"},
                                            {"prop", "pageprops"},
                                            {"ppprop", "wikibase_item"}};
  std::map<long long, std::string> by_page;
  for (;;) {
    Json j = wiki.get(params);
    if (j.contains("query")) {
      for (const auto& page : field(j.at("query"), "pages", "categorymembers")) {
        if (!page.contains("pageprops") || !page.at("pageprops").contains("wikibase_item")) continue;
        by_page[field(page, "pageid", "categorymembers").get<long long>()] =
            page.at("pageprops").at("wikibase_item").get<std::string>();
      }
    }
    if (!continue_with(j, params)) break;
  }
  std::vector<std::string> out;
  for (auto& [_, id] : by_page) out.push_back(id);
  return out;
}

std::vector<DocumentRevision> fetch_revisions(ApiClient& wiki, const std::string& title,
                                              Wiki which) {
  const std::size_t max = wiki.config().revisions_per_page_max;
  std::map<std::string, std::string> params{{"action", "query"},
                                            {"prop", "revisions"},
                                            {"titles", title},
                                            {"rvprop", "ids|timestamp|content"},
                                            {"rvslots", "main"},
                                            {"rvdir", "older"},
                                            {"rvlimit", std::to_string(std::min<std::size_t>(50, max))}};
  std::vector<DocumentRevision> out;
  for (;;) {
    Json j = wiki.get(params);
    const auto& pages = field(field(j, "query", "revisions"), "pages", "revisions");
    if (!pages.is_array() || pages.empty()) throw SchemaError("revisions: empty 'pages'");
    const auto& page = pages.at(0);
    if (page.contains("missing") || page.contains("invalid")) {
      throw NotFoundError("page not found: " + title);
    }
    std::string page_id = id_string(field(page, "pageid", "revisions"));
    std::string page_title = page.value("title", title);
    if (page.contains("revisions")) {
      for (const auto& rev : page.at("revisions")) {
        if (out.size() >= max) break;
        const Json* content = nullptr;
        if (rev.contains("slots") && rev.at("slots").contains("main")) {
          const auto& main = rev.at("slots").at("main");
          if (main.contains("content") && main.at("content").is_string()) content = &main.at("content");
        }
        if (!content) continue;
        DocumentRevision d;
        d.page_id = page_id;
        d.revision_id = id_string(field(rev, "revid", "revision"));
        d.timestamp = parse_timestamp(field(rev, "timestamp", "revision").get<std::string>());
        d.title = page_title;
        d.text = extract_intro(content->get<std::string>());
        d.source_wiki = which;
        out.push_back(std::move(d));
      }
    }
    if (out.size() >= max) break;
    if (!continue_with(j, params)) break;
    params["rvlimit"] = std::to_string(std::min<std::size_t>(50, max - out.size()));
  }
  std::reverse(out.begin(), out.end());
  return out;
}

PageHistory fetch_history(ApiClient& complex_wiki, ApiClient& simple_wiki,
                          const std::string& complex_title, const std::string& simple_title) {
  PageHistory h;
  h.complex_title = complex_title;
  h.simple_title = simple_title;
  h.complex_revisions = fetch_revisions(complex_wiki, complex_title, Wiki::kComplex);
  h.simple_revisions = fetch_revisions(simple_wiki, simple_title, Wiki::kSimple);
  h.page_id = h.complex_revisions.empty() ? complex_title : h.complex_revisions.front().page_id;
  return h;
}

std::string extract_intro(std::string_view wikitext) {
  std::string s = remove_comments(wikitext);
  s = cut_at_heading(s);
  s = remove_refs(s);
  s = remove_nested(s, "{{", "}}");
  s = remove_nested(s, "{|", "|}");
  s = strip_links(s);
  s = strip_tags(s);
  s = strip_quotes_and_entities(s);
  return collapse_whitespace(s);
}

}  // namespace docsimp
