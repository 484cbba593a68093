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

#include <httplib.h>

#include <filesystem>
#include <functional>
#include <thread>

#include "docsimp/errors.h"
#include "docsimp/ingest.h"
#include "doctest.h"

using namespace docsimp;
namespace fs = std::filesystem;

namespace {

using Params = std::map<std::string, std::string>;

Params params_of(const std::string& url) {
  Params out;
  auto q = url.find('?');
  if (q == std::string::npos) return out;
  httplib::Params p;
  httplib::detail::parse_query_text(url.substr(q + 1), p);
  for (auto& [k, v] : p) out[k] = v;
  return out;
}

class FakeTransport : public HttpTransport {
 public:
  using Handler = std::function<HttpResponse(const Params&)>;
  explicit FakeTransport(Handler h) : handler_(std::move(h)) {}
  HttpResponse get(const std::string& url) override {
    std::lock_guard lock(mu_);
    urls.push_back(url);
    return handler_(params_of(url));
  }
  std::vector<std::string> urls;

 private:
  std::mutex mu_;
  Handler handler_;
};

HttpResponse ok(const Json& j) { return {200, j.dump()}; }

std::string fresh_dir(const std::string& name) {
  auto d = fs::temp_directory_path() / ("docsimp_ingest_" + name);
  fs::remove_all(d);
  return d.string();
}

IngestionConfig fast_cfg(const std::string& cache = {}) {
  IngestionConfig c;
  c.api_base_url = "https://wiki.test/w/api.php";
  c.request_rate_limit = 1000;
  c.cache_dir = cache;
  c.backoff = std::chrono::milliseconds(1);
  return c;
}

// Page "Opera" with revisions 11..15 (oldest first); served newest first,
// two per response.
Json revision_page(const Params& p) {
  if (p.at("titles") == "Gone") {
    return {{"query", {{"pages", Json::array({{{"title", "Gone"}, {"missing", true}}})}}}};
  }
  int start = p.count("rvcontinue") ? std::stoi(p.at("rvcontinue")) : 15;
  int limit = std::min(2, std::stoi(p.at("rvlimit")));
  Json revs = Json::array();
  int r = start;
  for (; r > 10 && static_cast<int>(revs.size()) < limit; --r) {
    Json rev{{"revid", r}, {"timestamp", "2021-01-" + std::to_string(r) + "T00:00:00Z"}};
    if (r == 12 && p.at("titles") == "Hidden") {
      rev["slots"] = {{"main", {{"texthidden", true}}}};
    } else {
      rev["slots"] = {{"main", {{"content", "Text '''" + std::to_string(r) + "'''.\n== H ==\nx"}}}};
    }
    revs.push_back(rev);
  }
  Json j{{"query", {{"pages", Json::array({{{"pageid", 77}, {"title", p.at("titles")}, {"revisions", revs}}})}}}};
  if (r > 10) j["continue"] = {{"rvcontinue", std::to_string(r)}, {"continue", "||"}};
  return j;
}

}  // namespace

TEST_CASE("fnv1a64 and urls") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(build_url("http://x/api.php", {{"titles", "A B|C"}, {"action", "query"}}) ==
        "http://x/api.php?action=query&titles=A%20B%7CC");
  CHECK(build_url("http://x/api.php?k=1", {{"a", "b"}}) == "http://x/api.php?k=1&a=b");
}

TEST_CASE("intro extraction") {
  CHECK(extract_intro("Lead text.\n== History ==\nLater.") == "Lead text.");
  CHECK(extract_intro("{{Infobox x\n| a = {{b}}\n}}\n'''Paris''' is the [[capital city|capital]] of "
                      "[[France]].<ref name=\"a\">{{cite}}</ref> It is big.<ref name=b/>") ==
        "Paris is the capital of France. It is big.");
  CHECK(extract_intro("[[File:X.jpg|thumb|A [[cat]]]]Cats<!-- hidden --> purr.") == "Cats purr.");
  CHECK(extract_intro("See [https://example.org the site] or [https://bare.org].") ==
        "See the site or .");
  CHECK(extract_intro("A&nbsp;b &amp; <small>c</small>.__NOTOC__\n\n\n  Second   para.") ==
        "A b & c.\nSecond para.");
  CHECK(extract_intro("{| class=wikitable\n| x\n|}\nAfter table.") == "After table.");
  CHECK(extract_intro("[[a|b|c]] [[Category:Cities]]") == "b|c");
  CHECK(extract_intro("") == "");
  CHECK(extract_intro("== Only heading ==\nbody") == "");
  CHECK(kIntroStripVersion == "strip-v1");
}

TEST_CASE("paired titles from site links") {
  auto t = std::make_shared<FakeTransport>([](const Params& p) {
    CHECK(p.at("action") == "wbgetentities");
    CHECK(p.at("ids") == "Q1|Q2|Q3");
    CHECK(p.at("format") == "json");
    return ok({{"entities",
                {{"Q1", {{"sitelinks", {{"enwiki", {{"title", "Opera"}}}, {"simplewiki", {{"title", "Opera (s)"}}}}}}},
                 {"Q2", {{"sitelinks", {{"enwiki", {{"title", "Only EN"}}}}}}},
                 {"Q3", {{"missing", ""}}}}}});
  });
  auto dir = fresh_dir("pairs");
  ApiClient kb(fast_cfg(dir), t);
  auto pairs = fetch_paired_titles(kb, {"Q1", "Q2", "Q3"});
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0] == std::pair<std::string, std::string>{"Opera", "Opera (s)"});
  CHECK(kb.network_calls() == 1);

  // Offline, cache only: same answer, no network.
  auto cfg = fast_cfg(dir);
  cfg.offline = true;
  auto dead = std::make_shared<FakeTransport>([](const Params&) -> HttpResponse {
    throw NetworkError("must not be called");
  });
  ApiClient offline(cfg, dead);
  CHECK(fetch_paired_titles(offline, {"Q1", "Q2", "Q3"}) == pairs);
  CHECK(offline.network_calls() == 0);
  CHECK(offline.cache_hits() == 1);
  CHECK(dead->urls.empty());
  CHECK_THROWS_AS(fetch_paired_titles(offline, {"Q9"}), NetworkError);
}

TEST_CASE("revision histories") {
  auto t = std::make_shared<FakeTransport>([](const Params& p) { return ok(revision_page(p)); });

  SUBCASE("all revisions, oldest first, across continuations") {
    ApiClient wiki(fast_cfg(), t);
    auto revs = fetch_revisions(wiki, "Opera", Wiki::kComplex);
    REQUIRE(revs.size() == 5);
    CHECK(revs.front().revision_id == "11");
    CHECK(revs.back().revision_id == "15");
    CHECK(revs[0].text == "Text 11.");
    CHECK(revs[0].page_id == "77");
    CHECK(revs[0].source_wiki == Wiki::kComplex);
    CHECK(format_timestamp(*revs[2].timestamp) == "2021-01-13T00:00:00Z");
    CHECK(t->urls.size() == 3);
  }
  SUBCASE("limit keeps the most recent") {
    auto cfg = fast_cfg();
    cfg.revisions_per_page_max = 2;
    ApiClient wiki(cfg, t);
    auto revs = fetch_revisions(wiki, "Opera", Wiki::kSimple);
    REQUIRE(revs.size() == 2);
    CHECK(revs[0].revision_id == "14");
    CHECK(revs[1].revision_id == "15");
    CHECK(t->urls.size() == 1);
  }
  SUBCASE("limit of three spans two requests") {
    auto cfg = fast_cfg();
    cfg.revisions_per_page_max = 3;
    ApiClient wiki(cfg, t);
    auto revs = fetch_revisions(wiki, "Opera", Wiki::kSimple);
    REQUIRE(revs.size() == 3);
    CHECK(revs[0].revision_id == "13");
    CHECK(params_of(t->urls[1]).at("rvlimit") == "1");
  }
  SUBCASE("hidden content is skipped") {
    ApiClient wiki(fast_cfg(), t);
    auto revs = fetch_revisions(wiki, "Hidden", Wiki::kComplex);
    CHECK(revs.size() == 4);
  }
  SUBCASE("missing page") {
    ApiClient wiki(fast_cfg(), t);
    CHECK_THROWS_AS(fetch_revisions(wiki, "Gone", Wiki::kComplex), NotFoundError);
  }
  SUBCASE("history of both sides") {
    ApiClient a(fast_cfg(), t), b(fast_cfg(), t);
    auto h = fetch_history(a, b, "Opera", "Opera");
    CHECK(h.page_id == "77");
    CHECK(h.complex_revisions.size() == 5);
    CHECK(h.simple_revisions.back().source_wiki == Wiki::kSimple);
  }
}

TEST_CASE("category members") {
  auto t = std::make_shared<FakeTransport>([](const Params& p) {
    CHECK(p.at("gcmtitle") == "Category:Operas");
    if (!p.count("gcmcontinue")) {
      return ok({{"query", {{"pages", Json::array({{{"pageid", 9}, {"pageprops", {{"wikibase_item", "Q9"}}}},
                                                     {{"pageid", 3}}})}}},
                 {"continue", {{"gcmcontinue", "page|x"}, {"continue", "gcmcontinue||"}}}});
    }
    return ok({{"query", {{"pages", Json::array({{{"pageid", 4}, {"pageprops", {{"wikibase_item", "Q4"}}}}})}}}});
  });
  ApiClient wiki(fast_cfg(), t);
  CHECK(category_entities(wiki, "Operas") == std::vector<std::string>{"Q4", "Q9"});
  CHECK(t->urls.size() == 2);
}

TEST_CASE("retries, failures and malformed bodies") {
  int calls = 0;
  auto flaky = std::make_shared<FakeTransport>([&](const Params&) -> HttpResponse {
    ++calls;
    if (calls == 1) throw NetworkError("connection reset");
    if (calls == 2) return {503, ""};
    return ok({{"entities", Json::object()}});
  });
  ApiClient a(fast_cfg(), flaky);
  CHECK(fetch_paired_titles(a, {"Q1"}).empty());
  CHECK(a.network_calls() == 3);

  auto down = std::make_shared<FakeTransport>([](const Params&) { return HttpResponse{500, ""}; });
  auto cfg = fast_cfg();
  cfg.max_retries = 2;
  ApiClient b(cfg, down);
  CHECK_THROWS_AS(b.get({{"action", "query"}}), NetworkError);
  CHECK(down->urls.size() == 3);

  auto missing = std::make_shared<FakeTransport>([](const Params&) { return HttpResponse{404, "no"}; });
  ApiClient c(fast_cfg(), missing);
  CHECK_THROWS_AS(c.get({}), NetworkError);
  CHECK(missing->urls.size() == 1);

  auto dir = fresh_dir("malformed");
  auto junk = std::make_shared<FakeTransport>([](const Params&) { return HttpResponse{200, "{not json"}; });
  ApiClient d(fast_cfg(dir), junk);
  CHECK_THROWS_AS(d.get({}), SchemaError);
  CHECK(fs::is_empty(dir));

  auto shape = std::make_shared<FakeTransport>([](const Params&) { return ok({{"query", Json::object()}}); });
  ApiClient e(fast_cfg(), shape);
  CHECK_THROWS_AS(fetch_revisions(e, "X", Wiki::kComplex), SchemaError);

  auto api_err = std::make_shared<FakeTransport>(
      [](const Params&) { return ok({{"error", {{"code", "badparam"}, {"info", "nope"}}}}); });
  ApiClient f(fast_cfg(), api_err);
  CHECK_THROWS_AS(f.get({}), InputError);
}

TEST_CASE("config validation") {
  auto t = std::make_shared<FakeTransport>([](const Params&) { return ok(Json::object()); });
  auto cfg = fast_cfg();
  cfg.api_base_url.clear();
  CHECK_THROWS_AS(ApiClient(cfg, t), InputError);
  cfg = fast_cfg();
  cfg.request_rate_limit = 0;
  CHECK_THROWS_AS(ApiClient(cfg, t), InputError);
  cfg = fast_cfg();
  cfg.revisions_per_page_max = 0;
  CHECK_THROWS_AS(ApiClient(cfg, t), InputError);
}

TEST_CASE("rate limit spaces requests") {
  auto t = std::make_shared<FakeTransport>([](const Params&) { return ok(Json::object()); });
  auto cfg = fast_cfg();
  cfg.request_rate_limit = 20;  // 50 ms apart
  ApiClient a(cfg, t);
  auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 5; ++i) a.get({{"n", std::to_string(i)}});
  CHECK(std::chrono::steady_clock::now() - start >= std::chrono::milliseconds(195));
}

TEST_CASE("concurrent fetches share one client and cache") {
  auto t = std::make_shared<FakeTransport>([](const Params& p) { return ok(revision_page(p)); });
  auto dir = fresh_dir("concurrent");
  ApiClient wiki(fast_cfg(dir), t);
  std::vector<std::vector<DocumentRevision>> got(4);
  std::vector<std::thread> threads;
  for (int i = 0; i < 4; ++i) {
    threads.emplace_back([&, i] { got[i] = fetch_revisions(wiki, "P" + std::to_string(i % 2), Wiki::kComplex); });
  }
  for (auto& th : threads) th.join();
  for (const auto& g : got) CHECK(g.size() == 5);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    CHECK(e.path().extension() == ".json");
    ++files;
  }
  CHECK(files == 6);
}

TEST_CASE("http transport against a local server") {
  httplib::Server svr;
  svr.Get("/w/api.php", [](const httplib::Request& req, httplib::Response& res) {
    Params p;
    for (auto& [k, v] : req.params) p[k] = v;
    res.set_content(revision_page(p).dump(), "application/json");
  });
  int port = svr.bind_to_any_port("127.0.0.1");
  std::thread th([&] { svr.listen_after_bind(); });
  svr.wait_until_ready();

  auto cfg = fast_cfg();
  cfg.api_base_url = "http://127.0.0.1:" + std::to_string(port) + "/w/api.php";
  ApiClient wiki(cfg, make_http_transport(std::chrono::seconds(5)));
  auto revs = fetch_revisions(wiki, "Opera", Wiki::kComplex);
  CHECK(revs.size() == 5);
  CHECK(revs.back().text == "Text 15.");

  cfg.api_base_url = "http://127.0.0.1:" + std::to_string(port) + "/nope";
  cfg.max_retries = 0;
  ApiClient bad(cfg, make_http_transport(std::chrono::seconds(5)));
  CHECK_THROWS_AS(bad.get({}), NetworkError);

  svr.stop();
  th.join();
}
