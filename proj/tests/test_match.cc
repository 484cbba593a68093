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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "docsimp/errors.h"
#include "docsimp/match.h"
#include "docsimp/utf8.h"
#include "doctest.h"
#include "oracles.h"

using namespace docsimp;

namespace {

std::string random_text(std::mt19937& rng, int max_len, const char* alphabet = "abcx") {
  std::string s;
  int n = std::uniform_int_distribution<int>(0, max_len)(rng);
  std::size_t k = std::char_traits<char>::length(alphabet);
  for (int i = 0; i < n; ++i) {
    s += alphabet[std::uniform_int_distribution<std::size_t>(0, k - 1)(rng)];
  }
  return s;
}

DocumentRevision rev(std::string id, std::string text, long seconds = 0) {
  DocumentRevision r;
  r.page_id = "p";
  r.revision_id = std::move(id);
  r.text = std::move(text);
  r.timestamp = Timestamp(std::chrono::seconds(seconds));
  return r;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("docsimp_match_" + name)).string();
}

}  // namespace

TEST_CASE("levenshtein_ratio") {
  CHECK(levenshtein_ratio("abc", "abc") == 1.0);
  CHECK(levenshtein_ratio("", "abc") == 0.0);
  CHECK(levenshtein_ratio("", "") == 1.0);
  CHECK(levenshtein_ratio("kitten", "sitting") == doctest::Approx(1.0 - 3.0 / 7.0));
  // Code points, not bytes.
  CHECK(levenshtein_ratio("caf\xC3\xA9", "cafe") == doctest::Approx(0.75));
}

TEST_CASE("partial_levenshtein_ratio") {
  CHECK(partial_levenshtein_ratio("abc", "xxabcxx") == 1.0);
  CHECK(partial_levenshtein_ratio("abc", "abc") == 1.0);
  CHECK(partial_levenshtein_ratio("abd", "xxabcxx") == doctest::Approx(2.0 / 3.0));
  CHECK(partial_levenshtein_ratio("", "abc") == 1.0);
}

TEST_CASE("ratio scorers agree with the oracles and are symmetric") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    auto a = random_text(rng, 7), b = random_text(rng, 7);
    auto ua = utf8::decode(a), ub = utf8::decode(b);
    double lev = levenshtein_ratio(a, b);
    std::size_t longest = std::max(ua.size(), ub.size());
    double expect = longest == 0 ? 1.0 : 1.0 - double(oracle::levenshtein(ua, ub)) / longest;
    CHECK(lev == doctest::Approx(expect).epsilon(1e-12));
    CHECK(partial_levenshtein_ratio(a, b) ==
          doctest::Approx(oracle::partial_ratio(ua, ub)).epsilon(1e-12));
    CHECK(lev == levenshtein_ratio(b, a));
    CHECK(partial_levenshtein_ratio(a, b) == partial_levenshtein_ratio(b, a));
    CHECK(lev >= 0.0);
    CHECK(lev <= 1.0);
    CHECK(partial_levenshtein_ratio(a, a) == 1.0);
    CHECK(entity_overlap(a, b) == entity_overlap(b, a));
  }
}

// Known to fail: with the shorter-length normalization the window cost can
// shrink less than the denominator, e.g. "abc" vs "axbxcx" gives 1/3 against
// a plain ratio of 1/2. Registered as its own test so the failure stays
// visible without masking the rest of this file.
TEST_CASE("partial ratio never falls below the plain ratio" * doctest::test_suite("end_gap")) {
  CHECK(partial_levenshtein_ratio("abc", "axbxcx") >= levenshtein_ratio("abc", "axbxcx"));
  std::mt19937 rng(9);
  int violations = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    auto a = random_text(rng, 10), b = random_text(rng, 10);
    if (partial_levenshtein_ratio(a, b) < levenshtein_ratio(a, b)) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("entity overlap") {
  auto e = capitalized_runs("The Mariinsky Theater is in Saint Petersburg. It opened in Russia.");
  CHECK(e == std::set<std::string>{"mariinsky theater", "saint petersburg", "russia"});
  CHECK(entity_overlap("He met Alice and Bob.", "He met Bob and Alice.") == 1.0);
  CHECK(entity_overlap("He met Alice.", "He met Bob.") == 0.0);
  CHECK(entity_overlap("no names here", "none here") == 1.0);
  EntityExtractor fixed = [](std::string_view t) {
    return t == "x" ? std::set<std::string>{"A", "B"} : std::set<std::string>{"B", "C"};
  };
  CHECK(entity_overlap("x", "y", fixed) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("delta_publish and majority") {
  CHECK(delta_publish(rev("a", ""), rev("b", "")) == 0.0);
  CHECK(delta_publish(rev("a", "", 0), rev("b", "", 3600)) == -3600.0);
  CHECK(delta_publish(rev("a", "", 86400), rev("b", "", 0)) == -86400.0);
  auto no_time = rev("c", "");
  no_time.timestamp.reset();
  CHECK_THROWS_AS(delta_publish(no_time, rev("b", "")), InputError);
  CHECK(majority_score(rev("a", "x"), rev("b", "y")) == 1.0);
  CHECK(make_scorer("majority")(rev("a", "x"), rev("b", "y")) == 1.0);
  CHECK_THROWS_AS(make_scorer("nli"), InputError);
}

TEST_CASE("external scores") {
  auto path = temp_path("scores.jsonl");
  {
    std::ofstream(path) << "";
  }
  CHECK(ExternalScores::load(path).size() == 0);
  {
    std::ofstream(path) << R"({"pair_id": "s1:c1", "score": 0.9})" << "\n";
  }
  auto ext = ExternalScores::load(path);
  CHECK(ext.size() == 1);
  CHECK(ext.at("s1:c1") == 0.9);
  CHECK_THROWS_AS(ext.at("s1:c2"), LookupError);
  auto scorer = make_scorer("external", &ext);
  CHECK(scorer(rev("s1", ""), rev("c1", "")) == 0.9);
  CHECK_THROWS_AS(scorer(rev("s1", ""), rev("c9", "")), LookupError);
  {
    std::ofstream(path) << R"({"pair_id": "a", "score": 1})" << "\n"
                        << R"({"pair_id": "a", "score": 2})" << "\n";
  }
  try {
    ExternalScores::load(path);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.line() == 2);
  }
  std::filesystem::remove(path);
}

TEST_CASE("calibrate_threshold") {
  std::vector<LabeledScore> sep = {{0.1, false}, {0.9, true}};
  auto c = calibrate_threshold(sep);
  CHECK(c.threshold == 0.5);
  CHECK(c.scores.f1 == 100.0);

  std::vector<LabeledScore> flat = {{0.4, true}, {0.4, false}, {0.4, true}};
  c = calibrate_threshold(flat);
  CHECK(c.threshold == -std::numeric_limits<double>::infinity());

  std::vector<LabeledScore> one_label = {{0.1, true}, {0.2, true}};
  CHECK_THROWS_AS(calibrate_threshold(one_label), CalibrationError);
  CHECK_THROWS_AS(calibrate_threshold({}), CalibrationError);
}

TEST_CASE("calibrate_threshold equals the exhaustive scan") {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    int n = std::uniform_int_distribution<int>(2, 20)(rng);
    std::vector<LabeledScore> data;
    std::vector<oracle::Labeled> odata;
    for (int i = 0; i < n; ++i) {
      double s = std::uniform_int_distribution<int>(0, 8)(rng) / 8.0;
      bool y = i == 0 ? true : (i == 1 ? false : std::bernoulli_distribution(0.5)(rng));
      data.push_back({s, y});
      odata.push_back({s, y});
    }
    auto got = calibrate_threshold(data);
    auto want = oracle::calibrate(odata);
    CHECK(got.threshold == want.tau);
    CHECK(got.scores.f1 == doctest::Approx(100.0 * want.f1).epsilon(1e-12));
  }
}

TEST_CASE("majority scorer at a 62.6% base rate") {
  std::vector<LabeledScore> data;
  for (int i = 0; i < 1000; ++i) data.push_back({1.0, i < 626});
  auto s = classification_scores(data, 0.5);
  CHECK(s.precision == doctest::Approx(62.6));
  CHECK(s.recall == 100.0);
  CHECK(std::abs(s.f1 - 77.0) <= 0.05);
}

TEST_CASE("match_revisions") {
  auto lev = make_scorer("levenshtein");
  std::vector<DocumentRevision> ew = {rev("e1", "the cat sat on the mat"),
                                      rev("e2", "a completely different text about dogs")};
  SUBCASE("nothing above threshold") {
    std::vector<DocumentRevision> sew = {rev("s1", "zzzz")};
    CHECK(match_revisions(ew, sew, {"levenshtein", 0.9}, lev).empty());
  }
  SUBCASE("single match") {
    std::vector<DocumentRevision> sew = {rev("s1", "the cat sat on a mat")};
    auto m = match_revisions(ew, sew, {"levenshtein", 0.5}, lev);
    REQUIRE(m.size() == 1);
    CHECK(m[0].complex.revision_id == "e1");
  }
  SUBCASE("near-duplicate simple revisions keep only the first") {
    std::vector<DocumentRevision> sew = {rev("s1", "the cat sat on a mat"),
                                         rev("s2", "the cat sat on a mat!"),
                                         rev("s3", "completely different text about dogs")};
    auto m = match_revisions(ew, sew, {"levenshtein", 0.5}, lev);
    REQUIRE(m.size() == 2);
    CHECK(m[0].simple.revision_id == "s1");
    CHECK(m[1].simple.revision_id == "s3");
    CHECK(m[1].complex.revision_id == "e2");
  }
  SUBCASE("distinct simple revisions may not reuse a complex revision") {
    std::vector<DocumentRevision> sew = {rev("s1", "the cat sat on the mat"),
                                         rev("s2", "xyz qrs")};
    auto m = match_revisions(ew, sew, {"majority", 0.5}, make_scorer("majority"));
    REQUIRE(m.size() == 1);
    CHECK(m[0].complex.revision_id == "e1");
  }
  SUBCASE("appending duplicate candidates changes nothing") {
    std::vector<DocumentRevision> sew = {rev("s1", "the cat sat on a mat"),
                                         rev("s3", "completely different text about dogs")};
    auto base = match_revisions(ew, sew, {"levenshtein", 0.3}, lev);
    auto dup = ew;
    dup.insert(dup.end(), ew.begin(), ew.end());
    auto again = match_revisions(dup, sew, {"levenshtein", 0.3}, lev);
    REQUIRE(base.size() == again.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      CHECK(base[i].complex == again[i].complex);
      CHECK(base[i].simple == again[i].simple);
    }
  }
}

TEST_CASE("accepted revisions are pairwise dissimilar and use distinct complex revisions") {
  std::mt19937 rng(4);
  auto lev = make_scorer("levenshtein");
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<DocumentRevision> ew, sew;
    for (int i = 0; i < 5; ++i) ew.push_back(rev("e" + std::to_string(i), random_text(rng, 12)));
    for (int i = 0; i < 6; ++i) sew.push_back(rev("s" + std::to_string(i), random_text(rng, 12)));
    auto m = match_revisions(ew, sew, {"levenshtein", 0.2}, lev);
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = i + 1; j < m.size(); ++j) {
        CHECK(levenshtein_ratio(m[i].simple.text, m[j].simple.text) <= 0.3);
        CHECK(m[i].complex.revision_id != m[j].complex.revision_id);
      }
    }
  }
}
