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

#include <filesystem>
#include <fstream>
#include <random>

#include "docsimp/align.h"
#include "docsimp/corpus.h"
#include "docsimp/errors.h"
#include "doctest.h"
#include "generators.h"

using namespace docsimp;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("docsimp_corpus_" + name)).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

PairRecord sample_pair(const std::string& id) {
  PairRecord p;
  p.pair_id = id;
  p.complex = {"10", "100", parse_timestamp("2020-01-01T00:00:00Z"), "Cat",
               "The cat (Felis catus) is a small carnivore.", Wiki::kComplex};
  p.simple = {"20", "200", std::nullopt, "Cat", "The cat is a small animal. \xC3\xA9", Wiki::kSimple};
  p.split = Split::kTest;
  p.wiki_categories = {"Felines", "Pets"};
  return p;
}

}  // namespace

TEST_CASE("pair records round-trip byte-stably") {
  auto path = temp_path("pairs.jsonl");
  std::vector<PairRecord> pairs = {sample_pair("a"), sample_pair("b")};
  write_pairs(path, pairs);
  auto text = read_file(path);
  auto back = read_pairs(path);
  CHECK(back == pairs);
  write_pairs(path, back);
  CHECK(read_file(path) == text);
  // Keys come out sorted.
  CHECK(text.rfind("{\"complex\":", 0) == 0);
  std::filesystem::remove(path);
}

TEST_CASE("sequences and annotations round-trip") {
  auto path = temp_path("seqs.jsonl");
  std::mt19937 rng(2);
  std::vector<AlignmentSequence> seqs;
  for (int i = 0; i < 20; ++i) seqs.push_back(gen::random_sequence(rng, "p" + std::to_string(i), 8));
  write_sequences(path, seqs);
  CHECK(read_sequences(path) == seqs);

  std::vector<AnnotationRecord> anns = {
      {"p0", {{EditCategory::kLexical, {1, 3}}, {EditCategory::kReordering, {2}}}, "annotator1",
       false, parse_timestamp("2022-05-01T10:00:00Z")},
      {"p0", {}, "annotator2", true, std::nullopt}};
  write_annotations(path, anns);
  CHECK(read_annotations(path) == anns);
  std::filesystem::remove(path);
}

TEST_CASE("empty files give empty collections") {
  auto path = temp_path("empty.jsonl");
  write_text(path, "");
  CHECK(read_pairs(path).empty());
  CHECK(read_annotations(path).empty());
  write_text(path, "\n  \n");
  CHECK(read_sequences(path).empty());
  std::filesystem::remove(path);
}

TEST_CASE("schema errors name the field and line") {
  auto path = temp_path("bad.jsonl");
  auto expect = [&](const std::string& text, std::size_t line, const std::string& needle) {
    write_text(path, text);
    try {
      read_annotations(path);
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(e.line() == line);
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect("{\"pair_id\":\"a\",\"groups\":[]}\n{\"groups\":[]}\n", 2, "pair_id");
  expect("{\"pair_id\":\"a\"}\n", 1, "groups");
  expect("{\"pair_id\":\"a\",\"groups\":[{\"category\":\"Lexical\",\"op_indices\":[1]}]}\n", 1,
         "category");
  expect("not json\n", 1, "malformed");
  expect("[1,2]\n", 1, "object");
  CHECK_THROWS_AS(read_pairs(temp_path("does_not_exist.jsonl")), IoError);
  std::filesystem::remove(path);
}

TEST_CASE("duplicate pair ids are rejected") {
  auto path = temp_path("dup.jsonl");
  write_pairs(path, {sample_pair("a"), sample_pair("a")});
  CHECK_THROWS_AS(read_pairs(path), SchemaError);
  std::filesystem::remove(path);
}

TEST_CASE("sequence decoding checks indices and run merging") {
  CHECK_THROWS_AS(
      sequence_from_json(Json::parse(
          R"({"pair_id":"p","operations":[{"index":1,"kind":"keep","tokens":["a"]}]})")),
      SchemaError);
  CHECK_THROWS_AS(
      sequence_from_json(Json::parse(R"({"pair_id":"p","operations":[
        {"index":0,"kind":"keep","tokens":["a"]},{"index":1,"kind":"keep","tokens":["b"]}]})")),
      SchemaError);
  CHECK_THROWS_AS(sequence_from_json(Json::parse(
                      R"({"pair_id":"p","operations":[{"index":0,"kind":"keep","tokens":[]}]})")),
                  SchemaError);
}

TEST_CASE("labels, candidates and histories") {
  auto path = temp_path("misc.jsonl");
  write_text(path, "{\"pair_id\":\"a\",\"label\":\"aligned\"}\n{\"pair_id\":\"b\",\"label\":\"unaligned\"}\n");
  auto labels = read_labels(path);
  REQUIRE(labels.size() == 2);
  CHECK(labels[0].aligned);
  CHECK_FALSE(labels[1].aligned);
  write_text(path, "{\"pair_id\":\"a\",\"label\":\"maybe\"}\n");
  CHECK_THROWS_AS(read_labels(path), SchemaError);

  write_text(path, "{\"pair_id\":\"a\",\"candidate\":\"x y\"}\n");
  CHECK(read_candidates(path)[0].text == "x y");

  PageHistory h{"Q1", "Cat", "Cat", {sample_pair("a").complex}, {sample_pair("a").simple}};
  write_histories(path, {h});
  CHECK(read_histories(path) == std::vector<PageHistory>{h});
  std::filesystem::remove(path);
}
