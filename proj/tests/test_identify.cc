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
#include "docsimp/errors.h"
#include "docsimp/identify.h"
#include "doctest.h"
#include "generators.h"

using namespace docsimp;

namespace {

constexpr auto kLex = EditCategory::kLexical;
constexpr auto kReo = EditCategory::kReordering;
constexpr auto kSem = EditCategory::kSemanticDeletion;

// k0 i1 d2 k3 d4 k5 i6 d7 i8 k9
AlignmentSequence fixture() {
  return parse_markup(
      "a <INS>b</INS> <DEL>c</DEL> d <DEL>e</DEL> f <INS>g</INS> <DEL>h</DEL> <INS>i</INS> j",
      "p");
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("docsimp_identify_" + name)).string();
}

}  // namespace

TEST_CASE("op_majority tags each edit once by kind") {
  auto seq = fixture();
  auto t = op_majority(seq);
  CHECK(t.tags.size() == seq.edit_indices().size());
  CHECK(t.categories_at(1) == std::set{kLex});
  CHECK(t.categories_at(2) == std::set{kSem});
  CHECK(op_majority(parse_markup("a b c")).empty());
}

TEST_CASE("group_single") {
  TaggedOperations t{"p", {}};
  CHECK(group_single(t).empty());
  t.add(1, {kLex});
  t.add(2, {kLex});
  t.add(4, {kLex});
  t.add(4, {kReo});
  auto g = group_single(t);
  CHECK(g.size() == 4);
  CHECK_THROWS_AS(t.add(4, {kLex}), InputError);
}

TEST_CASE("group_adjacent") {
  auto seq = fixture();
  TaggedOperations t{"p", {}};
  t.add(1, {kLex});
  t.add(2, {kLex});  // adjacent to 1
  t.add(4, {kLex});  // keep in between
  t.add(6, {kLex});
  t.add(7, {kReo});  // different category breaks the run
  t.add(8, {kLex});
  auto g = group_adjacent(t, seq);
  std::vector<EditGroup> want = {{kLex, {1, 2}}, {kLex, {4}}, {kLex, {6}}, {kLex, {8}}, {kReo, {7}}};
  CHECK(g == canonical_groups(want));
}

TEST_CASE("group_adjacent partitions each category's tagged operations") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    auto seq = gen::random_sequence(rng, "p", 14);
    TaggedOperations t{"p", {}};
    for (auto op : seq.edit_indices()) {
      for (auto c : {kLex, kReo, kSem}) {
        if (gen::coin(rng, 0.4)) t.add(op, {c});
      }
    }
    auto groups = group_adjacent(t, seq);
    for (auto c : {kLex, kReo, kSem}) {
      std::multiset<std::size_t> seen;
      for (const auto& g : groups) {
        if (g.category == c) seen.insert(g.op_indices.begin(), g.op_indices.end());
      }
      auto ops = t.ops_with(c);
      CHECK(std::vector<std::size_t>(seen.begin(), seen.end()) == ops);
    }
    CHECK(group_rules(t, seq, all_contiguous()) == groups);
  }
}

TEST_CASE("category modes and rules") {
  auto seq = fixture();
  auto seqs = index_sequences({seq});
  CHECK_THROWS_AS(derive_category_modes({}, seqs), InputError);
  // Reordering: 1 of 4 groups contiguous. Lexical: 3 of 4.
  std::vector<AnnotationRecord> recs = {
      {"p", {{kReo, {2, 7}}, {kReo, {1, 4}}, {kReo, {4, 8}}, {kReo, {1}}}},
      {"p", {{kLex, {1, 2}}, {kLex, {6, 7, 8}}, {kLex, {4}}, {kLex, {2, 6}}}},
  };
  auto modes = derive_category_modes(recs, seqs);
  CHECK(mode_of(modes, kReo) == CategoryMode::kGlobal);
  CHECK(mode_of(modes, kLex) == CategoryMode::kContiguous);
  CHECK(mode_of(modes, EditCategory::kFormat) == CategoryMode::kContiguous);
  CHECK_FALSE(group_is_contiguous({kLex, {2, 6}}, seq));
  CHECK(group_is_contiguous({kLex, {6, 7, 8}}, seq));

  TaggedOperations t{"p", {}};
  t.add(2, {kReo});
  t.add(8, {kReo});
  t.add(1, {kLex});
  t.add(2, {kLex});
  auto g = group_rules(t, seq, modes);
  CHECK(g == canonical_groups({{kReo, {2, 8}}, {kLex, {1, 2}}}));
  CHECK(group_rules(TaggedOperations{"p", {}}, seq, modes).empty());

  AnnotationRecord unknown{"zz", {{kLex, {1}}}};
  CHECK_THROWS_AS(derive_category_modes(std::span(&unknown, 1), seqs), LookupError);
}

TEST_CASE("adjacent proposals") {
  auto p = adjacent_proposals(fixture());
  CHECK(p == std::vector<std::set<std::size_t>>{{1, 2}, {4}, {6, 7, 8}});
}

TEST_CASE("BIC decoding") {
  auto seq = fixture();
  SUBCASE("B I B I") {
    TaggedOperations t{"p", {}};
    t.add(1, {kLex, BiFlag::kBegin});
    t.add(2, {kLex, BiFlag::kInside});
    t.add(4, {kLex, BiFlag::kBegin});
    t.add(6, {kLex, BiFlag::kInside});
    CHECK(decode_bic(t, seq) == canonical_groups({{kLex, {1, 2}}, {kLex, {4, 6}}}));
  }
  SUBCASE("interleaved categories") {
    TaggedOperations t{"p", {}};
    t.add(1, {kLex, BiFlag::kBegin});
    t.add(2, {kReo, BiFlag::kBegin});
    t.add(4, {kLex, BiFlag::kInside});
    CHECK(decode_bic(t, seq) == canonical_groups({{kLex, {1, 4}}, {kReo, {2}}}));
  }
  SUBCASE("initial I opens a group") {
    TaggedOperations t{"p", {}};
    t.add(4, {kLex, BiFlag::kInside});
    t.add(6, {kLex, BiFlag::kInside});
    CHECK(decode_bic(t, seq) == std::vector<EditGroup>{{kLex, {4, 6}}});
  }
  SUBCASE("probabilities decide the flag") {
    TaggedOperations t{"p", {}};
    t.add(1, {kLex, std::nullopt, 0.6, 0.4});
    t.add(2, {kLex, std::nullopt, 0.5, 0.5});  // tie goes to B
    t.add(4, {kLex, BiFlag::kBegin, 0.1, 0.9});  // probabilities win over the flag
    CHECK(decode_bic(t, seq) == canonical_groups({{kLex, {1}}, {kLex, {2, 4}}}));
  }
  SUBCASE("missing flag") {
    TaggedOperations t{"p", {}};
    t.add(1, {kLex});
    CHECK_THROWS_AS(decode_bic(t, seq), InputError);
  }
}

TEST_CASE("BIC encoding") {
  auto seq = fixture();
  AnnotationRecord rec{"p", {{kLex, {1, 4}}, {kReo, {2}}, {kLex, {6, 8}}}};
  auto t = encode_bic(rec, seq);
  CHECK(t.tags.at(1)[0].bi == BiFlag::kBegin);
  CHECK(t.tags.at(4)[0].bi == BiFlag::kInside);
  CHECK(t.tags.at(6)[0].bi == BiFlag::kBegin);
  CHECK(decode_bic(t, seq) == canonical_groups(rec.groups));

  AnnotationRecord interleaved{"p", {{kLex, {1, 6}}, {kLex, {4}}}};
  try {
    encode_bic(interleaved, seq);
    FAIL("expected RepresentabilityError");
  } catch (const RepresentabilityError& e) {
    CHECK(e.category() == "lexical");
  }
  AnnotationRecord shared{"p", {{kReo, {1, 2}}, {kReo, {2}}}};
  CHECK_THROWS_AS(encode_bic(shared, seq), RepresentabilityError);
  AnnotationRecord keep{"p", {{kReo, {0}}}};
  CHECK_THROWS_AS(encode_bic(keep, seq), InputError);
}

TEST_CASE("adjusted sequences") {
  auto seq = align_texts(
      "The Mariinsky Theater is a historic theater of opera and balet in Saint Petersburg.",
      "The Mariinsky Theater is a very famous theater of opera and ballet in Saint Petersburg.",
      {}, "m");
  auto edits = seq.edit_indices();
  REQUIRE(edits.size() == 4);
  auto adj = build_adjusted_sequence(seq, EditGroup{kLex, {edits[0], edits[1]}});
  CHECK(serialize_markup(adj) ==
        "The Mariinsky Theater is a <INS>very famous</INS> <DEL>historic</DEL> theater of opera "
        "and balet in Saint Petersburg .");
  CHECK(reconstruct_source(adj) == reconstruct_source(seq));

  auto all = build_adjusted_sequence(seq, std::set<std::size_t>(edits.begin(), edits.end()));
  CHECK(all == seq);

  auto one = build_adjusted_sequence(seq, EditGroup{kSem, {edits[1]}});
  CHECK(one.edit_indices().size() == 1);
  CHECK(one[one.edit_indices()[0]].kind == OpKind::kDelete);
  CHECK_THROWS_AS(build_adjusted_sequence(seq, EditGroup{kSem, {}}), InputError);
  CHECK_THROWS_AS(build_adjusted_sequence(seq, EditGroup{kSem, {0}}), InputError);
}

TEST_CASE("adjusted sequences keep the source and revert only outside the group") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    auto seq = gen::random_sequence(rng, "p", 12);
    auto edits = seq.edit_indices();
    if (edits.empty()) continue;
    std::set<std::size_t> group;
    for (auto e : edits) {
      if (gen::coin(rng)) group.insert(e);
    }
    if (group.empty()) group.insert(edits[0]);
    auto adj = build_adjusted_sequence(seq, group);
    CHECK(reconstruct_source(adj) == reconstruct_source(seq));
    std::vector<Token> target;
    for (const auto& op : seq.operations()) {
      bool inside = group.count(op.index) > 0;
      if (op.kind == OpKind::kKeep || (op.kind == OpKind::kInsert && inside) ||
          (op.kind == OpKind::kDelete && !inside)) {
        target.insert(target.end(), op.tokens.begin(), op.tokens.end());
      }
    }
    CHECK(reconstruct_target(adj) == detokenize(target));
  }
}

TEST_CASE("tagged markup") {
  auto seq = align_texts("is a historic theater", "is a very famous theater", {}, "m");
  TaggedOperations t{"m", {}};
  t.add(1, {kLex, BiFlag::kBegin});
  t.add(2, {kLex, BiFlag::kInside});
  auto text = serialize_tagged_markup(t, seq);
  CHECK(text == "is a <B;lexical>very famous</INS> <I;lexical>historic</DEL> theater");
  auto back = parse_tagged_markup(text, "m");
  CHECK(back.sequence == seq);
  CHECK(back.tags == t);

  CHECK(serialize_tagged_markup(TaggedOperations{"m", {}}, parse_markup("a b")) == "a b");

  TaggedOperations multi{"m", {}};
  multi.add(2, {kReo});
  multi.add(2, {kLex, BiFlag::kBegin});
  auto mtext = serialize_tagged_markup(multi, seq);
  CHECK(mtext == "is a <INS>very famous</INS> <B;lexical><reordering>historic</DEL> theater");
  CHECK(parse_tagged_markup(mtext, "m").tags == multi);

  CHECK_THROWS_AS(parse_tagged_markup("a <B;lexicon>b</INS>"), ParseError);
  CHECK_THROWS_AS(parse_tagged_markup("a <X;lexical>b</INS>"), ParseError);
  CHECK_THROWS_AS(parse_tagged_markup("a <lexical>b"), ParseError);
}

TEST_CASE("tagged markup round-trips on generated data") {
  std::mt19937 rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    auto seq = gen::random_sequence(rng, "p", 10);
    TaggedOperations t{"p", {}};
    for (auto op : seq.edit_indices()) {
      for (auto c : all_categories()) {
        if (gen::coin(rng, 0.08)) {
          std::optional<BiFlag> bi;
          if (gen::coin(rng)) bi = gen::coin(rng) ? BiFlag::kBegin : BiFlag::kInside;
          t.add(op, {c, bi});
        }
      }
    }
    auto text = serialize_tagged_markup(t, seq);
    auto back = parse_tagged_markup(text, "p");
    CHECK(back.sequence == seq);
    CHECK(back.tags == t);
  }
}

TEST_CASE("prediction files") {
  auto path = temp_path("pred.jsonl");
  auto seqs = index_sequences({fixture()});
  auto write = [&](const std::string& s) { std::ofstream(path) << s; };

  write("");
  auto none = load_predictions(path, seqs);
  CHECK(none.at("p").empty());

  write(R"({"pair_id":"p","op_index":2,"category":"lexical","bi":"B","p_B":0.7,"p_I":0.3})"
        "\n");
  auto one = load_predictions(path, seqs);
  REQUIRE(one.at("p").tags.size() == 1);
  CHECK(one.at("p").tags.at(2)[0].p_begin == 0.7);

  write_predictions(path, one);
  CHECK(load_predictions(path, seqs) == one);

  auto expect_line = [&](const std::string& text, std::size_t line) {
    write(text);
    try {
      load_predictions(path, seqs);
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(e.line() == line);
    }
  };
  expect_line(R"({"pair_id":"p","op_index":99,"category":"lexical"})", 1);
  expect_line(R"({"pair_id":"p","op_index":0,"category":"lexical"})", 1);
  expect_line("\n" R"({"pair_id":"p","op_index":1,"category":"nope"})", 2);
  expect_line(R"({"pair_id":"q","op_index":1,"category":"lexical"})", 1);
  expect_line(R"({"pair_id":"p","op_index":1,"category":"lexical","p_B":0.2})", 1);

  write(R"({"pair_id":"p","op_indices":[1,2],"category":"lexical"})" "\n");
  auto groups = load_group_predictions(path, seqs);
  CHECK(groups.at("p") == std::vector<EditGroup>{{kLex, {1, 2}}});
  std::filesystem::remove(path);
}
