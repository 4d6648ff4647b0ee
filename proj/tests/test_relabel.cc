// Copyright 2026 The FstBias Authors.
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

#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "fstbias/error.h"
#include "fstbias/relabel.h"
#include "fstbias/util.h"
#include "oracles.h"

using namespace fstbias;
using namespace fstbias::testing;

namespace {

std::vector<std::string> Words(const std::string& line) {
  return SplitWords(line);
}

std::vector<std::string> RandomSentence(std::mt19937_64& rng, int max_len) {
  static const std::vector<std::string> pool = {
      "call", "open", "play", "jain", "jane", "smith", "doe",
      "mobile", "now", "please", "text", "app"};
  std::uniform_int_distribution<int> len(1, max_len);
  std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
  std::vector<std::string> out;
  int n = len(rng);
  for (int i = 0; i < n; ++i) out.push_back(pool[pick(rng)]);
  return out;
}

// Random word-level edits applied to a sentence.
std::vector<std::string> Perturb(std::mt19937_64& rng,
                                 std::vector<std::string> words) {
  std::uniform_int_distribution<int> mode(0, 3);
  std::uniform_int_distribution<size_t> pos_any(0, words.size());
  for (int edits = mode(rng); edits > 0; --edits) {
    if (words.empty()) break;
    std::uniform_int_distribution<size_t> pos(0, words.size() - 1);
    switch (mode(rng)) {
      case 0:
        words[pos(rng)] = "noise";
        break;
      case 1:
        words.erase(words.begin() + pos(rng));
        break;
      default:
        words.insert(words.begin() + pos_any(rng) % (words.size() + 1),
                     "extra");
        break;
    }
  }
  return words;
}

bool TagsBalancedNonNested(const std::vector<std::string>& tokens) {
  bool open = false;
  for (const auto& t : tokens) {
    if (IsEnterTag(t)) {
      if (open) return false;
      open = true;
    } else if (IsExitTag(t)) {
      if (!open) return false;
      open = false;
    }
  }
  return !open;
}

}  // namespace

TEST_SUITE("align") {
  TEST_CASE("identical sequences are all matches") {
    auto a = Align(Words("call jain smith"), Words("call jain smith"));
    CHECK(a.cost == 0);
    CHECK(a.items.size() == 3);
    for (const auto& item : a.items) CHECK(item.op == EditOp::kMatch);
  }

  TEST_CASE("single differing word is one substitution") {
    auto a = Align(Words("call jain smith"), Words("call jane smith"));
    CHECK(a.cost == 1);
    CHECK(a.substitutions == 1);
    CHECK(a.deletions == 0);
    CHECK(a.insertions == 0);
  }

  TEST_CASE("comparison is case-insensitive by default") {
    CHECK(Align(Words("Jain Smith"), Words("jain smith")).cost == 0);
    CHECK(Align(Words("Jain"), Words("jain"), /*case_sensitive=*/true).cost ==
          1);
  }

  TEST_CASE("projections reproduce the inputs") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 200; ++trial) {
      auto ref = RandomSentence(rng, 8);
      auto hyp = Perturb(rng, ref);
      auto alignment = Align(ref, hyp);
      std::vector<std::string> ref_back, hyp_back;
      for (const auto& item : alignment.items) {
        if (item.ref_index >= 0) ref_back.push_back(ref[item.ref_index]);
        if (item.hyp_index >= 0) hyp_back.push_back(hyp[item.hyp_index]);
      }
      CHECK(ref_back == ref);
      CHECK(hyp_back == hyp);
    }
  }

  TEST_CASE("cost equals the classic DP on 1000 random pairs") {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 1000; ++trial) {
      auto ref = RandomSentence(rng, 8);
      auto hyp = trial % 4 == 0 ? RandomSentence(rng, 8) : Perturb(rng, ref);
      CHECK(Align(ref, hyp).cost == OracleEditDistance(ref, hyp));
    }
  }
}

TEST_SUITE("insert_tags") {
  TEST_CASE("worked entity example") {
    auto out = InsertTags(
        Words("call jain smith mobile"),
        Words("call @contact# jane smith #contact@ mobile"));
    CHECK(out == Words("call @contact# jain smith #contact@ mobile"));
  }

  TEST_CASE("hyp without tags returns ref unchanged") {
    auto ref = Words("open the pod bay doors");
    CHECK(InsertTags(ref, Words("open the pod bay door")) == ref);
  }

  TEST_CASE("deletion inside the entity keeps tags ordered") {
    auto out = InsertTags(
        Words("call jain mobile"),
        Words("call @contact# jain smith #contact@ mobile"));
    CHECK(TagsBalancedNonNested(out));
    CHECK(StripTags(out) == Words("call jain mobile"));
    CHECK(out == Words("call @contact# jain #contact@ mobile"));
  }

  TEST_CASE("span aligned entirely to gaps is dropped") {
    auto out = InsertTags(Words("call mobile"),
                          Words("call @contact# zzz #contact@ mobile"));
    CHECK(out == Words("call mobile"));
  }

  TEST_CASE("unbalanced or nested tags are rejected") {
    auto ref = Words("call jain");
    CHECK_THROWS_AS(InsertTags(ref, Words("call #contact@ jain")), DataError);
    CHECK_THROWS_AS(InsertTags(ref, Words("call @contact# jain")), DataError);
    CHECK_THROWS_AS(
        InsertTags(ref, Words("@contact# @app# jain #app@ #contact@")),
        DataError);
    CHECK_THROWS_AS(InsertTags(ref, Words("@contact# jain #app@")),
                    DataError);
  }

  TEST_CASE("round trip and well-formedness on random tagged pairs") {
    std::mt19937_64 rng(79);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int trial = 0; trial < 1000; ++trial) {
      auto ref = RandomSentence(rng, 8);
      auto base = Perturb(rng, ref);
      // Insert up to two non-overlapping tagged spans into the hyp.
      std::vector<std::string> hyp;
      size_t pos = 0;
      int spans = 1 + coin(rng);
      for (int s = 0; s < spans && pos <= base.size(); ++s) {
        std::uniform_int_distribution<size_t> start_dist(pos, base.size());
        size_t start = start_dist(rng);
        std::uniform_int_distribution<size_t> end_dist(
            start, std::min(base.size(), start + 3));
        size_t end = end_dist(rng);
        while (pos < start) hyp.push_back(base[pos++]);
        hyp.push_back(s % 2 == 0 ? "@contact#" : "@app#");
        while (pos < end) hyp.push_back(base[pos++]);
        hyp.push_back(s % 2 == 0 ? "#contact@" : "#app@");
      }
      while (pos < base.size()) hyp.push_back(base[pos++]);

      auto out = InsertTags(ref, hyp);
      CHECK(StripTags(out) == ref);
      CHECK(TagsBalancedNonNested(out));
    }
  }
}
