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

#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <tuple>
#include <vector>

#include <doctest.h>

#include "fstbias/error.h"
#include "fstbias/fst.h"
#include "fstbias/fst_algo.h"
#include "oracles.h"

using namespace fstbias;
using namespace fstbias::testing;

namespace {

constexpr double kTol = 1e-9;
constexpr int kMaxArcs = 16;

// One linear path accepting the given label pairs.
Fst Chain(const SymbolTable& isyms, const SymbolTable& osyms,
          const std::vector<std::tuple<Label, Label, double>>& arcs,
          double final_weight = 0.0) {
  FstBuilder b(isyms, osyms);
  StateId s = b.AddState();
  b.SetStart(s);
  for (const auto& [il, ol, w] : arcs) {
    StateId t = b.AddState();
    b.AddArc(s, il, ol, Weight(w), t);
    s = t;
  }
  b.SetFinal(s, Weight(final_weight));
  return std::move(b).Build();
}

Fst IdentityOver(const SymbolTable& syms) {
  FstBuilder b(syms, syms);
  StateId s = b.AddState();
  b.SetStart(s);
  b.SetFinal(s, Weight::One());
  for (Label l = 1; l < syms.Size(); ++l) {
    b.AddArc(s, l, l, Weight::One(), s);
  }
  return std::move(b).Build();
}

}  // namespace

TEST_SUITE("weight") {
  TEST_CASE("tropical algebra") {
    CHECK(Weight(1.0).Plus(Weight(2.0)).value() == 1.0);
    CHECK(Weight(1.0).Times(Weight(2.0)).value() == 3.0);
    CHECK(Weight::Zero().IsZero());
    CHECK(Weight::One().value() == 0.0);
    CHECK(Weight::Zero().Plus(Weight(5.0)).value() == 5.0);
    CHECK(Weight::Zero().Times(Weight(5.0)).IsZero());
    CHECK_THROWS_AS(Weight(std::nan("")), DataError);
  }
}

TEST_SUITE("symbol_table") {
  TEST_CASE("epsilon is id 0 and ids are dense") {
    SymbolTable t;
    CHECK(t.Find("<eps>") == 0);
    CHECK(t.AddSymbol("a") == 1);
    CHECK(t.AddSymbol("b") == 2);
    CHECK(t.AddSymbol("a") == 1);
    CHECK(t.Name(2) == "b");
    CHECK(t.Find("missing") == -1);
  }

  TEST_CASE("round trip") {
    SymbolTable t;
    t.AddSymbol("a");
    t.AddSymbol("bb");
    std::ostringstream out;
    t.Write(out);
    std::istringstream in(out.str());
    CHECK(SymbolTable::Read(in) == t);
  }
}

TEST_SUITE("fst_builder") {
  TEST_CASE("rejects invalid structure") {
    SymbolTable syms = MakeAlphabet("a", 2);
    {
      FstBuilder b(syms, syms);
      StateId s = b.AddState();
      b.SetStart(s);
      b.AddArc(s, 1, 1, Weight::One(), 99);  // dangling target
      CHECK_THROWS_AS(std::move(b).Build(), DataError);
    }
    {
      FstBuilder b(syms, syms);
      StateId s = b.AddState();
      b.SetStart(s);
      b.AddArc(s, 7, 1, Weight::One(), s);  // label outside the table
      CHECK_THROWS_AS(std::move(b).Build(), DataError);
    }
  }

  TEST_CASE("canonical empty machine") {
    Fst empty;
    CHECK(empty.Empty());
    CHECK(EnumerateRelation(empty, 4).empty());
  }
}

TEST_SUITE("compose") {
  TEST_CASE("single path weights add") {
    SymbolTable a_in = MakeAlphabet("a", 1);   // a1
    SymbolTable mid = MakeAlphabet("x", 1);    // x1
    SymbolTable b_out = MakeAlphabet("y", 1);  // y1
    Fst a = Chain(a_in, mid, {{1, 1, 1.0}});
    Fst b = Chain(mid, b_out, {{1, 1, 2.0}});
    Fst c = Compose(a, b);
    Relation r = EnumerateRelation(c, kMaxArcs);
    REQUIRE(r.size() == 1);
    auto entry = *r.begin();
    CHECK(entry.first.first == std::vector<Label>{1});
    CHECK(entry.first.second == std::vector<Label>{1});
    CHECK(entry.second == doctest::Approx(3.0).epsilon(kTol));
  }

  TEST_CASE("identity on the right is neutral") {
    std::mt19937_64 rng(7);
    SymbolTable in = MakeAlphabet("a", 3);
    SymbolTable out = MakeAlphabet("x", 3);
    RandomFstParams params;
    for (int trial = 0; trial < 50; ++trial) {
      Fst a = RandomAcyclicFst(rng, params, in, out);
      Fst id = IdentityOver(out);
      Fst c = Compose(a, id);
      std::string diff;
      CHECK_MESSAGE(RelationsNear(OracleRelation(a, kMaxArcs),
                                  OracleRelation(c, kMaxArcs), kTol, &diff),
                    diff);
    }
  }

  TEST_CASE("alphabet mismatch is rejected") {
    SymbolTable in = MakeAlphabet("a", 2);
    SymbolTable mid = MakeAlphabet("x", 2);
    SymbolTable other = MakeAlphabet("q", 2);
    Fst a = Chain(in, mid, {{1, 1, 0.5}});
    Fst b = Chain(other, in, {{1, 1, 0.5}});
    CHECK_THROWS_AS(Compose(a, b), DataError);
  }

  TEST_CASE("matches the brute-force join on random pairs") {
    std::mt19937_64 rng(11);
    SymbolTable in = MakeAlphabet("a", 3);
    SymbolTable mid = MakeAlphabet("m", 3);
    SymbolTable out = MakeAlphabet("z", 3);
    RandomFstParams params;
    params.max_states = 5;
    for (int trial = 0; trial < 300; ++trial) {
      Fst a = RandomAcyclicFst(rng, params, in, mid);
      Fst b = RandomAcyclicFst(rng, params, mid, out);
      Relation expected = OracleCompose(OracleRelation(a, kMaxArcs),
                                        OracleRelation(b, kMaxArcs));
      Relation actual = OracleRelation(Compose(a, b), 2 * kMaxArcs);
      std::string diff;
      CHECK_MESSAGE(RelationsNear(expected, actual, kTol, &diff),
                    "trial " << trial << ": " << diff);
    }
  }
}

TEST_SUITE("determinize") {
  TEST_CASE("parallel arcs keep the min weight") {
    SymbolTable syms = MakeAlphabet("a", 1);
    FstBuilder b(syms, syms);
    StateId s0 = b.AddState(), s1 = b.AddState(), s2 = b.AddState();
    b.SetStart(s0);
    b.AddArc(s0, 1, 1, Weight(1.0), s1);
    b.AddArc(s0, 1, 1, Weight(2.0), s2);
    b.SetFinal(s1, Weight::One());
    b.SetFinal(s2, Weight::One());
    Fst det = Determinize(std::move(b).Build());
    Relation r = EnumerateRelation(det, kMaxArcs);
    REQUIRE(r.size() == 1);
    CHECK(r.begin()->second == doctest::Approx(1.0).epsilon(kTol));
    // Input-deterministic: a single arc from the start.
    CHECK(det.ArcsOf(det.start()).size() == 1);
  }

  TEST_CASE("deterministic input is a fixed point of the relation") {
    SymbolTable syms = MakeAlphabet("a", 2);
    Fst chain = Chain(syms, syms, {{1, 1, 1.0}, {2, 2, 2.0}});
    Fst det = Determinize(chain);
    std::string diff;
    CHECK(RelationsNear(OracleRelation(chain, kMaxArcs),
                        OracleRelation(det, kMaxArcs), kTol, &diff));
    Relation r = EnumerateRelation(det, kMaxArcs);
    REQUIRE(r.size() == 1);
    CHECK(r.begin()->second == doctest::Approx(3.0).epsilon(kTol));
  }

  TEST_CASE("cyclic input is rejected") {
    SymbolTable syms = MakeAlphabet("a", 1);
    FstBuilder b(syms, syms);
    StateId s = b.AddState();
    b.SetStart(s);
    b.AddArc(s, 1, 1, Weight::One(), s);
    b.SetFinal(s, Weight::One());
    CHECK_THROWS_AS(Determinize(std::move(b).Build()), DataError);
  }

  TEST_CASE("preserves the relation on 1000 random machines") {
    std::mt19937_64 rng(23);
    SymbolTable in = MakeAlphabet("a", 3);
    SymbolTable out = MakeAlphabet("x", 3);
    RandomFstParams params;
    params.max_states = 6;
    for (int trial = 0; trial < 1000; ++trial) {
      Fst a = RandomAcyclicFst(rng, params, in, out);
      Fst det = Determinize(a);
      std::string diff;
      CHECK_MESSAGE(RelationsNear(OracleRelation(a, kMaxArcs),
                                  OracleRelation(det, kMaxArcs), kTol, &diff),
                    "trial " << trial << ": " << diff);
      // Deterministic over composite (ilabel, olabel) pairs, and the
      // true-epsilon arcs are gone.
      for (StateId s = 0; s < det.NumStates(); ++s) {
        std::set<std::pair<Label, Label>> seen;
        for (const Arc& arc : det.ArcsOf(s)) {
          CHECK(!(arc.ilabel == kEpsilon && arc.olabel == kEpsilon));
          CHECK(seen.insert({arc.ilabel, arc.olabel}).second);
        }
      }
    }
  }

  TEST_CASE("acceptors become literally input-deterministic") {
    std::mt19937_64 rng(29);
    SymbolTable syms = MakeAlphabet("a", 3);
    RandomFstParams params;
    params.acceptor = true;
    for (int trial = 0; trial < 300; ++trial) {
      Fst a = RandomAcyclicFst(rng, params, syms, syms);
      Fst det = Determinize(a);
      std::string diff;
      CHECK_MESSAGE(RelationsNear(OracleRelation(a, kMaxArcs),
                                  OracleRelation(det, kMaxArcs), kTol, &diff),
                    "trial " << trial << ": " << diff);
      for (StateId s = 0; s < det.NumStates(); ++s) {
        std::set<Label> seen;
        for (const Arc& arc : det.ArcsOf(s)) {
          CHECK(arc.ilabel != kEpsilon);
          CHECK_MESSAGE(seen.insert(arc.ilabel).second,
                        "duplicate input label at state " << s);
        }
      }
    }
  }
}

TEST_SUITE("minimize") {
  TEST_CASE("merges duplicated suffix states of a two-phrase trie") {
    // "a b" and "a c" built with fully duplicated paths.
    SymbolTable syms = MakeAlphabet("w", 3);  // w1 w2 w3
    FstBuilder b(syms, syms);
    for (int i = 0; i < 5; ++i) b.AddState();
    b.SetStart(0);
    b.AddArc(0, 1, 1, Weight(0.5), 1);
    b.AddArc(1, 2, 2, Weight(0.5), 2);
    b.AddArc(0, 1, 1, Weight(0.5), 3);  // duplicate prefix arc
    b.AddArc(3, 3, 3, Weight(0.5), 4);
    b.SetFinal(2, Weight::One());
    b.SetFinal(4, Weight::One());
    Fst raw = std::move(b).Build();
    Fst det = Determinize(raw);
    Fst min = Minimize(det);
    std::string diff;
    CHECK(RelationsNear(OracleRelation(raw, kMaxArcs),
                        OracleRelation(min, kMaxArcs), kTol, &diff));
    int oracle_states =
        OracleMinimalStateCount(OraclePairLanguage(raw, kMaxArcs));
    CHECK(min.NumStates() == oracle_states);
    CHECK(min.NumStates() <= det.NumStates());
    // The two final states are suffix-equivalent and must merge: the
    // minimal machine is start -> middle -> shared final.
    CHECK(min.NumStates() == 3);
  }

  TEST_CASE("already-minimal single path is unchanged in size") {
    SymbolTable syms = MakeAlphabet("a", 2);
    Fst chain = Chain(syms, syms, {{1, 1, 1.0}, {2, 2, 2.0}});
    Fst min = Minimize(chain);
    CHECK(min.NumStates() == chain.NumStates());
  }

  TEST_CASE("rejects nondeterministic input") {
    SymbolTable syms = MakeAlphabet("a", 1);
    FstBuilder b(syms, syms);
    StateId s0 = b.AddState(), s1 = b.AddState(), s2 = b.AddState();
    b.SetStart(s0);
    b.AddArc(s0, 1, 1, Weight(1.0), s1);
    b.AddArc(s0, 1, 1, Weight(2.0), s2);
    b.SetFinal(s1, Weight::One());
    b.SetFinal(s2, Weight::One());
    CHECK_THROWS_AS(Minimize(std::move(b).Build()), DataError);
  }

  TEST_CASE("preserves relation and never grows on 1000 random machines") {
    std::mt19937_64 rng(31);
    SymbolTable in = MakeAlphabet("a", 3);
    SymbolTable out = MakeAlphabet("x", 3);
    RandomFstParams params;
    params.max_states = 6;
    for (int trial = 0; trial < 1000; ++trial) {
      Fst det = Determinize(RandomAcyclicFst(rng, params, in, out));
      if (det.Empty()) continue;
      Fst min = Minimize(det);
      std::string diff;
      CHECK_MESSAGE(RelationsNear(OracleRelation(det, kMaxArcs),
                                  OracleRelation(min, kMaxArcs), kTol, &diff),
                    "trial " << trial << ": " << diff);
      CHECK(min.NumStates() <= det.NumStates());
      int oracle_states =
          OracleMinimalStateCount(OraclePairLanguage(det, kMaxArcs));
      CHECK_MESSAGE(min.NumStates() == oracle_states,
                    "trial " << trial << ": got " << min.NumStates()
                             << " states, canonical machine has "
                             << oracle_states);
    }
  }
}

TEST_SUITE("shortest_path") {
  TEST_CASE("min of two branches") {
    SymbolTable syms = MakeAlphabet("a", 2);
    FstBuilder b(syms, syms);
    StateId s0 = b.AddState(), s1 = b.AddState(), s2 = b.AddState();
    b.SetStart(s0);
    b.AddArc(s0, 1, 1, Weight(2.0), s1);
    b.AddArc(s0, 2, 2, Weight(5.0), s2);
    b.SetFinal(s1, Weight::One());
    b.SetFinal(s2, Weight::One());
    Path p = ShortestPath(std::move(b).Build());
    CHECK(p.total_weight.value() == doctest::Approx(2.0).epsilon(kTol));
    CHECK(p.output == std::vector<Label>{1});
  }

  TEST_CASE("single path is returned as-is") {
    SymbolTable syms = MakeAlphabet("a", 2);
    Fst chain = Chain(syms, syms, {{1, 2, 1.5}, {2, 1, 0.25}}, 0.75);
    Path p = ShortestPath(chain);
    CHECK(p.total_weight.value() == doctest::Approx(2.5).epsilon(kTol));
    CHECK(p.input == std::vector<Label>{1, 2});
    CHECK(p.output == std::vector<Label>{2, 1});
    CHECK(p.arcs.size() == 2);
  }

  TEST_CASE("no accepting path is an error") {
    SymbolTable syms = MakeAlphabet("a", 1);
    FstBuilder b(syms, syms);
    b.SetStart(b.AddState());
    CHECK_THROWS_AS(ShortestPath(std::move(b).Build()), DataError);
    CHECK_THROWS_AS(ShortestPath(Fst()), DataError);
  }

  TEST_CASE("ties break on the lexicographically smaller output") {
    SymbolTable syms = MakeAlphabet("a", 3);
    FstBuilder b(syms, syms);
    StateId s0 = b.AddState(), s1 = b.AddState(), s2 = b.AddState();
    b.SetStart(s0);
    b.AddArc(s0, 1, 3, Weight(1.0), s1);
    b.AddArc(s0, 1, 2, Weight(1.0), s2);
    b.SetFinal(s1, Weight::One());
    b.SetFinal(s2, Weight::One());
    Path p = ShortestPath(std::move(b).Build());
    CHECK(p.output == std::vector<Label>{2});
  }

  TEST_CASE("matches enumerated minimum on random machines") {
    std::mt19937_64 rng(37);
    SymbolTable in = MakeAlphabet("a", 3);
    SymbolTable out = MakeAlphabet("x", 3);
    RandomFstParams params;
    params.max_states = 8;
    for (int trial = 0; trial < 500; ++trial) {
      Fst a = RandomAcyclicFst(rng, params, in, out);
      double expected = OracleMinWeight(OracleRelation(a, kMaxArcs));
      if (std::isinf(expected)) {
        CHECK_THROWS_AS(ShortestPath(a), DataError);
        continue;
      }
      Path p = ShortestPath(a);
      CHECK(p.total_weight.value() == doctest::Approx(expected).epsilon(kTol));
    }
  }

  TEST_CASE("cyclic machines with non-negative weights use dijkstra") {
    SymbolTable syms = MakeAlphabet("a", 2);
    FstBuilder b(syms, syms);
    StateId s0 = b.AddState(), s1 = b.AddState();
    b.SetStart(s0);
    b.AddArc(s0, 1, 1, Weight(1.0), s1);
    b.AddArc(s1, 2, 2, Weight(1.0), s0);  // cycle
    b.SetFinal(s1, Weight(0.5));
    Path p = ShortestPath(std::move(b).Build());
    CHECK(p.total_weight.value() == doctest::Approx(1.5).epsilon(kTol));
  }
}

TEST_SUITE("top_sort") {
  TEST_CASE("already sorted chain keeps its ordering") {
    SymbolTable syms = MakeAlphabet("a", 1);
    Fst chain = Chain(syms, syms, {{1, 1, 1.0}});
    Fst sorted = TopSort(chain);
    CHECK(sorted.start() == 0);
    REQUIRE(sorted.ArcsOf(0).size() == 1);
    CHECK(sorted.ArcsOf(0)[0].next_state == 1);
  }

  TEST_CASE("reversed ids get renumbered") {
    SymbolTable syms = MakeAlphabet("a", 1);
    FstBuilder b(syms, syms);
    for (int i = 0; i < 4; ++i) b.AddState();
    b.SetStart(3);
    b.AddArc(3, 1, 1, Weight(1.0), 2);
    b.AddArc(2, 1, 1, Weight(1.0), 1);
    b.AddArc(1, 1, 1, Weight(1.0), 0);
    b.SetFinal(0, Weight::One());
    Fst raw = std::move(b).Build();
    Fst sorted = TopSort(raw);
    CHECK(sorted.start() == 0);
    std::string diff;
    CHECK(RelationsNear(OracleRelation(raw, kMaxArcs),
                        OracleRelation(sorted, kMaxArcs), kTol, &diff));
    for (StateId s = 0; s < sorted.NumStates(); ++s) {
      for (const Arc& arc : sorted.ArcsOf(s)) CHECK(s < arc.next_state);
    }
  }

  TEST_CASE("cycle is rejected") {
    SymbolTable syms = MakeAlphabet("a", 1);
    FstBuilder b(syms, syms);
    StateId s = b.AddState();
    b.SetStart(s);
    b.AddArc(s, 1, 1, Weight::One(), s);
    b.SetFinal(s, Weight::One());
    CHECK_THROWS_AS(TopSort(std::move(b).Build()), DataError);
  }

  TEST_CASE("src < dst and relation preserved on random machines") {
    std::mt19937_64 rng(41);
    SymbolTable in = MakeAlphabet("a", 3);
    SymbolTable out = MakeAlphabet("x", 3);
    RandomFstParams params;
    for (int trial = 0; trial < 300; ++trial) {
      Fst a = RandomAcyclicFst(rng, params, in, out);
      Fst sorted = TopSort(a);
      for (StateId s = 0; s < sorted.NumStates(); ++s) {
        for (const Arc& arc : sorted.ArcsOf(s)) CHECK(s < arc.next_state);
      }
      std::string diff;
      CHECK_MESSAGE(RelationsNear(OracleRelation(a, kMaxArcs),
                                  OracleRelation(sorted, kMaxArcs), 0.0,
                                  &diff),
                    diff);
    }
  }
}

TEST_SUITE("enumerate_relation") {
  TEST_CASE("empty machine has an empty relation") {
    CHECK(EnumerateRelation(Fst(), 8).empty());
  }

  TEST_CASE("single arc") {
    SymbolTable in = MakeAlphabet("a", 1);
    SymbolTable out = MakeAlphabet("x", 1);
    Fst a = Chain(in, out, {{1, 1, 1.5}});
    Relation r = EnumerateRelation(a, 8);
    REQUIRE(r.size() == 1);
    CHECK(r.begin()->first.first == std::vector<Label>{1});
    CHECK(r.begin()->first.second == std::vector<Label>{1});
    CHECK(r.begin()->second == doctest::Approx(1.5).epsilon(kTol));
  }

  TEST_CASE("agrees with the independent walker on random machines") {
    std::mt19937_64 rng(43);
    SymbolTable in = MakeAlphabet("a", 3);
    SymbolTable out = MakeAlphabet("x", 3);
    RandomFstParams params;
    for (int trial = 0; trial < 200; ++trial) {
      Fst a = RandomAcyclicFst(rng, params, in, out);
      std::string diff;
      CHECK_MESSAGE(RelationsNear(EnumerateRelation(a, kMaxArcs),
                                  OracleRelation(a, kMaxArcs), 0.0, &diff),
                    diff);
    }
  }
}

TEST_SUITE("fst_text_io") {
  TEST_CASE("round trip is bit exact") {
    SymbolTable in = MakeAlphabet("a", 3);
    SymbolTable out = MakeAlphabet("x", 3);
    std::mt19937_64 rng(47);
    RandomFstParams params;
    for (int trial = 0; trial < 50; ++trial) {
      Fst a = RandomAcyclicFst(rng, params, in, out);
      // The text format pins the start to the first mentioned state, so a
      // machine whose start has neither arcs nor a final weight is not
      // representable; writers only serialize trimmed machines.
      if (a.ArcsOf(a.start()).empty() && !a.IsFinal(a.start())) continue;
      std::string text = FstToText(a);
      std::istringstream stream(text);
      Fst b = ReadFstText(stream, in, out);
      CHECK(FstToText(b) == text);
      // Weights are printed with 6 decimal places, so the reparsed
      // relation agrees up to that precision only.
      std::string diff;
      CHECK(RelationsNear(OracleRelation(a, kMaxArcs),
                          OracleRelation(b, kMaxArcs), 1e-5, &diff));
    }
  }

  TEST_CASE("format is the AT&T text layout") {
    SymbolTable in = MakeAlphabet("a", 1);
    SymbolTable out = MakeAlphabet("x", 1);
    Fst a = Chain(in, out, {{1, 1, 1.25}}, 0.5);
    CHECK(FstToText(a) == "0\t1\ta1\tx1\t1.250000\n1\t0.500000\n");
  }

  TEST_CASE("unknown symbols are rejected") {
    SymbolTable in = MakeAlphabet("a", 1);
    SymbolTable out = MakeAlphabet("x", 1);
    std::istringstream stream("0\t1\tbogus\tx1\t1.0\n1\t0.0\n");
    CHECK_THROWS_AS(ReadFstText(stream, in, out), DataError);
  }
}
