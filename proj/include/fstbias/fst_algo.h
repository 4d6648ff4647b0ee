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
//
// The transducer algebra. All operations are pure: inputs are never
// modified.

#ifndef FSTBIAS_FST_ALGO_H_
#define FSTBIAS_FST_ALGO_H_

#include <map>
#include <utility>
#include <vector>

#include "fstbias/fst.h"

namespace fstbias {

// The weighted relation of a machine restricted to paths of at most
// max_arcs arcs: (input labels, output labels) -> min path weight.
// Epsilons are stripped from the label sequences. This is the brute-force
// oracle substrate used throughout the tests.
using Relation =
    std::map<std::pair<std::vector<Label>, std::vector<Label>>, double>;

bool IsAcyclic(const Fst& fst);

// Composition a . b with the standard three-state epsilon-matching filter,
// so interleavings of one-sided epsilon moves are not duplicated.
// Requires a.osymbols == b.isymbols (alphabet error otherwise).
// Result has isymbols = a.isymbols, osymbols = b.osymbols and is trimmed
// to accessible/coaccessible states.
Fst Compose(const Fst& a, const Fst& b);

// Weighted determinization of an acyclic machine. (ilabel, olabel) pairs
// are treated as composite acceptor labels; true-epsilon (0,0) arcs are
// removed by weighted closure first, then subset construction with
// residual weights runs over the pair alphabet. The result has at most
// one outgoing arc per (ilabel, olabel) pair per state, no (0,0) arcs,
// and the same weighted relation with per-string weight equal to the min
// over the input's accepting paths. Cyclic input is rejected.
Fst Determinize(const Fst& a);

// Minimization of a deterministic acyclic machine: trim, push weights
// toward the start, then merge suffix-equivalent states (Revuz). The
// weighted relation is unchanged and the state count never increases.
// Rejects input with duplicate (ilabel, olabel) arcs per state or (0,0)
// arcs.
Fst Minimize(const Fst& a);

// Minimum-weight accepting path. Ties are broken by the lexicographically
// smallest output-label sequence, then by state ids. Requires an acyclic
// machine or non-negative weights; throws DataError when no accepting
// path exists.
Path ShortestPath(const Fst& a);

// Renumbers states so every arc satisfies src < dst. Deterministic
// (Kahn's algorithm, smallest old id first). Rejects cyclic input.
Fst TopSort(const Fst& a);

Relation EnumerateRelation(const Fst& a, int max_arcs);

}  // namespace fstbias

#endif  // FSTBIAS_FST_ALGO_H_
