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

#include "fstbias/fst_algo.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <tuple>
#include <vector>

#include "fstbias/error.h"

namespace fstbias {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<StateId> TopologicalOrder(const Fst& fst, bool* is_dag) {
  const int n = fst.NumStates();
  std::vector<int> indegree(n, 0);
  for (StateId s = 0; s < n; ++s) {
    for (const Arc& a : fst.ArcsOf(s)) ++indegree[a.next_state];
  }
  std::priority_queue<StateId, std::vector<StateId>, std::greater<>> ready;
  for (StateId s = 0; s < n; ++s) {
    if (indegree[s] == 0) ready.push(s);
  }
  std::vector<StateId> order;
  order.reserve(n);
  while (!ready.empty()) {
    StateId s = ready.top();
    ready.pop();
    order.push_back(s);
    for (const Arc& a : fst.ArcsOf(s)) {
      if (--indegree[a.next_state] == 0) ready.push(a.next_state);
    }
  }
  *is_dag = static_cast<int>(order.size()) == n;
  return order;
}

// States reachable from the start.
std::vector<bool> Accessible(const Fst& fst) {
  std::vector<bool> seen(fst.NumStates(), false);
  if (fst.Empty()) return seen;
  std::deque<StateId> queue = {fst.start()};
  seen[fst.start()] = true;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    for (const Arc& a : fst.ArcsOf(s)) {
      if (!seen[a.next_state]) {
        seen[a.next_state] = true;
        queue.push_back(a.next_state);
      }
    }
  }
  return seen;
}

// States from which some final state is reachable.
std::vector<bool> Coaccessible(const Fst& fst) {
  const int n = fst.NumStates();
  std::vector<std::vector<StateId>> rev(n);
  for (StateId s = 0; s < n; ++s) {
    for (const Arc& a : fst.ArcsOf(s)) rev[a.next_state].push_back(s);
  }
  std::vector<bool> seen(n, false);
  std::deque<StateId> queue;
  for (const auto& [s, w] : fst.finals()) {
    (void)w;
    seen[s] = true;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    for (StateId p : rev[s]) {
      if (!seen[p]) {
        seen[p] = true;
        queue.push_back(p);
      }
    }
  }
  return seen;
}

// Keeps only accessible & coaccessible states, renumbered in ascending
// old-id order. Returns the canonical empty machine when nothing is left.
Fst Trim(const Fst& fst) {
  if (fst.Empty()) return fst;
  auto acc = Accessible(fst);
  auto coacc = Coaccessible(fst);
  const int n = fst.NumStates();
  std::vector<StateId> remap(n, kNoStateId);
  FstBuilder builder(fst.isymbols(), fst.osymbols());
  for (StateId s = 0; s < n; ++s) {
    if (acc[s] && coacc[s]) remap[s] = builder.AddState();
  }
  if (remap[fst.start()] == kNoStateId) {
    return std::move(FstBuilder(fst.isymbols(), fst.osymbols())).Build();
  }
  builder.SetStart(remap[fst.start()]);
  for (StateId s = 0; s < n; ++s) {
    if (remap[s] == kNoStateId) continue;
    for (const Arc& a : fst.ArcsOf(s)) {
      if (remap[a.next_state] == kNoStateId) continue;
      builder.AddArc(remap[s], a.ilabel, a.olabel, a.weight,
                     remap[a.next_state]);
    }
    if (fst.IsFinal(s)) builder.SetFinal(remap[s], fst.FinalWeight(s));
  }
  return std::move(builder).Build();
}

}  // namespace

bool IsAcyclic(const Fst& fst) {
  bool is_dag = false;
  TopologicalOrder(fst, &is_dag);
  return is_dag;
}

Fst Compose(const Fst& a, const Fst& b) {
  if (!(a.osymbols() == b.isymbols())) {
    throw DataError(
        "compose: output alphabet of the left machine differs from the "
        "input alphabet of the right machine");
  }
  FstBuilder builder(a.isymbols(), b.osymbols());
  if (a.Empty() || b.Empty()) return std::move(builder).Build();

  // Filter states: 0 = anything, 1 = left-only epsilon moves taken,
  // 2 = right-only epsilon moves taken. Joint epsilon moves only from 0.
  using Triple = std::tuple<StateId, StateId, int>;
  std::map<Triple, StateId> ids;
  std::deque<Triple> queue;
  auto state_of = [&](StateId s1, StateId s2, int f) {
    Triple key{s1, s2, f};
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    StateId id = builder.AddState();
    ids.emplace(key, id);
    queue.push_back(key);
    return id;
  };

  StateId start = state_of(a.start(), b.start(), 0);
  builder.SetStart(start);
  while (!queue.empty()) {
    auto [s1, s2, f] = queue.front();
    queue.pop_front();
    StateId src = ids.at({s1, s2, f});
    if (a.IsFinal(s1) && b.IsFinal(s2)) {
      builder.SetFinal(src, a.FinalWeight(s1).Times(b.FinalWeight(s2)));
    }
    for (const Arc& x : a.ArcsOf(s1)) {
      if (x.olabel == kEpsilon) {
        // Left-only move.
        if (f != 2) {
          builder.AddArc(src, x.ilabel, kEpsilon, x.weight,
                         state_of(x.next_state, s2, 1));
        }
        // Joint epsilon move.
        if (f == 0) {
          for (const Arc& y : b.ArcsOf(s2)) {
            if (y.ilabel != kEpsilon) continue;
            builder.AddArc(src, x.ilabel, y.olabel, x.weight.Times(y.weight),
                           state_of(x.next_state, y.next_state, 0));
          }
        }
      } else {
        for (const Arc& y : b.ArcsOf(s2)) {
          if (y.ilabel != x.olabel) continue;
          builder.AddArc(src, x.ilabel, y.olabel, x.weight.Times(y.weight),
                         state_of(x.next_state, y.next_state, 0));
        }
      }
    }
    // Right-only moves.
    if (f != 1) {
      for (const Arc& y : b.ArcsOf(s2)) {
        if (y.ilabel != kEpsilon) continue;
        builder.AddArc(src, kEpsilon, y.olabel, y.weight,
                       state_of(s1, y.next_state, 2));
      }
    }
  }
  return Trim(std::move(builder).Build());
}

namespace {

// Weighted (0,0)-epsilon closure of each state: state -> min epsilon
// distance to it. The machine must be acyclic.
std::vector<std::map<StateId, double>> EpsilonClosures(const Fst& fst) {
  const int n = fst.NumStates();
  bool is_dag = false;
  auto order = TopologicalOrder(fst, &is_dag);
  std::vector<std::map<StateId, double>> closure(n);
  // Process in reverse topological order so successors are done first.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    StateId s = *it;
    auto& cl = closure[s];
    cl[s] = 0.0;
    for (const Arc& a : fst.ArcsOf(s)) {
      if (a.ilabel != kEpsilon || a.olabel != kEpsilon) continue;
      for (const auto& [t, d] : closure[a.next_state]) {
        double via = a.weight.value() + d;
        auto [pos, inserted] = cl.emplace(t, via);
        if (!inserted && via < pos->second) pos->second = via;
      }
    }
  }
  return closure;
}

}  // namespace

Fst Determinize(const Fst& a) {
  if (a.Empty()) return a;
  if (!IsAcyclic(a)) {
    throw DataError("determinize: cyclic input is unsupported");
  }
  auto closure = EpsilonClosures(a);

  // Effective, epsilon-free view of the input.
  auto eff_final = [&](StateId s) {
    double best = kInf;
    for (const auto& [t, d] : closure[s]) {
      if (a.IsFinal(t)) best = std::min(best, d + a.FinalWeight(t).value());
    }
    return best;
  };

  // Subsets of (state, residual weight), min residual normalized to 0.
  using Subset = std::vector<std::pair<StateId, double>>;
  std::map<Subset, StateId> ids;
  std::deque<Subset> queue;
  FstBuilder builder(a.isymbols(), a.osymbols());
  auto subset_id = [&](Subset subset) {
    auto it = ids.find(subset);
    if (it != ids.end()) return it->second;
    StateId id = builder.AddState();
    ids.emplace(subset, id);
    queue.push_back(std::move(subset));
    return id;
  };

  builder.SetStart(subset_id({{a.start(), 0.0}}));
  while (!queue.empty()) {
    Subset subset = std::move(queue.front());
    queue.pop_front();
    StateId src = ids.at(subset);

    double final_w = kInf;
    // Arc groups keyed by (ilabel, olabel) pair: target -> min weight.
    std::map<std::pair<Label, Label>, std::map<StateId, double>> groups;
    for (const auto& [q, residual] : subset) {
      final_w = std::min(final_w, residual + eff_final(q));
      for (const auto& [t, eps_d] : closure[q]) {
        for (const Arc& arc : a.ArcsOf(t)) {
          if (arc.ilabel == kEpsilon && arc.olabel == kEpsilon) continue;
          double w = residual + eps_d + arc.weight.value();
          auto& targets = groups[{arc.ilabel, arc.olabel}];
          auto [pos, inserted] = targets.emplace(arc.next_state, w);
          if (!inserted && w < pos->second) pos->second = w;
        }
      }
    }
    if (final_w < kInf) builder.SetFinal(src, Weight(final_w));
    for (const auto& [labels, targets] : groups) {
      double arc_w = kInf;
      for (const auto& [t, w] : targets) {
        (void)t;
        arc_w = std::min(arc_w, w);
      }
      Subset next;
      next.reserve(targets.size());
      for (const auto& [t, w] : targets) next.emplace_back(t, w - arc_w);
      builder.AddArc(src, labels.first, labels.second, Weight(arc_w),
                     subset_id(std::move(next)));
    }
  }
  return Trim(std::move(builder).Build());
}

namespace {

void CheckDeterministic(const Fst& fst, const char* op) {
  for (StateId s = 0; s < fst.NumStates(); ++s) {
    std::set<std::pair<Label, Label>> seen;
    for (const Arc& a : fst.ArcsOf(s)) {
      if (a.ilabel == kEpsilon && a.olabel == kEpsilon) {
        throw DataError(std::string(op) +
                        ": input has epsilon arcs; determinize first");
      }
      if (!seen.insert({a.ilabel, a.olabel}).second) {
        throw DataError(std::string(op) +
                        ": input is not deterministic (duplicate label at "
                        "state " +
                        std::to_string(s) + ")");
      }
    }
  }
}

// Resolution for state-signature comparison: coarse enough that float
// summation jitter on mathematically equal pushed weights cannot split a
// class, fine enough that genuinely distinct costs stay apart.
int64_t QuantizeWeight(double w) {
  return static_cast<int64_t>(std::llround(w * 1e7));
}

}  // namespace

Fst Minimize(const Fst& a) {
  if (a.Empty()) return a;
  if (!IsAcyclic(a)) throw DataError("minimize: cyclic input is unsupported");
  CheckDeterministic(a, "minimize");
  Fst fst = Trim(a);
  if (fst.Empty()) return fst;
  const int n = fst.NumStates();

  // Push weights toward the start: d[s] = min cost from s to a final.
  bool is_dag = false;
  auto order = TopologicalOrder(fst, &is_dag);
  std::vector<double> dist(n, kInf);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    StateId s = *it;
    if (fst.IsFinal(s)) dist[s] = fst.FinalWeight(s).value();
    for (const Arc& arc : fst.ArcsOf(s)) {
      dist[s] = std::min(dist[s], arc.weight.value() + dist[arc.next_state]);
    }
  }
  // The start keeps the leftover so total path weights are unchanged.
  auto shift = [&](StateId s) { return s == fst.start() ? 0.0 : dist[s]; };

  // Merge suffix-equivalent states bottom-up (Revuz). Signatures use
  // quantized pushed weights.
  using ArcSig = std::tuple<Label, Label, int64_t, int>;
  using Signature = std::pair<int64_t, std::vector<ArcSig>>;  // final, arcs
  std::map<Signature, int> classes;
  std::vector<int> class_of(n, -1);
  constexpr int64_t kNotFinal = std::numeric_limits<int64_t>::min();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    StateId s = *it;
    Signature sig;
    sig.first = fst.IsFinal(s)
                    ? QuantizeWeight(fst.FinalWeight(s).value() - shift(s))
                    : kNotFinal;
    for (const Arc& arc : fst.ArcsOf(s)) {
      double pushed =
          arc.weight.value() - shift(s) + shift(arc.next_state);
      sig.second.emplace_back(arc.ilabel, arc.olabel, QuantizeWeight(pushed),
                              class_of[arc.next_state]);
    }
    std::sort(sig.second.begin(), sig.second.end());
    auto [pos, inserted] =
        classes.emplace(std::move(sig), static_cast<int>(classes.size()));
    (void)inserted;
    class_of[s] = pos->second;
  }

  // Rebuild one state per class, renumbered by BFS from the start with
  // arcs in sorted label order.
  std::vector<StateId> representative(classes.size(), kNoStateId);
  for (StateId s = 0; s < n; ++s) {
    if (representative[class_of[s]] == kNoStateId) {
      representative[class_of[s]] = s;
    }
  }
  FstBuilder builder(fst.isymbols(), fst.osymbols());
  std::map<int, StateId> new_id;
  std::deque<int> bfs;
  auto id_of = [&](int cls) {
    auto it = new_id.find(cls);
    if (it != new_id.end()) return it->second;
    StateId id = builder.AddState();
    new_id.emplace(cls, id);
    bfs.push_back(cls);
    return id;
  };
  builder.SetStart(id_of(class_of[fst.start()]));
  while (!bfs.empty()) {
    int cls = bfs.front();
    bfs.pop_front();
    StateId rep = representative[cls];
    StateId src = new_id.at(cls);
    std::vector<Arc> arcs = fst.ArcsOf(rep);
    std::sort(arcs.begin(), arcs.end(), [](const Arc& x, const Arc& y) {
      return std::tie(x.ilabel, x.olabel) < std::tie(y.ilabel, y.olabel);
    });
    for (const Arc& arc : arcs) {
      double pushed =
          arc.weight.value() - shift(rep) + shift(arc.next_state);
      builder.AddArc(src, arc.ilabel, arc.olabel, Weight(pushed),
                     id_of(class_of[arc.next_state]));
    }
    if (fst.IsFinal(rep)) {
      builder.SetFinal(src,
                       Weight(fst.FinalWeight(rep).value() - shift(rep)));
    }
  }
  return std::move(builder).Build();
}

namespace {

// Best suffix from a state: minimal weight, ties by lexicographically
// smallest output sequence, then state ids. Memoized over the acyclic
// machine.
struct SuffixChoice {
  double weight = kInf;
  bool stop = false;  // accept here (vs. taking arc_index)
  int arc_index = -1;
  std::vector<Label> output;  // output labels of the whole suffix
  std::vector<StateId> states;  // states visited after this one
};

class SuffixSolver {
 public:
  explicit SuffixSolver(const Fst& fst)
      : fst_(fst), memo_(fst.NumStates()), solved_(fst.NumStates(), false) {}

  const SuffixChoice& Solve(StateId s) {
    SuffixChoice& out = memo_[s];
    if (solved_[s]) return out;
    solved_[s] = true;
    SuffixChoice best;
    if (fst_.IsFinal(s)) {
      best.weight = fst_.FinalWeight(s).value();
      best.stop = true;
    }
    const auto& arcs = fst_.ArcsOf(s);
    for (int i = 0; i < static_cast<int>(arcs.size()); ++i) {
      const Arc& a = arcs[i];
      const SuffixChoice& tail = Solve(a.next_state);
      if (tail.weight == kInf) continue;
      SuffixChoice cand;
      cand.weight = a.weight.value() + tail.weight;
      cand.stop = false;
      cand.arc_index = i;
      if (a.olabel != kEpsilon) cand.output.push_back(a.olabel);
      cand.output.insert(cand.output.end(), tail.output.begin(),
                         tail.output.end());
      cand.states.push_back(a.next_state);
      cand.states.insert(cand.states.end(), tail.states.begin(),
                         tail.states.end());
      if (Better(cand, best)) best = std::move(cand);
    }
    out = std::move(best);
    return out;
  }

 private:
  static bool Better(const SuffixChoice& x, const SuffixChoice& y) {
    if (x.weight != y.weight) return x.weight < y.weight;
    if (x.output != y.output) return x.output < y.output;
    return x.states < y.states;
  }

  const Fst& fst_;
  std::vector<SuffixChoice> memo_;
  std::vector<char> solved_;
};

Path PathFromChoices(const Fst& fst, SuffixSolver& solver) {
  Path path;
  double total = 0.0;
  StateId s = fst.start();
  while (true) {
    const SuffixChoice& choice = solver.Solve(s);
    if (choice.stop) {
      total += fst.FinalWeight(s).value();
      break;
    }
    const Arc& a = fst.ArcsOf(s)[choice.arc_index];
    path.arcs.push_back(a);
    total += a.weight.value();
    if (a.ilabel != kEpsilon) path.input.push_back(a.ilabel);
    if (a.olabel != kEpsilon) path.output.push_back(a.olabel);
    s = a.next_state;
  }
  path.total_weight = Weight(total);
  return path;
}

// Dijkstra fallback for cyclic machines with non-negative weights.
Path DijkstraShortestPath(const Fst& fst) {
  const int n = fst.NumStates();
  for (StateId s = 0; s < n; ++s) {
    for (const Arc& a : fst.ArcsOf(s)) {
      if (a.weight.value() < 0.0) {
        throw DataError(
            "shortest_path: cyclic input requires non-negative weights");
      }
    }
  }
  std::vector<double> dist(n, kInf);
  std::vector<std::pair<StateId, int>> parent(n, {kNoStateId, -1});
  using Item = std::pair<double, StateId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[fst.start()] = 0.0;
  heap.push({0.0, fst.start()});
  while (!heap.empty()) {
    auto [d, s] = heap.top();
    heap.pop();
    if (d > dist[s]) continue;
    const auto& arcs = fst.ArcsOf(s);
    for (int i = 0; i < static_cast<int>(arcs.size()); ++i) {
      const Arc& a = arcs[i];
      double nd = d + a.weight.value();
      if (nd < dist[a.next_state]) {
        dist[a.next_state] = nd;
        parent[a.next_state] = {s, i};
        heap.push({nd, a.next_state});
      }
    }
  }
  StateId best_final = kNoStateId;
  double best = kInf;
  for (const auto& [s, w] : fst.finals()) {
    double total = dist[s] + w.value();
    if (total < best || (total == best && s < best_final)) {
      best = total;
      best_final = s;
    }
  }
  if (best_final == kNoStateId || best == kInf) {
    throw DataError("shortest_path: machine accepts no string");
  }
  std::vector<Arc> rev_arcs;
  for (StateId s = best_final; s != fst.start();) {
    auto [p, idx] = parent[s];
    rev_arcs.push_back(fst.ArcsOf(p)[idx]);
    s = p;
  }
  Path path;
  path.total_weight = Weight(best);
  for (auto it = rev_arcs.rbegin(); it != rev_arcs.rend(); ++it) {
    path.arcs.push_back(*it);
    if (it->ilabel != kEpsilon) path.input.push_back(it->ilabel);
    if (it->olabel != kEpsilon) path.output.push_back(it->olabel);
  }
  return path;
}

}  // namespace

Path ShortestPath(const Fst& a) {
  if (a.Empty()) throw DataError("shortest_path: machine accepts no string");
  if (!IsAcyclic(a)) return DijkstraShortestPath(a);
  SuffixSolver solver(a);
  const SuffixChoice& best = solver.Solve(a.start());
  if (best.weight == kInf) {
    throw DataError("shortest_path: machine accepts no string");
  }
  return PathFromChoices(a, solver);
}

Fst TopSort(const Fst& a) {
  if (a.Empty()) return a;
  bool is_dag = false;
  auto order = TopologicalOrder(a, &is_dag);
  if (!is_dag) throw DataError("top_sort: input has cycles");
  std::vector<StateId> remap(a.NumStates());
  for (int i = 0; i < static_cast<int>(order.size()); ++i) {
    remap[order[i]] = i;
  }
  FstBuilder builder(a.isymbols(), a.osymbols());
  for (int i = 0; i < a.NumStates(); ++i) builder.AddState();
  builder.SetStart(remap[a.start()]);
  for (StateId s = 0; s < a.NumStates(); ++s) {
    for (const Arc& arc : a.ArcsOf(s)) {
      builder.AddArc(remap[s], arc.ilabel, arc.olabel, arc.weight,
                     remap[arc.next_state]);
    }
    if (a.IsFinal(s)) builder.SetFinal(remap[s], a.FinalWeight(s));
  }
  return std::move(builder).Build();
}

Relation EnumerateRelation(const Fst& a, int max_arcs) {
  Relation relation;
  if (a.Empty()) return relation;
  std::vector<Label> input, output;
  // Depth-first walk over all paths of at most max_arcs arcs.
  std::vector<std::tuple<StateId, double, int>> stack;  // state, weight, depth
  struct Frame {
    StateId state;
    double weight;
    int depth;
    size_t in_len, out_len;
    size_t arc_index;
  };
  std::vector<Frame> frames;
  frames.push_back({a.start(), 0.0, 0, 0, 0, 0});
  while (!frames.empty()) {
    Frame& f = frames.back();
    if (f.arc_index == 0 && a.IsFinal(f.state)) {
      double total = f.weight + a.FinalWeight(f.state).value();
      auto key = std::make_pair(input, output);
      auto [pos, inserted] = relation.emplace(std::move(key), total);
      if (!inserted && total < pos->second) pos->second = total;
    }
    const auto& arcs = a.ArcsOf(f.state);
    if (f.depth >= max_arcs || f.arc_index >= arcs.size()) {
      input.resize(f.in_len);
      output.resize(f.out_len);
      frames.pop_back();
      continue;
    }
    const Arc& arc = arcs[f.arc_index++];
    size_t in_len = input.size(), out_len = output.size();
    if (arc.ilabel != kEpsilon) input.push_back(arc.ilabel);
    if (arc.olabel != kEpsilon) output.push_back(arc.olabel);
    frames.push_back({arc.next_state, f.weight + arc.weight.value(),
                      f.depth + 1, in_len, out_len, 0});
  }
  return relation;
}

}  // namespace fstbias
