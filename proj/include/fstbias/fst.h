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
// Weighted finite-state transducers over the tropical semiring
// (plus = min, times = +, zero = +inf, one = 0). Machines are immutable
// after construction and safe to share across threads; FstBuilder is the
// single-owner mutable staging area.

#ifndef FSTBIAS_FST_H_
#define FSTBIAS_FST_H_

#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace fstbias {

using StateId = int;
using Label = int;

inline constexpr StateId kNoStateId = -1;
inline constexpr Label kEpsilon = 0;

// Tropical weight: a cost (negative log probability). Never NaN; +inf is
// the semiring zero (no path).
class Weight {
 public:
  Weight() : value_(0.0) {}
  explicit Weight(double value);  // throws DataError on NaN

  static Weight Zero() { return Weight(Infinity(), NoCheck{}); }
  static Weight One() { return Weight(0.0, NoCheck{}); }
  static double Infinity() { return std::numeric_limits<double>::infinity(); }

  double value() const { return value_; }
  bool IsZero() const { return value_ == Infinity(); }

  // Semiring plus: min.
  Weight Plus(Weight other) const {
    return Weight(value_ < other.value_ ? value_ : other.value_, NoCheck{});
  }
  // Semiring times: +.
  Weight Times(Weight other) const;

  friend bool operator==(Weight a, Weight b) { return a.value_ == b.value_; }

 private:
  struct NoCheck {};
  Weight(double value, NoCheck) : value_(value) {}
  double value_;
};

// Bijective symbol <-> dense id map; id 0 is always "<eps>".
class SymbolTable {
 public:
  SymbolTable();

  // Returns the existing id or assigns the next one.
  Label AddSymbol(const std::string& symbol);
  // -1 if absent.
  Label Find(const std::string& symbol) const;
  // Throws DataError on out-of-range ids.
  const std::string& Name(Label id) const;
  bool Contains(const std::string& symbol) const {
    return Find(symbol) >= 0;
  }
  int Size() const { return static_cast<int>(names_.size()); }

  bool operator==(const SymbolTable& other) const {
    return names_ == other.names_;
  }

  // Text format: symbol<TAB>id, one per line, "<eps> 0" first.
  void Write(std::ostream& out) const;
  static SymbolTable Read(std::istream& in);
  void WriteFile(const std::string& path) const;
  static SymbolTable ReadFile(const std::string& path);

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Label> ids_;
};

struct Arc {
  Label ilabel = kEpsilon;
  Label olabel = kEpsilon;
  Weight weight;
  StateId next_state = kNoStateId;

  Arc() = default;
  Arc(Label il, Label ol, Weight w, StateId ns)
      : ilabel(il), olabel(ol), weight(w), next_state(ns) {}
};

class FstBuilder;

class Fst {
 public:
  // The canonical empty machine: no states, no start.
  Fst() : start_(kNoStateId) {}

  StateId start() const { return start_; }
  int NumStates() const { return static_cast<int>(arcs_.size()); }
  bool Empty() const { return start_ == kNoStateId; }

  const std::vector<Arc>& ArcsOf(StateId s) const { return arcs_[s]; }
  bool IsFinal(StateId s) const { return finals_.count(s) > 0; }
  // Zero() when the state is not final.
  Weight FinalWeight(StateId s) const;
  const std::map<StateId, Weight>& finals() const { return finals_; }

  const SymbolTable& isymbols() const { return isymbols_; }
  const SymbolTable& osymbols() const { return osymbols_; }

  int NumArcs() const;

 private:
  friend class FstBuilder;
  std::vector<std::vector<Arc>> arcs_;
  StateId start_;
  std::map<StateId, Weight> finals_;
  SymbolTable isymbols_;
  SymbolTable osymbols_;
};

// Mutable staging for an Fst. Build() validates the structural invariants
// (valid start, valid arc targets, labels covered by the symbol tables)
// and hands over an immutable machine.
class FstBuilder {
 public:
  FstBuilder() = default;
  FstBuilder(SymbolTable isymbols, SymbolTable osymbols);

  StateId AddState();
  // Adds states up to and including s.
  void ReserveStates(StateId s);
  void SetStart(StateId s);
  void SetFinal(StateId s, Weight w);
  void AddArc(StateId src, const Arc& arc);
  void AddArc(StateId src, Label ilabel, Label olabel, Weight w, StateId dst);

  SymbolTable& isymbols() { return fst_.isymbols_; }
  SymbolTable& osymbols() { return fst_.osymbols_; }

  int NumStates() const { return fst_.NumStates(); }

  // Throws DataError if invariants do not hold.
  Fst Build() &&;

 private:
  Fst fst_;
};

// A single accepting path. total_weight is the arc-weight product (sum)
// times the terminal final weight; input/output are epsilon-stripped.
struct Path {
  std::vector<Arc> arcs;
  Weight total_weight;
  std::vector<Label> input;
  std::vector<Label> output;
};

// AT&T-style text format. One arc per line
//   src<TAB>dst<TAB>isym<TAB>osym<TAB>weight
// final states as state<TAB>weight, weights with 6 decimal places, and the
// start state's block printed first. Symbols are written as their names;
// reading resolves names against the given tables and rejects unknowns.
void WriteFstText(const Fst& fst, std::ostream& out);
std::string FstToText(const Fst& fst);
Fst ReadFstText(std::istream& in, SymbolTable isymbols, SymbolTable osymbols);
void WriteFstFile(const Fst& fst, const std::string& path);
Fst ReadFstFile(const std::string& path, const SymbolTable& isymbols,
                const SymbolTable& osymbols);

}  // namespace fstbias

#endif  // FSTBIAS_FST_H_
