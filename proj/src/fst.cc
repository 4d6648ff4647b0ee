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

#include "fstbias/fst.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fstbias/error.h"
#include "fstbias/util.h"

namespace fstbias {

Weight::Weight(double value) : value_(value) {
  if (std::isnan(value)) throw DataError("weight is NaN");
}

Weight Weight::Times(Weight other) const {
  if (IsZero() || other.IsZero()) return Zero();
  return Weight(value_ + other.value_);
}

SymbolTable::SymbolTable() { AddSymbol("<eps>"); }

Label SymbolTable::AddSymbol(const std::string& symbol) {
  auto it = ids_.find(symbol);
  if (it != ids_.end()) return it->second;
  Label id = static_cast<Label>(names_.size());
  names_.push_back(symbol);
  ids_.emplace(symbol, id);
  return id;
}

Label SymbolTable::Find(const std::string& symbol) const {
  auto it = ids_.find(symbol);
  return it == ids_.end() ? -1 : it->second;
}

const std::string& SymbolTable::Name(Label id) const {
  if (id < 0 || id >= Size()) {
    throw DataError("symbol id out of range: " + std::to_string(id));
  }
  return names_[id];
}

void SymbolTable::Write(std::ostream& out) const {
  for (Label id = 0; id < Size(); ++id) {
    out << names_[id] << "\t" << id << "\n";
  }
}

SymbolTable SymbolTable::Read(std::istream& in) {
  SymbolTable table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = SplitWords(line);
    if (fields.size() != 2) {
      throw DataError("symbol table line " + std::to_string(lineno) +
                      ": expected symbol<TAB>id");
    }
    Label id;
    try {
      id = std::stoi(fields[1]);
    } catch (const std::exception&) {
      throw DataError("symbol table line " + std::to_string(lineno) +
                      ": bad id \"" + fields[1] + "\"");
    }
    if (id == 0) {
      if (fields[0] != "<eps>") {
        throw DataError("symbol table: id 0 must be <eps>, got \"" +
                        fields[0] + "\"");
      }
      continue;  // seeded by the constructor
    }
    if (id != table.Size()) {
      throw DataError("symbol table: ids must be dense and in order, got " +
                      fields[1] + " at position " +
                      std::to_string(table.Size()));
    }
    if (table.Contains(fields[0])) {
      throw DataError("symbol table: duplicate symbol \"" + fields[0] + "\"");
    }
    table.AddSymbol(fields[0]);
  }
  return table;
}

void SymbolTable::WriteFile(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  Write(out);
}

SymbolTable SymbolTable::ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  return Read(in);
}

Weight Fst::FinalWeight(StateId s) const {
  auto it = finals_.find(s);
  return it == finals_.end() ? Weight::Zero() : it->second;
}

int Fst::NumArcs() const {
  int n = 0;
  for (const auto& state_arcs : arcs_) n += static_cast<int>(state_arcs.size());
  return n;
}

FstBuilder::FstBuilder(SymbolTable isymbols, SymbolTable osymbols) {
  fst_.isymbols_ = std::move(isymbols);
  fst_.osymbols_ = std::move(osymbols);
}

StateId FstBuilder::AddState() {
  fst_.arcs_.emplace_back();
  return static_cast<StateId>(fst_.arcs_.size()) - 1;
}

void FstBuilder::ReserveStates(StateId s) {
  while (fst_.NumStates() <= s) AddState();
}

void FstBuilder::SetStart(StateId s) { fst_.start_ = s; }

// Weight::Zero marks "not final"; a free exit is Weight::One (cost 0).
void FstBuilder::SetFinal(StateId s, Weight w) {
  if (w.IsZero()) {
    fst_.finals_.erase(s);
  } else {
    fst_.finals_[s] = w;
  }
}

void FstBuilder::AddArc(StateId src, const Arc& arc) {
  if (src < 0 || src >= fst_.NumStates()) {
    throw DataError("AddArc: bad source state " + std::to_string(src));
  }
  fst_.arcs_[src].push_back(arc);
}

void FstBuilder::AddArc(StateId src, Label ilabel, Label olabel, Weight w,
                        StateId dst) {
  AddArc(src, Arc(ilabel, olabel, w, dst));
}

Fst FstBuilder::Build() && {
  const int n = fst_.NumStates();
  if (fst_.start_ == kNoStateId) {
    if (n != 0 || !fst_.finals_.empty()) {
      throw DataError("Fst: machine has states but no start");
    }
    return std::move(fst_);
  }
  if (fst_.start_ < 0 || fst_.start_ >= n) {
    throw DataError("Fst: start state out of range");
  }
  for (StateId s = 0; s < n; ++s) {
    for (const Arc& a : fst_.arcs_[s]) {
      if (a.next_state < 0 || a.next_state >= n) {
        throw DataError("Fst: arc from state " + std::to_string(s) +
                        " targets invalid state " +
                        std::to_string(a.next_state));
      }
      if (a.ilabel < 0 || a.ilabel >= fst_.isymbols_.Size()) {
        throw DataError("Fst: input label " + std::to_string(a.ilabel) +
                        " not in symbol table");
      }
      if (a.olabel < 0 || a.olabel >= fst_.osymbols_.Size()) {
        throw DataError("Fst: output label " + std::to_string(a.olabel) +
                        " not in symbol table");
      }
    }
  }
  for (const auto& [s, w] : fst_.finals_) {
    if (s < 0 || s >= n) throw DataError("Fst: final state out of range");
    (void)w;
  }
  return std::move(fst_);
}

namespace {

std::string FormatWeight(double w) {
  if (w == 0.0) w = 0.0;  // normalize -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", w);
  return buf;
}

}  // namespace

void WriteFstText(const Fst& fst, std::ostream& out) {
  if (fst.Empty()) return;
  auto print_state = [&](StateId s) {
    for (const Arc& a : fst.ArcsOf(s)) {
      out << s << "\t" << a.next_state << "\t" << fst.isymbols().Name(a.ilabel)
          << "\t" << fst.osymbols().Name(a.olabel) << "\t"
          << FormatWeight(a.weight.value()) << "\n";
    }
    if (fst.IsFinal(s)) {
      out << s << "\t" << FormatWeight(fst.FinalWeight(s).value()) << "\n";
    }
  };
  print_state(fst.start());
  for (StateId s = 0; s < fst.NumStates(); ++s) {
    if (s != fst.start()) print_state(s);
  }
}

std::string FstToText(const Fst& fst) {
  std::ostringstream out;
  WriteFstText(fst, out);
  return out.str();
}

Fst ReadFstText(std::istream& in, SymbolTable isymbols, SymbolTable osymbols) {
  FstBuilder builder(std::move(isymbols), std::move(osymbols));
  bool saw_state = false;
  std::string line;
  int lineno = 0;
  auto resolve = [&](const SymbolTable& table, const std::string& name,
                     const char* side) {
    Label id = table.Find(name);
    if (id < 0) {
      throw DataError("fst text line " + std::to_string(lineno) + ": " +
                      side + " symbol \"" + name + "\" not in table");
    }
    return id;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = SplitFields(line, '\t');
    try {
      if (fields.size() == 2) {
        StateId s = std::stoi(fields[0]);
        double w = std::stod(fields[1]);
        builder.ReserveStates(s);
        builder.SetFinal(s, Weight(w));
        if (!saw_state) {
          builder.SetStart(s);
          saw_state = true;
        }
      } else if (fields.size() == 5) {
        StateId src = std::stoi(fields[0]);
        StateId dst = std::stoi(fields[1]);
        double w = std::stod(fields[4]);
        builder.ReserveStates(src > dst ? src : dst);
        builder.AddArc(src, resolve(builder.isymbols(), fields[2], "input"),
                       resolve(builder.osymbols(), fields[3], "output"),
                       Weight(w), dst);
        if (!saw_state) {
          builder.SetStart(src);
          saw_state = true;
        }
      } else {
        throw DataError("expected 2 or 5 tab-separated fields");
      }
    } catch (const std::invalid_argument&) {
      throw DataError("fst text line " + std::to_string(lineno) +
                      ": bad number");
    } catch (const std::out_of_range&) {
      throw DataError("fst text line " + std::to_string(lineno) +
                      ": number out of range");
    }
  }
  return std::move(builder).Build();
}

void WriteFstFile(const Fst& fst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  WriteFstText(fst, out);
}

Fst ReadFstFile(const std::string& path, const SymbolTable& isymbols,
                const SymbolTable& osymbols) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  return ReadFstText(in, isymbols, osymbols);
}

}  // namespace fstbias
