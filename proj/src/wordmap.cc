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

#include "fstbias/wordmap.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "fstbias/error.h"
#include "fstbias/fst_algo.h"
#include "fstbias/util.h"

namespace fstbias {

namespace {

std::string Lowercase(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

const std::vector<Pronunciation>* Lexicon::Find(
    const std::string& word) const {
  auto it = entries.find(Lowercase(word));
  return it == entries.end() ? nullptr : &it->second;
}

double UnigramModel::LogProb(const std::string& word) const {
  auto it = counts.find(word);
  if (it == counts.end() || total <= 0) {
    throw DataError("unigram: unknown word \"" + word + "\"");
  }
  return std::log(static_cast<double>(it->second)) -
         std::log(static_cast<double>(total));
}

Pronunciation LetterRules::Apply(const std::string& word) const {
  std::string w = Lowercase(word);
  Pronunciation phones;
  size_t i = 0;
  while (i < w.size()) {
    const std::pair<std::string, Pronunciation>* best = nullptr;
    for (const auto& rule : rules) {
      if (w.compare(i, rule.first.size(), rule.first) != 0) continue;
      if (best == nullptr || rule.first.size() > best->first.size()) {
        best = &rule;
      }
    }
    if (best == nullptr) return {};  // uncovered grapheme
    phones.insert(phones.end(), best->second.begin(), best->second.end());
    i += best->first.size();
  }
  return phones;
}

Fst BuildMappingTransducer(const Lexicon& lexicon, const UnigramModel& unigram,
                           double word_penalty) {
  // Alphabets: phonemes of the unigram words' pronunciations; the
  // unigram's words.
  SymbolTable phonemes;
  SymbolTable words;
  std::set<std::string> phone_set;
  for (const auto& [word, count] : unigram.counts) {
    (void)count;
    const auto* prons = lexicon.Find(word);
    if (prons == nullptr) {
      throw DataError("mapping transducer: unigram word \"" + word +
                      "\" is missing from the lexicon");
    }
    for (const auto& pron : *prons) {
      phone_set.insert(pron.begin(), pron.end());
    }
  }
  for (const auto& p : phone_set) phonemes.AddSymbol(p);
  for (const auto& [word, count] : unigram.counts) {
    (void)count;
    words.AddSymbol(word);
  }

  // L: closure of per-word phoneme paths, word on the first arc.
  FstBuilder lbuilder(phonemes, words);
  StateId loop = lbuilder.AddState();
  lbuilder.SetStart(loop);
  lbuilder.SetFinal(loop, Weight::One());
  for (const auto& [word, count] : unigram.counts) {
    (void)count;
    Label wlabel = lbuilder.osymbols().Find(word);
    std::set<Pronunciation> seen;
    for (const auto& pron : *lexicon.Find(word)) {
      if (pron.empty() || !seen.insert(pron).second) continue;
      StateId s = loop;
      for (size_t i = 0; i < pron.size(); ++i) {
        Label ph = lbuilder.isymbols().Find(pron[i]);
        StateId t = (i + 1 == pron.size()) ? loop : lbuilder.AddState();
        lbuilder.AddArc(s, ph, i == 0 ? wlabel : kEpsilon, Weight::One(), t);
        s = t;
      }
    }
  }
  Fst l = std::move(lbuilder).Build();

  // G: single-state unigram loop.
  FstBuilder gbuilder(words, words);
  StateId g0 = gbuilder.AddState();
  gbuilder.SetStart(g0);
  gbuilder.SetFinal(g0, Weight::One());
  for (const auto& [word, count] : unigram.counts) {
    (void)count;
    Label wlabel = gbuilder.isymbols().Find(word);
    gbuilder.AddArc(g0, wlabel, wlabel,
                    Weight(-unigram.LogProb(word) + word_penalty), g0);
  }
  Fst g = std::move(gbuilder).Build();

  return Compose(l, g);
}

Fst PronToFst(const std::vector<Pronunciation>& prons,
              const SymbolTable& phonemes) {
  if (prons.empty()) {
    throw DataError("pronunciation fst: empty pronunciation list");
  }
  std::set<Pronunciation> unique(prons.begin(), prons.end());
  FstBuilder builder(phonemes, phonemes);
  StateId start = builder.AddState();
  builder.SetStart(start);
  for (const auto& pron : unique) {
    if (pron.empty()) {
      throw DataError("pronunciation fst: empty phoneme sequence");
    }
    StateId s = start;
    for (const auto& phone : pron) {
      Label id = builder.isymbols().Find(phone);
      if (id < 0) {
        throw DataError("pronunciation fst: phoneme \"" + phone +
                        "\" not in the phoneme inventory");
      }
      StateId t = builder.AddState();
      builder.AddArc(s, id, id, Weight::One(), t);
      s = t;
    }
    builder.SetFinal(s, Weight::One());
  }
  return std::move(builder).Build();
}

std::vector<std::string> MapPronunciations(
    const std::vector<Pronunciation>& prons, const Fst& mapping_transducer,
    const std::string& word_for_errors) {
  const SymbolTable& phonemes = mapping_transducer.isymbols();
  // A pronunciation using a phoneme outside the transducer's inventory
  // cannot match any path.
  std::vector<Pronunciation> usable;
  for (const auto& pron : prons) {
    bool covered = !pron.empty();
    for (const auto& phone : pron) {
      if (phonemes.Find(phone) < 0) {
        covered = false;
        break;
      }
    }
    if (covered) usable.push_back(pron);
  }
  if (usable.empty()) throw NoPronunciationMatch(word_for_errors);

  Fst pw = PronToFst(usable, phonemes);
  Fst matched = Compose(pw, mapping_transducer);
  Path best;
  try {
    best = ShortestPath(matched);
  } catch (const DataError&) {
    throw NoPronunciationMatch(word_for_errors);
  }
  // Rebuild the path as a linear machine and top-sort it, then read the
  // words off in state order.
  FstBuilder builder(matched.isymbols(), matched.osymbols());
  StateId s = builder.AddState();
  builder.SetStart(s);
  for (const Arc& arc : best.arcs) {
    StateId t = builder.AddState();
    builder.AddArc(s, arc.ilabel, arc.olabel, arc.weight, t);
    s = t;
  }
  builder.SetFinal(s, Weight::One());
  Fst sorted = TopSort(std::move(builder).Build());
  std::vector<std::string> words;
  StateId cur = sorted.start();
  while (!sorted.ArcsOf(cur).empty()) {
    const Arc& arc = sorted.ArcsOf(cur)[0];
    if (arc.olabel != kEpsilon) {
      words.push_back(sorted.osymbols().Name(arc.olabel));
    }
    cur = arc.next_state;
  }
  return words;
}

std::vector<Pronunciation> PronunciationsFor(const std::string& word,
                                             const Lexicon& lexicon,
                                             const LetterRules& rules) {
  if (const auto* prons = lexicon.Find(word)) return *prons;
  Pronunciation fallback = rules.Apply(word);
  if (fallback.empty()) return {};
  return {fallback};
}

std::vector<std::string> MapWord(const std::string& word,
                                 const Lexicon& lexicon,
                                 const LetterRules& rules,
                                 const Fst& mapping_transducer) {
  auto prons = PronunciationsFor(word, lexicon, rules);
  if (prons.empty()) throw NoPronunciationMatch(word);
  return MapPronunciations(prons, mapping_transducer, word);
}

std::vector<std::string> MapPhrase(const std::vector<std::string>& words,
                                   const Lexicon& lexicon,
                                   const LetterRules& rules,
                                   const Fst& mapping_transducer) {
  if (words.empty()) throw DataError("map phrase: empty phrase");
  // Concatenate pronunciations across words, all variant combinations.
  std::vector<Pronunciation> combined = {{}};
  for (const auto& word : words) {
    auto prons = PronunciationsFor(word, lexicon, rules);
    if (prons.empty()) throw NoPronunciationMatch(JoinWords(words));
    std::vector<Pronunciation> next;
    for (const auto& prefix : combined) {
      for (const auto& pron : prons) {
        Pronunciation joined = prefix;
        joined.insert(joined.end(), pron.begin(), pron.end());
        next.push_back(std::move(joined));
      }
    }
    combined = std::move(next);
  }
  return MapPronunciations(combined, mapping_transducer, JoinWords(words));
}

std::map<std::string, std::vector<std::string>> BuildWordMapping(
    const std::vector<std::string>& words, const Lexicon& lexicon,
    const LetterRules& rules, const Fst& mapping_transducer) {
  std::map<std::string, std::vector<std::string>> mapping;
  std::set<std::string> distinct(words.begin(), words.end());
  for (const auto& word : distinct) {
    std::vector<std::string> mapped;
    try {
      mapped = MapWord(word, lexicon, rules, mapping_transducer);
    } catch (const NoPronunciationMatch&) {
      continue;  // keep the original form only
    }
    if (mapped.empty()) continue;
    if (mapped.size() == 1 && mapped[0] == Lowercase(word)) continue;
    mapping[word] = std::move(mapped);
  }
  return mapping;
}

Lexicon ReadLexicon(const std::string& path) {
  Lexicon lexicon;
  int lineno = 0;
  for (const auto& line : ReadLines(path)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto fields = SplitFields(line, '\t');
    if (fields.size() < 2) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": expected word<TAB>phonemes");
    }
    Pronunciation pron = SplitWords(fields[1]);
    if (pron.empty()) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": empty pronunciation");
    }
    lexicon.entries[Lowercase(fields[0])].push_back(std::move(pron));
  }
  return lexicon;
}

UnigramModel ReadUnigram(const std::string& path) {
  UnigramModel model;
  int lineno = 0;
  for (const auto& line : ReadLines(path)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto fields = SplitFields(line, '\t');
    long count = 0;
    if (fields.size() >= 2) {
      try {
        count = std::stol(fields[1]);
      } catch (const std::exception&) {
        count = 0;
      }
    }
    if (fields.size() < 2 || count <= 0) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": expected word<TAB>positive count");
    }
    model.counts[Lowercase(fields[0])] += count;
    model.total += count;
  }
  return model;
}

LetterRules ReadLetterRules(const std::string& path) {
  LetterRules rules;
  int lineno = 0;
  for (const auto& line : ReadLines(path)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto fields = SplitFields(line, '\t');
    if (fields.size() < 2) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": expected grapheme<TAB>phonemes");
    }
    rules.rules.emplace_back(Lowercase(fields[0]), SplitWords(fields[1]));
  }
  return rules;
}

void WriteMappingFile(
    const std::map<std::string, std::vector<std::string>>& mapping,
    const std::string& path) {
  std::vector<std::string> lines;
  lines.reserve(mapping.size());
  for (const auto& [word, mapped] : mapping) {
    lines.push_back(word + "\t" + JoinWords(mapped));
  }
  WriteLines(lines, path);
}

std::map<std::string, std::vector<std::string>> ReadMappingFile(
    const std::string& path) {
  std::map<std::string, std::vector<std::string>> mapping;
  for (const auto& line : ReadLines(path)) {
    if (line.empty()) continue;
    auto fields = SplitFields(line, '\t');
    if (fields.size() < 2) {
      throw DataError(path + ": expected original<TAB>mapped sequence");
    }
    mapping[fields[0]] = SplitWords(fields[1]);
  }
  return mapping;
}

}  // namespace fstbias
