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
// Rare-word mapping through pronunciation: the lexicon closure composed
// with a unigram acceptor gives the phoneme-to-word-sequence transducer;
// a word maps to the cheapest word sequence sharing one of its
// pronunciations.

#ifndef FSTBIAS_WORDMAP_H_
#define FSTBIAS_WORDMAP_H_

#include <map>
#include <string>
#include <vector>

#include "fstbias/fst.h"

namespace fstbias {

using Pronunciation = std::vector<std::string>;  // phoneme sequence

struct Lexicon {
  // word -> pronunciation variants. Words are stored lowercased.
  std::map<std::string, std::vector<Pronunciation>> entries;

  const std::vector<Pronunciation>* Find(const std::string& word) const;
};

struct UnigramModel {
  std::map<std::string, long> counts;  // all positive
  long total = 0;

  double LogProb(const std::string& word) const;
};

// Longest-match grapheme-to-phoneme fallback rules for words missing
// from the lexicon.
struct LetterRules {
  // grapheme -> phoneme sequence, tried longest grapheme first.
  std::vector<std::pair<std::string, Pronunciation>> rules;

  // Empty when some part of the word has no rule.
  Pronunciation Apply(const std::string& word) const;
};

// D = L compose G. L is the closure of per-word phoneme paths (weight 0,
// word emitted on the first phoneme); G is a single-state unigram loop
// with arc weight -log p(w) + word_penalty. Every unigram word must be
// in the lexicon.
Fst BuildMappingTransducer(const Lexicon& lexicon, const UnigramModel& unigram,
                           double word_penalty = 0.0);

// Acceptor over the union of the pronunciations, weight 0 each;
// duplicates collapse. The table must cover the phonemes actually used
// by the mapping transducer for composition to succeed.
Fst PronToFst(const std::vector<Pronunciation>& prons,
              const SymbolTable& phonemes);

// The cheapest word sequence whose concatenated pronunciation is one of
// prons: output labels of TopSort(ShortestPath(P_W compose D)). Throws
// NoPronunciationMatch when no decomposition exists.
std::vector<std::string> MapPronunciations(
    const std::vector<Pronunciation>& prons, const Fst& mapping_transducer,
    const std::string& word_for_errors);

// Pronunciations for a word: lexicon variants when present, otherwise the
// letter-rule fallback (possibly empty).
std::vector<Pronunciation> PronunciationsFor(const std::string& word,
                                             const Lexicon& lexicon,
                                             const LetterRules& rules);

std::vector<std::string> MapWord(const std::string& word,
                                 const Lexicon& lexicon,
                                 const LetterRules& rules,
                                 const Fst& mapping_transducer);

// Whole-phrase mapping: the words' pronunciations are concatenated
// (every variant combination) before matching.
std::vector<std::string> MapPhrase(const std::vector<std::string>& words,
                                   const Lexicon& lexicon,
                                   const LetterRules& rules,
                                   const Fst& mapping_transducer);

// word -> mapped word sequence for every distinct input word that maps to
// something other than itself; words without pronunciations or matches
// are kept out (callers fall back to the original form).
std::map<std::string, std::vector<std::string>> BuildWordMapping(
    const std::vector<std::string>& words, const Lexicon& lexicon,
    const LetterRules& rules, const Fst& mapping_transducer);

// Lexicon file: word<TAB>phoneme phoneme ... (repeat lines for variants).
Lexicon ReadLexicon(const std::string& path);
// Unigram file: word<TAB>count.
UnigramModel ReadUnigram(const std::string& path);
// Rules file: grapheme<TAB>phoneme sequence.
LetterRules ReadLetterRules(const std::string& path);
// Mapping file: original<TAB>mapped sequence.
void WriteMappingFile(
    const std::map<std::string, std::vector<std::string>>& mapping,
    const std::string& path);
std::map<std::string, std::vector<std::string>> ReadMappingFile(
    const std::string& path);

}  // namespace fstbias

#endif  // FSTBIAS_WORDMAP_H_
