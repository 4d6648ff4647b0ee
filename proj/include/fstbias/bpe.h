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
// Byte-pair-encoding subword segmentation. Class tags are kept out of
// subword processing entirely: they pass through as atomic tokens.
//
// Convention: merges are learned over raw character sequences; at apply
// time the word-final subword carries the "</w>" marker, which makes
// detokenization unambiguous. The vocabulary stores both the plain and
// the word-final-marked form of every symbol.

#ifndef FSTBIAS_BPE_H_
#define FSTBIAS_BPE_H_

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace fstbias {

inline constexpr const char* kWordBoundaryMarker = "</w>";

struct BpeModel {
  // In application order.
  std::vector<std::pair<std::string, std::string>> merges;
  std::set<std::string> vocab;
  std::set<std::string> reserved;  // class tags, atomic
  std::string word_boundary_marker = kWordBoundaryMarker;

  bool IsReserved(const std::string& token) const;
};

// Iteratively merges the most frequent adjacent symbol pair (ties broken
// lexicographically on the pair) until the vocabulary reaches target_vocab
// or no pair occurs at least twice.
BpeModel BpeLearn(const std::map<std::string, long>& word_frequencies,
                  int target_vocab,
                  const std::vector<std::string>& reserved_tags);

// Splits each word into subwords; reserved/class-tag tokens pass through
// unchanged. Unknown characters fall back to single-character tokens.
std::vector<std::string> BpeApply(const BpeModel& model,
                                  const std::vector<std::string>& words);
std::vector<std::string> BpeApplyToWord(const BpeModel& model,
                                        const std::string& word);

// Inverse of BpeApply on well-formed token sequences; throws DataError on
// malformed boundary marking.
std::vector<std::string> Detokenize(const BpeModel& model,
                                    const std::vector<std::string>& tokens);

// Merges file: left<SPACE>right per line, in application order.
// Vocab file: one token per line. Reserved file: one tag per line.
void SaveBpeModel(const BpeModel& model, const std::string& merges_path,
                  const std::string& vocab_path);
BpeModel LoadBpeModel(const std::string& merges_path,
                      const std::string& vocab_path,
                      const std::string& reserved_path);  // "" = none

}  // namespace fstbias

#endif  // FSTBIAS_BPE_H_
