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

#ifndef FSTBIAS_UTIL_H_
#define FSTBIAS_UTIL_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fstbias {

// Whitespace tokenization (any run of blanks/tabs).
std::vector<std::string> SplitWords(const std::string& line);

// Split on a single delimiter, keeping empty fields.
std::vector<std::string> SplitFields(const std::string& line, char delim);

std::string JoinWords(const std::vector<std::string>& words,
                      const std::string& sep = " ");

// Class-tag token shapes: enter "@name#", exit "#name@".
bool IsEnterTag(const std::string& token);
bool IsExitTag(const std::string& token);
bool IsClassTag(const std::string& token);
// Class name inside an enter/exit tag ("" if not a tag).
std::string TagClassName(const std::string& token);

// Removes class tags from a token sequence.
std::vector<std::string> StripTags(const std::vector<std::string>& tokens);

// One utterance per line: utt_id<TAB>text.
struct CorpusLine {
  std::string utt_id;
  std::string text;
};
std::vector<CorpusLine> ReadCorpus(const std::string& path);
void WriteCorpus(const std::vector<CorpusLine>& corpus,
                 const std::string& path);

std::vector<std::string> ReadLines(const std::string& path);
void WriteLines(const std::vector<std::string>& lines,
                const std::string& path);

// splitmix64; used for seeded deterministic perturbations.
uint64_t HashMix(uint64_t x);
uint64_t HashCombine(uint64_t seed, uint64_t value);
uint64_t HashString(const std::string& s);

}  // namespace fstbias

#endif  // FSTBIAS_UTIL_H_
