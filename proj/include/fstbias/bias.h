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
// Contextual bias FST construction: a class's phrase list becomes a
// determinized, minimized transducer from BPE subword sequences to word
// sequences. Phrase costs are the normalized negative log frequencies,
// split evenly over the arcs of each path.

#ifndef FSTBIAS_BIAS_H_
#define FSTBIAS_BIAS_H_

#include <map>
#include <string>
#include <vector>

#include "fstbias/bpe.h"
#include "fstbias/fst.h"

namespace fstbias {

// One tokenization of a phrase: input tokens plus the word emitted at
// each position ("" = epsilon). Mapped alternatives consume different
// subwords but still emit the original words.
struct SubwordPath {
  std::vector<std::string> tokens;
  std::vector<std::string> outputs;

  bool operator==(const SubwordPath&) const = default;
};

struct BiasPhrase {
  std::vector<std::string> words;
  double frequency = 1.0;
  std::vector<SubwordPath> subword_paths;  // [0] is the original form
};

struct BiasClass {
  std::string class_name;
  std::string enter_tag;  // e.g. "@contact#"
  std::string exit_tag;   // e.g. "#contact@"
  std::vector<BiasPhrase> phrases;
  Fst fst;
};

// Cost of phrase i: -log(f_i / sum_j f_j), natural log.
Weight PhraseCost(const std::vector<double>& frequencies, size_t index);

// Even split of a path cost over its arcs.
Weight SplitCost(Weight total, int num_arcs);

// The original tokenization of a phrase, word emitted on the first
// subword of each word.
SubwordPath MakeOriginalPath(const std::vector<std::string>& words,
                             const BpeModel& bpe);

// Adds one alternative path per phrase containing mapped words: the
// mapped word's subwords replace the original's, outputs stay the
// original words. Phrases without mapped words are unchanged.
std::vector<BiasPhrase> AttachMappedAlternatives(
    std::vector<BiasPhrase> phrases,
    const std::map<std::string, std::vector<std::string>>& mapping,
    const BpeModel& bpe);

// The raw union machine T: one linear path per (phrase, subword path),
// path cost split evenly across its arcs. Phrases with empty subword
// paths are tokenized with the model first.
Fst BuildBiasUnion(const std::vector<BiasPhrase>& phrases,
                   const BpeModel& bpe);

// T_c = Min(Det(T)).
Fst BuildBiasFst(const std::vector<BiasPhrase>& phrases, const BpeModel& bpe);

BiasClass CompileBiasClass(const std::string& class_name,
                           const std::string& enter_tag,
                           const std::string& exit_tag,
                           std::vector<BiasPhrase> phrases,
                           const BpeModel& bpe);

// Phrase list file: phrase<TAB>frequency, frequency optional (default 1).
std::vector<BiasPhrase> ReadPhraseList(const std::string& path);

// Class manifest: class_name<TAB>enter_tag<TAB>exit_tag<TAB>phrase_file,
// phrase files resolved relative to the manifest location.
struct ClassManifestEntry {
  std::string class_name;
  std::string enter_tag;
  std::string exit_tag;
  std::string phrase_file;
};
std::vector<ClassManifestEntry> ReadClassManifest(const std::string& path);

}  // namespace fstbias

#endif  // FSTBIAS_BIAS_H_
