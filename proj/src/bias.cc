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

#include "fstbias/bias.h"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "fstbias/error.h"
#include "fstbias/fst_algo.h"
#include "fstbias/util.h"

namespace fstbias {

Weight PhraseCost(const std::vector<double>& frequencies, size_t index) {
  if (index >= frequencies.size()) {
    throw DataError("phrase cost: index out of range");
  }
  double total = 0.0;
  for (double f : frequencies) {
    if (!(f > 0.0)) {
      throw DataError("phrase cost: frequencies must be positive");
    }
    total += f;
  }
  return Weight(std::log(total) - std::log(frequencies[index]));
}

Weight SplitCost(Weight total, int num_arcs) {
  if (num_arcs < 1) throw DataError("split cost: a path needs arcs");
  return Weight(total.value() / num_arcs);
}

SubwordPath MakeOriginalPath(const std::vector<std::string>& words,
                             const BpeModel& bpe) {
  SubwordPath path;
  for (const auto& word : words) {
    auto tokens = BpeApplyToWord(bpe, word);
    for (size_t i = 0; i < tokens.size(); ++i) {
      path.tokens.push_back(tokens[i]);
      path.outputs.push_back(i == 0 ? word : "");
    }
  }
  return path;
}

namespace {

std::string PhraseName(const BiasPhrase& phrase) {
  return JoinWords(phrase.words);
}

void ValidatePhrase(const BiasPhrase& phrase) {
  if (phrase.words.empty()) {
    throw DataError("bias build: empty phrase");
  }
  for (const auto& word : phrase.words) {
    if (word.empty() || IsClassTag(word)) {
      throw DataError("bias build: phrase \"" + PhraseName(phrase) +
                      "\" is not tokenizable (word \"" + word + "\")");
    }
  }
  if (!(phrase.frequency > 0.0)) {
    throw DataError("bias build: phrase \"" + PhraseName(phrase) +
                    "\" has non-positive frequency");
  }
}

}  // namespace

std::vector<BiasPhrase> AttachMappedAlternatives(
    std::vector<BiasPhrase> phrases,
    const std::map<std::string, std::vector<std::string>>& mapping,
    const BpeModel& bpe) {
  for (auto& phrase : phrases) {
    if (phrase.subword_paths.empty()) {
      phrase.subword_paths.push_back(MakeOriginalPath(phrase.words, bpe));
    }
    bool any_mapped = false;
    SubwordPath alt;
    for (const auto& word : phrase.words) {
      auto it = mapping.find(word);
      const std::vector<std::string>* realization = nullptr;
      std::vector<std::string> self{word};
      if (it != mapping.end() && !it->second.empty() &&
          it->second != self) {
        realization = &it->second;
        any_mapped = true;
      } else {
        realization = &self;
      }
      bool first_of_word = true;
      for (const auto& piece : *realization) {
        for (const auto& token : BpeApplyToWord(bpe, piece)) {
          alt.tokens.push_back(token);
          alt.outputs.push_back(first_of_word ? word : "");
          first_of_word = false;
        }
      }
    }
    if (!any_mapped) continue;
    if (std::find(phrase.subword_paths.begin(), phrase.subword_paths.end(),
                  alt) == phrase.subword_paths.end()) {
      phrase.subword_paths.push_back(std::move(alt));
    }
  }
  return phrases;
}

Fst BuildBiasUnion(const std::vector<BiasPhrase>& phrases,
                   const BpeModel& bpe) {
  if (phrases.empty()) throw DataError("bias build: empty phrase list");
  std::vector<double> frequencies;
  frequencies.reserve(phrases.size());
  for (const auto& phrase : phrases) {
    ValidatePhrase(phrase);
    frequencies.push_back(phrase.frequency);
  }

  FstBuilder builder;
  StateId start = builder.AddState();
  builder.SetStart(start);
  for (size_t i = 0; i < phrases.size(); ++i) {
    const BiasPhrase& phrase = phrases[i];
    std::vector<SubwordPath> paths = phrase.subword_paths;
    if (paths.empty()) paths.push_back(MakeOriginalPath(phrase.words, bpe));
    Weight cost = PhraseCost(frequencies, i);
    for (const SubwordPath& path : paths) {
      if (path.tokens.empty()) {
        throw DataError("bias build: phrase \"" + PhraseName(phrase) +
                        "\" has an empty subword path");
      }
      Weight arc_weight = SplitCost(cost, static_cast<int>(path.tokens.size()));
      StateId s = start;
      for (size_t k = 0; k < path.tokens.size(); ++k) {
        Label il = builder.isymbols().AddSymbol(path.tokens[k]);
        Label ol = path.outputs[k].empty()
                       ? kEpsilon
                       : builder.osymbols().AddSymbol(path.outputs[k]);
        StateId t = builder.AddState();
        builder.AddArc(s, il, ol, arc_weight, t);
        s = t;
      }
      builder.SetFinal(s, Weight::One());
    }
  }
  return std::move(builder).Build();
}

Fst BuildBiasFst(const std::vector<BiasPhrase>& phrases,
                 const BpeModel& bpe) {
  return Minimize(Determinize(BuildBiasUnion(phrases, bpe)));
}

BiasClass CompileBiasClass(const std::string& class_name,
                           const std::string& enter_tag,
                           const std::string& exit_tag,
                           std::vector<BiasPhrase> phrases,
                           const BpeModel& bpe) {
  if (!IsEnterTag(enter_tag)) {
    throw ConfigError("class " + class_name + ": enter tag \"" + enter_tag +
                      "\" must look like @name#");
  }
  if (!IsExitTag(exit_tag)) {
    throw ConfigError("class " + class_name + ": exit tag \"" + exit_tag +
                      "\" must look like #name@");
  }
  BiasClass cls;
  cls.class_name = class_name;
  cls.enter_tag = enter_tag;
  cls.exit_tag = exit_tag;
  cls.fst = BuildBiasFst(phrases, bpe);
  cls.phrases = std::move(phrases);
  return cls;
}

std::vector<BiasPhrase> ReadPhraseList(const std::string& path) {
  std::vector<BiasPhrase> phrases;
  int lineno = 0;
  for (const auto& line : ReadLines(path)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = SplitFields(line, '\t');
    BiasPhrase phrase;
    phrase.words = SplitWords(fields[0]);
    if (fields.size() > 1 && !fields[1].empty()) {
      try {
        phrase.frequency = std::stod(fields[1]);
      } catch (const std::exception&) {
        throw DataError(path + ":" + std::to_string(lineno) +
                        ": bad frequency \"" + fields[1] + "\"");
      }
    }
    if (phrase.words.empty()) continue;
    phrases.push_back(std::move(phrase));
  }
  return phrases;
}

std::vector<ClassManifestEntry> ReadClassManifest(const std::string& path) {
  std::vector<ClassManifestEntry> entries;
  auto dir = std::filesystem::path(path).parent_path();
  int lineno = 0;
  for (const auto& line : ReadLines(path)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = SplitFields(line, '\t');
    if (fields.size() != 4) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": expected class<TAB>enter<TAB>exit<TAB>phrase_file");
    }
    std::filesystem::path phrase_file(fields[3]);
    if (phrase_file.is_relative()) phrase_file = dir / phrase_file;
    entries.push_back({fields[0], fields[1], fields[2], phrase_file.string()});
  }
  return entries;
}

}  // namespace fstbias
