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

#include "fstbias/bpe.h"

#include <algorithm>

#include "fstbias/error.h"
#include "fstbias/util.h"

namespace fstbias {

namespace {

// UTF-8 codepoint split; unknown bytes stay single.
std::vector<std::string> SplitCharacters(const std::string& word) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < word.size()) {
    size_t len = 1;
    unsigned char c = word[i];
    if ((c & 0xE0) == 0xC0) len = 2;
    else if ((c & 0xF0) == 0xE0) len = 3;
    else if ((c & 0xF8) == 0xF0) len = 4;
    if (i + len > word.size()) len = 1;
    out.push_back(word.substr(i, len));
    i += len;
  }
  return out;
}

void ApplyMergeInPlace(std::vector<std::string>* symbols,
                       const std::pair<std::string, std::string>& merge) {
  std::vector<std::string>& s = *symbols;
  size_t write = 0;
  for (size_t read = 0; read < s.size();) {
    if (read + 1 < s.size() && s[read] == merge.first &&
        s[read + 1] == merge.second) {
      s[write++] = merge.first + merge.second;
      read += 2;
    } else {
      if (write != read) s[write] = std::move(s[read]);
      ++write;
      ++read;
    }
  }
  s.resize(write);
}

}  // namespace

bool BpeModel::IsReserved(const std::string& token) const {
  return reserved.count(token) > 0 || IsClassTag(token);
}

BpeModel BpeLearn(const std::map<std::string, long>& word_frequencies,
                  int target_vocab,
                  const std::vector<std::string>& reserved_tags) {
  if (word_frequencies.empty()) throw DataError("bpe learn: empty corpus");
  BpeModel model;
  for (const auto& tag : reserved_tags) model.reserved.insert(tag);

  std::vector<std::pair<std::vector<std::string>, long>> corpus;
  std::set<std::string> base;
  for (const auto& [word, freq] : word_frequencies) {
    if (freq <= 0) continue;
    if (model.reserved.count(word) > 0) {
      throw DataError("bpe learn: reserved tag \"" + word +
                      "\" appears as a corpus word");
    }
    auto chars = SplitCharacters(word);
    base.insert(chars.begin(), chars.end());
    corpus.emplace_back(std::move(chars), freq);
  }
  if (corpus.empty()) throw DataError("bpe learn: empty corpus");
  if (target_vocab <= static_cast<int>(base.size())) {
    throw ConfigError("bpe learn: target vocabulary " +
                      std::to_string(target_vocab) +
                      " does not exceed the base character inventory (" +
                      std::to_string(base.size()) + ")");
  }

  int vocab_size = static_cast<int>(base.size());
  while (vocab_size < target_vocab) {
    std::map<std::pair<std::string, std::string>, long> pair_counts;
    for (const auto& [symbols, freq] : corpus) {
      for (size_t i = 0; i + 1 < symbols.size(); ++i) {
        pair_counts[{symbols[i], symbols[i + 1]}] += freq;
      }
    }
    // Most frequent pair; ties go to the lexicographically smallest.
    std::pair<std::string, std::string> best;
    long best_count = 0;
    for (const auto& [pair, count] : pair_counts) {
      if (count > best_count) {
        best = pair;
        best_count = count;
      }
    }
    if (best_count < 2) break;
    for (auto& [symbols, freq] : corpus) {
      (void)freq;
      ApplyMergeInPlace(&symbols, best);
    }
    model.merges.push_back(best);
    ++vocab_size;
  }

  // Base characters plus every merge product: any application of the
  // merge list to any word stays inside this set.
  std::set<std::string> symbols = base;
  for (const auto& [left, right] : model.merges) symbols.insert(left + right);
  for (const auto& s : symbols) {
    model.vocab.insert(s);
    model.vocab.insert(s + model.word_boundary_marker);
  }
  return model;
}

std::vector<std::string> BpeApplyToWord(const BpeModel& model,
                                        const std::string& word) {
  if (model.IsReserved(word)) return {word};
  std::vector<std::string> symbols = SplitCharacters(word);
  if (symbols.empty()) return {};
  for (const auto& merge : model.merges) {
    if (symbols.size() < 2) break;
    ApplyMergeInPlace(&symbols, merge);
  }
  symbols.back() += model.word_boundary_marker;
  return symbols;
}

std::vector<std::string> BpeApply(const BpeModel& model,
                                  const std::vector<std::string>& words) {
  std::vector<std::string> tokens;
  for (const auto& word : words) {
    auto piece = BpeApplyToWord(model, word);
    tokens.insert(tokens.end(), piece.begin(), piece.end());
  }
  return tokens;
}

std::vector<std::string> Detokenize(const BpeModel& model,
                                    const std::vector<std::string>& tokens) {
  const std::string& marker = model.word_boundary_marker;
  std::vector<std::string> words;
  std::string current;
  for (const auto& token : tokens) {
    if (model.IsReserved(token)) {
      if (!current.empty()) {
        throw DataError("detokenize: tag \"" + token +
                        "\" interrupts an unterminated word");
      }
      words.push_back(token);
      continue;
    }
    if (token.size() >= marker.size() &&
        token.compare(token.size() - marker.size(), marker.size(), marker) ==
            0) {
      current += token.substr(0, token.size() - marker.size());
      words.push_back(current);
      current.clear();
    } else {
      current += token;
    }
  }
  if (!current.empty()) {
    throw DataError("detokenize: trailing subwords without an end-of-word "
                    "marker");
  }
  return words;
}

void SaveBpeModel(const BpeModel& model, const std::string& merges_path,
                  const std::string& vocab_path) {
  std::vector<std::string> merge_lines;
  merge_lines.reserve(model.merges.size());
  for (const auto& [left, right] : model.merges) {
    merge_lines.push_back(left + " " + right);
  }
  WriteLines(merge_lines, merges_path);
  if (!vocab_path.empty()) {
    WriteLines({model.vocab.begin(), model.vocab.end()}, vocab_path);
  }
}

BpeModel LoadBpeModel(const std::string& merges_path,
                      const std::string& vocab_path,
                      const std::string& reserved_path) {
  BpeModel model;
  for (const auto& line : ReadLines(merges_path)) {
    if (line.empty()) continue;
    auto parts = SplitWords(line);
    if (parts.size() != 2) {
      throw DataError("merges file: expected \"left right\", got \"" + line +
                      "\"");
    }
    model.merges.emplace_back(parts[0], parts[1]);
  }
  if (!vocab_path.empty()) {
    for (const auto& line : ReadLines(vocab_path)) {
      if (!line.empty()) model.vocab.insert(line);
    }
  }
  if (!reserved_path.empty()) {
    for (const auto& line : ReadLines(reserved_path)) {
      if (!line.empty()) model.reserved.insert(line);
    }
  }
  return model;
}

}  // namespace fstbias
