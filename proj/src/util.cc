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

#include "fstbias/util.h"

#include <cctype>
#include <fstream>
#include <sstream>

#include "fstbias/error.h"

namespace fstbias {

std::vector<std::string> SplitWords(const std::string& line) {
  std::vector<std::string> words;
  std::istringstream in(line);
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

std::vector<std::string> SplitFields(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == delim) {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string JoinWords(const std::vector<std::string>& words,
                      const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out += sep;
    out += words[i];
  }
  return out;
}

bool IsEnterTag(const std::string& token) {
  return token.size() >= 3 && token.front() == '@' && token.back() == '#';
}

bool IsExitTag(const std::string& token) {
  return token.size() >= 3 && token.front() == '#' && token.back() == '@';
}

bool IsClassTag(const std::string& token) {
  return IsEnterTag(token) || IsExitTag(token);
}

std::string TagClassName(const std::string& token) {
  if (!IsClassTag(token)) return "";
  return token.substr(1, token.size() - 2);
}

std::vector<std::string> StripTags(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!IsClassTag(t)) out.push_back(t);
  }
  return out;
}

std::vector<CorpusLine> ReadCorpus(const std::string& path) {
  std::vector<CorpusLine> corpus;
  for (const auto& line : ReadLines(path)) {
    if (line.empty()) continue;
    auto fields = SplitFields(line, '\t');
    if (fields.size() < 2) {
      throw DataError("corpus line missing tab separator: \"" + line + "\"");
    }
    corpus.push_back({fields[0], fields[1]});
  }
  return corpus;
}

void WriteCorpus(const std::vector<CorpusLine>& corpus,
                 const std::string& path) {
  std::vector<std::string> lines;
  lines.reserve(corpus.size());
  for (const auto& c : corpus) lines.push_back(c.utt_id + "\t" + c.text);
  WriteLines(lines, path);
}

std::vector<std::string> ReadLines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

void WriteLines(const std::vector<std::string>& lines,
                const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  for (const auto& line : lines) out << line << "\n";
}

uint64_t HashMix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t HashCombine(uint64_t seed, uint64_t value) {
  return HashMix(seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) +
                         (seed >> 2)));
}

uint64_t HashString(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace fstbias
