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
// Class-tag relabeling: align a human transcription against tagged
// recognizer output and carry the tags over.

#ifndef FSTBIAS_RELABEL_H_
#define FSTBIAS_RELABEL_H_

#include <string>
#include <vector>

namespace fstbias {

enum class EditOp { kMatch, kSubstitute, kDelete, kInsert };

struct AlignItem {
  int ref_index = -1;  // -1 = gap
  int hyp_index = -1;
  EditOp op = EditOp::kMatch;
};

struct Alignment {
  std::vector<AlignItem> items;
  int cost = 0;

  // Error counts for WER bookkeeping.
  int substitutions = 0;
  int deletions = 0;  // ref words missing from hyp
  int insertions = 0;  // extra hyp words
};

// Minimal word-level Levenshtein alignment (unit costs); ties resolved
// preferring match > substitute > delete > insert. Comparison is
// case-insensitive unless case_sensitive is set.
Alignment Align(const std::vector<std::string>& ref,
                const std::vector<std::string>& hyp,
                bool case_sensitive = false);

// Strips the class tags from tagged_hyp, aligns the rest against ref and
// re-inserts each tag pair around the ref words its span aligned to.
// Spans aligning entirely to gaps are dropped. Output tags are balanced
// and non-nested; stripping them yields ref exactly.
std::vector<std::string> InsertTags(
    const std::vector<std::string>& ref,
    const std::vector<std::string>& tagged_hyp, bool case_sensitive = false);

}  // namespace fstbias

#endif  // FSTBIAS_RELABEL_H_
