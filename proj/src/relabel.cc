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

#include "fstbias/relabel.h"

#include <algorithm>
#include <cctype>
#include <limits>

#include "fstbias/error.h"
#include "fstbias/util.h"

namespace fstbias {

namespace {

bool WordsEqual(const std::string& a, const std::string& b,
                bool case_sensitive) {
  if (case_sensitive) return a == b;
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

}  // namespace

Alignment Align(const std::vector<std::string>& ref,
                const std::vector<std::string>& hyp, bool case_sensitive) {
  const int n = static_cast<int>(ref.size());
  const int m = static_cast<int>(hyp.size());
  std::vector<std::vector<int>> d(n + 1, std::vector<int>(m + 1, 0));
  for (int i = 0; i <= n; ++i) d[i][0] = i;
  for (int j = 0; j <= m; ++j) d[0][j] = j;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= m; ++j) {
      bool eq = WordsEqual(ref[i - 1], hyp[j - 1], case_sensitive);
      int sub = d[i - 1][j - 1] + (eq ? 0 : 1);
      int del = d[i - 1][j] + 1;
      int ins = d[i][j - 1] + 1;
      d[i][j] = std::min({sub, del, ins});
    }
  }

  Alignment out;
  out.cost = d[n][m];
  // Traceback, preferring match > substitute > delete > insert.
  int i = n, j = m;
  std::vector<AlignItem> rev;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      bool eq = WordsEqual(ref[i - 1], hyp[j - 1], case_sensitive);
      if (d[i][j] == d[i - 1][j - 1] + (eq ? 0 : 1)) {
        if (eq) {
          rev.push_back({i - 1, j - 1, EditOp::kMatch});
        } else {
          rev.push_back({i - 1, j - 1, EditOp::kSubstitute});
          ++out.substitutions;
        }
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      rev.push_back({i - 1, -1, EditOp::kDelete});
      ++out.deletions;
      --i;
      continue;
    }
    rev.push_back({-1, j - 1, EditOp::kInsert});
    ++out.insertions;
    --j;
  }
  out.items.assign(rev.rbegin(), rev.rend());
  return out;
}

std::vector<std::string> InsertTags(const std::vector<std::string>& ref,
                                    const std::vector<std::string>& tagged_hyp,
                                    bool case_sensitive) {
  struct Span {
    std::string enter_tag;
    std::string exit_tag;
    int begin = 0;  // positions in the stripped hyp, [begin, end)
    int end = 0;
  };
  std::vector<std::string> hyp;
  std::vector<Span> spans;
  bool open = false;
  Span current;
  for (const auto& token : tagged_hyp) {
    if (IsEnterTag(token)) {
      if (open) {
        throw DataError("insert tags: nested enter tag \"" + token + "\"");
      }
      open = true;
      current = Span{token, "", static_cast<int>(hyp.size()), 0};
    } else if (IsExitTag(token)) {
      if (!open) {
        throw DataError("insert tags: exit tag \"" + token +
                        "\" without a matching enter tag");
      }
      if (TagClassName(token) != TagClassName(current.enter_tag)) {
        throw DataError("insert tags: exit tag \"" + token +
                        "\" does not match enter tag \"" + current.enter_tag +
                        "\"");
      }
      current.exit_tag = token;
      current.end = static_cast<int>(hyp.size());
      spans.push_back(current);
      open = false;
    } else {
      hyp.push_back(token);
    }
  }
  if (open) {
    throw DataError("insert tags: enter tag \"" + current.enter_tag +
                    "\" is never closed");
  }

  Alignment alignment = Align(ref, hyp, case_sensitive);
  // hyp position -> ref position for matches and substitutions.
  std::vector<int> hyp_to_ref(hyp.size(), -1);
  for (const auto& item : alignment.items) {
    if (item.op == EditOp::kMatch || item.op == EditOp::kSubstitute) {
      hyp_to_ref[item.hyp_index] = item.ref_index;
    }
  }

  // An enter tag goes before the first ref word aligned inside the span,
  // the exit tag after the last; spans aligned entirely to gaps vanish.
  std::vector<std::vector<std::string>> before(ref.size() + 1);
  std::vector<std::vector<std::string>> after(ref.size() + 1);
  for (const auto& span : spans) {
    int first = std::numeric_limits<int>::max();
    int last = -1;
    for (int j = span.begin; j < span.end; ++j) {
      if (hyp_to_ref[j] >= 0) {
        first = std::min(first, hyp_to_ref[j]);
        last = std::max(last, hyp_to_ref[j]);
      }
    }
    if (last < 0) continue;
    before[first].push_back(span.enter_tag);
    after[last].push_back(span.exit_tag);
  }

  std::vector<std::string> out;
  for (size_t p = 0; p < ref.size(); ++p) {
    for (const auto& tag : before[p]) out.push_back(tag);
    out.push_back(ref[p]);
    for (const auto& tag : after[p]) out.push_back(tag);
  }
  return out;
}

}  // namespace fstbias
