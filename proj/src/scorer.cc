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

#include "fstbias/scorer.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fstbias/error.h"
#include "fstbias/util.h"

namespace fstbias {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string HistoryKey(const std::vector<std::string>& tokens) {
  return tokens.empty() ? kStartHistory : JoinWords(tokens);
}

}  // namespace

int Scorer::TokenId(const std::string& token) const {
  const auto& vocab = Vocabulary();
  auto it = std::find(vocab.begin(), vocab.end(), token);
  return it == vocab.end() ? -1 : static_cast<int>(it - vocab.begin());
}

TableScorer::TableScorer(
    std::vector<std::string> vocabulary,
    std::map<std::string, std::map<std::string, double>> rows)
    : vocabulary_(std::move(vocabulary)), raw_rows_(std::move(rows)) {
  if (vocabulary_.empty()) throw ConfigError("table scorer: empty vocabulary");
  uniform_log_ = -std::log(static_cast<double>(vocabulary_.size()));
  std::map<std::string, int> ids;
  for (size_t i = 0; i < vocabulary_.size(); ++i) {
    ids[vocabulary_[i]] = static_cast<int>(i);
  }
  for (const auto& [history, row] : raw_rows_) {
    std::vector<double> dense(vocabulary_.size(), kNegInf);
    double mass = 0.0;
    for (const auto& [token, logprob] : row) {
      auto it = ids.find(token);
      if (it == ids.end()) {
        throw DataError("table scorer: token \"" + token +
                        "\" not in the vocabulary");
      }
      dense[it->second] = logprob;
      mass += std::exp(logprob);
    }
    if (std::abs(mass - 1.0) > 1e-6) {
      throw DataError("table scorer: history \"" + history +
                      "\" does not normalize (sum " + std::to_string(mass) +
                      ")");
    }
    rows_[history] = std::move(dense);
  }
}

TableScorer TableScorer::Load(const std::string& path,
                              std::vector<std::string> vocabulary) {
  std::map<std::string, std::map<std::string, double>> rows;
  int lineno = 0;
  for (const auto& line : ReadLines(path)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto fields = SplitFields(line, '\t');
    if (fields.size() != 3) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": expected history<TAB>token<TAB>logprob");
    }
    try {
      rows[fields[0]][fields[1]] = std::stod(fields[2]);
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": bad log-probability \"" + fields[2] + "\"");
    }
  }
  return TableScorer(std::move(vocabulary), std::move(rows));
}

void TableScorer::Save(const std::string& path) const {
  std::vector<std::string> lines;
  for (const auto& [history, row] : raw_rows_) {
    for (const auto& [token, logprob] : row) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", logprob);
      lines.push_back(history + "\t" + token + "\t" + buf);
    }
  }
  WriteLines(lines, path);
}

std::vector<double> TableScorer::LogProbs(
    const std::string& utt_id, const std::vector<int>& history) const {
  (void)utt_id;
  std::vector<std::string> names;
  names.reserve(history.size());
  for (int id : history) names.push_back(vocabulary_[id]);
  auto it = rows_.find(HistoryKey(names));
  if (it != rows_.end()) return it->second;
  return std::vector<double>(vocabulary_.size(), uniform_log_);
}

NgramModel::NgramModel(const std::vector<std::vector<std::string>>& sequences,
                       int order, std::vector<std::string> vocabulary)
    : order_(order), vocabulary_(std::move(vocabulary)) {
  if (order_ < 1) return;  // degenerates to uniform
  for (const auto& seq : sequences) {
    std::vector<std::string> padded(order_ - 1, kStartHistory);
    padded.insert(padded.end(), seq.begin(), seq.end());
    padded.push_back(kEndToken);
    for (size_t i = order_ - 1; i < padded.size(); ++i) {
      std::string context = JoinWords(
          {padded.begin() + (i - (order_ - 1)), padded.begin() + i});
      ++counts_[context][padded[i]];
      ++context_totals_[context];
    }
  }
}

double NgramModel::LogProb(const std::vector<std::string>& history,
                           const std::string& token) const {
  double v = static_cast<double>(vocabulary_.size());
  if (order_ < 1) return -std::log(v);
  std::vector<std::string> context(order_ - 1, kStartHistory);
  for (int k = 0; k < order_ - 1; ++k) {
    int idx = static_cast<int>(history.size()) - (order_ - 1) + k;
    if (idx >= 0) context[k] = history[idx];
  }
  std::string key = JoinWords(context);
  long num = 1;  // add-one smoothing
  long den = 0;
  auto ctx_it = counts_.find(key);
  if (ctx_it != counts_.end()) {
    auto tok_it = ctx_it->second.find(token);
    if (tok_it != ctx_it->second.end()) num += tok_it->second;
    den = context_totals_.at(key);
  }
  return std::log(static_cast<double>(num)) -
         std::log(static_cast<double>(den) + v);
}

NoisyChannelScorer::NoisyChannelScorer(
    std::map<std::string, std::vector<std::string>> reference_tokens,
    std::map<std::string, std::map<std::string, double>> confusion,
    std::vector<std::string> vocabulary, NoisyChannelConfig config)
    : references_(std::move(reference_tokens)),
      confusion_(std::move(confusion)),
      vocabulary_(std::move(vocabulary)),
      config_(config),
      ngram_([&] {
        std::vector<std::vector<std::string>> seqs;
        for (const auto& [utt, tokens] : references_) {
          (void)utt;
          seqs.push_back(tokens);
        }
        return seqs;
      }(), config.ngram_order, vocabulary_) {
  if (references_.empty()) {
    throw DataError("noisy channel: empty reference corpus");
  }
  if (vocabulary_.empty()) {
    throw ConfigError("noisy channel: empty vocabulary");
  }
  for (size_t i = 0; i < vocabulary_.size(); ++i) {
    vocab_ids_[vocabulary_[i]] = static_cast<int>(i);
  }
  if (vocab_ids_.count(kEndToken) == 0) {
    throw ConfigError("noisy channel: vocabulary must contain </s>");
  }
  for (const auto& [utt, tokens] : references_) {
    for (const auto& t : tokens) {
      if (vocab_ids_.count(t) == 0) {
        throw DataError("noisy channel: reference token \"" + t +
                        "\" of utterance " + utt + " not in the vocabulary");
      }
    }
  }
  for (const auto& [intended, row] : confusion_) {
    double mass = 0.0;
    for (const auto& [emitted, p] : row) {
      (void)emitted;
      if (p < 0.0) {
        throw DataError("noisy channel: negative confusion probability for "
                        "\"" + intended + "\"");
      }
      mass += p;
    }
    if (std::abs(mass - 1.0) > 1e-6) {
      throw DataError("noisy channel: confusion row for \"" + intended +
                      "\" does not normalize");
    }
  }
}

std::vector<double> NoisyChannelScorer::LogProbs(
    const std::string& utt_id, const std::vector<int>& history) const {
  auto ref_it = references_.find(utt_id);
  if (ref_it == references_.end()) {
    throw DataError("noisy channel: unknown utterance \"" + utt_id + "\"");
  }
  const auto& ref = ref_it->second;
  size_t t = history.size();
  const std::string& intended = t < ref.size() ? ref[t] : kEndToken;

  std::vector<std::string> history_names;
  history_names.reserve(history.size());
  for (int id : history) history_names.push_back(vocabulary_[id]);

  auto conf_it = confusion_.find(intended);
  std::vector<double> probs(vocabulary_.size(), 0.0);
  double total = 0.0;
  for (size_t y = 0; y < vocabulary_.size(); ++y) {
    const std::string& token = vocabulary_[y];
    double emission;
    if (conf_it != confusion_.end()) {
      auto e = conf_it->second.find(token);
      emission = e == conf_it->second.end() ? 0.0 : e->second;
    } else {
      emission = token == intended ? 1.0 : 0.0;
    }
    if (emission <= 0.0) continue;
    double lm = std::exp(ngram_.LogProb(history_names, token));
    double p = emission * std::pow(lm, config_.lm_power);
    if (config_.jitter > 0.0) {
      uint64_t h = HashCombine(config_.seed, HashString(utt_id));
      h = HashCombine(h, t);
      h = HashCombine(h, y);
      double unit = static_cast<double>(HashMix(h)) /
                    static_cast<double>(std::numeric_limits<uint64_t>::max());
      p *= std::exp((unit - 0.5) * 2.0 * config_.jitter);
    }
    probs[y] = p;
    total += p;
  }
  if (total <= 0.0) {
    throw DataError("noisy channel: no emission mass for utterance \"" +
                    utt_id + "\" at step " + std::to_string(t));
  }
  std::vector<double> logs(vocabulary_.size(), kNegInf);
  for (size_t y = 0; y < vocabulary_.size(); ++y) {
    if (probs[y] > 0.0) logs[y] = std::log(probs[y] / total);
  }
  return logs;
}

std::map<std::string, std::map<std::string, double>> ReadConfusionTable(
    const std::string& path) {
  std::map<std::string, std::map<std::string, double>> table;
  int lineno = 0;
  for (const auto& line : ReadLines(path)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto fields = SplitFields(line, '\t');
    if (fields.size() != 3) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": expected intended<TAB>emitted<TAB>prob");
    }
    try {
      table[fields[0]][fields[1]] = std::stod(fields[2]);
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": bad probability \"" + fields[2] + "\"");
    }
  }
  return table;
}

}  // namespace fstbias
