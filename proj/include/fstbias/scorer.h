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
// The scorer contract stands in for the base E2E model: a deterministic
// map from (utterance, token history) to a log-probability distribution
// over the token vocabulary.

#ifndef FSTBIAS_SCORER_H_
#define FSTBIAS_SCORER_H_

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace fstbias {

inline constexpr const char* kEndToken = "</s>";
inline constexpr const char* kStartHistory = "<s>";

class Scorer {
 public:
  virtual ~Scorer() = default;

  // Token index = position in this list.
  virtual const std::vector<std::string>& Vocabulary() const = 0;

  // log P(token | utterance, history) for every vocabulary token; the
  // distribution sums to 1 in probability space. Pure and deterministic.
  virtual std::vector<double> LogProbs(
      const std::string& utt_id, const std::vector<int>& history) const = 0;

  int TokenId(const std::string& token) const;
};

// Exact lookup scorer. Histories are keyed by the space-joined token
// strings ("<s>" for the empty history); unlisted histories back off to
// the uniform distribution; tokens unlisted for a known history have
// probability zero. Every listed history must normalize to 1 (1e-6).
class TableScorer : public Scorer {
 public:
  TableScorer(std::vector<std::string> vocabulary,
              std::map<std::string, std::map<std::string, double>> rows);

  // File rows: history-tokens<TAB>token<TAB>logprob.
  static TableScorer Load(const std::string& path,
                          std::vector<std::string> vocabulary);
  void Save(const std::string& path) const;

  const std::vector<std::string>& Vocabulary() const override {
    return vocabulary_;
  }
  std::vector<double> LogProbs(const std::string& utt_id,
                               const std::vector<int>& history) const override;

 private:
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, std::vector<double>> rows_;
  std::map<std::string, std::map<std::string, double>> raw_rows_;  // for Save
  double uniform_log_;
};

// Token-level n-gram with add-one smoothing; the training corpus keeps
// its class tags so tag transitions get realistic probabilities.
class NgramModel {
 public:
  NgramModel(const std::vector<std::vector<std::string>>& sequences, int order,
             std::vector<std::string> vocabulary);

  // log P(token | last order-1 history tokens).
  double LogProb(const std::vector<std::string>& history,
                 const std::string& token) const;
  int order() const { return order_; }

 private:
  int order_;
  std::vector<std::string> vocabulary_;
  std::map<std::string, std::map<std::string, long>> counts_;
  std::map<std::string, long> context_totals_;
};

struct NoisyChannelConfig {
  int ngram_order = 2;
  double lm_power = 0.5;  // fixed log-linear interpolation exponent
  double jitter = 0.05;   // multiplicative noise magnitude, 0 disables
  uint64_t seed = 1;
};

// Deterministic confusion-channel stand-in for the trained model:
// P(y | utt, history) is proportional to
//   emission(y | reference token at position |history|) * ngram(y)^power
// perturbed by seeded multiplicative jitter and renormalized. Emission
// defaults to the identity when a token has no confusion row.
class NoisyChannelScorer : public Scorer {
 public:
  NoisyChannelScorer(
      std::map<std::string, std::vector<std::string>> reference_tokens,
      std::map<std::string, std::map<std::string, double>> confusion,
      std::vector<std::string> vocabulary, NoisyChannelConfig config);

  const std::vector<std::string>& Vocabulary() const override {
    return vocabulary_;
  }
  std::vector<double> LogProbs(const std::string& utt_id,
                               const std::vector<int>& history) const override;

 private:
  std::map<std::string, std::vector<std::string>> references_;
  std::map<std::string, std::map<std::string, double>> confusion_;
  std::vector<std::string> vocabulary_;
  std::map<std::string, int> vocab_ids_;
  NoisyChannelConfig config_;
  NgramModel ngram_;
};

// Confusion table file: intended<TAB>emitted<TAB>prob.
std::map<std::string, std::map<std::string, double>> ReadConfusionTable(
    const std::string& path);

}  // namespace fstbias

#endif  // FSTBIAS_SCORER_H_
