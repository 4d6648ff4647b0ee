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
// Beam search with class-tag-triggered context-FST traversal and score
// normalization. Emitting a class enter tag activates that class's bias
// FST; hypotheses inside an FST may only extend along its arcs (plus the
// exit tag at final states) and are scored
//     S = log P_b + lambda_c * log P_c.
// Hypotheses in the base space are scored
//     S = log P_b + lambda_b * Gamma_t,
// where Gamma_t averages the inside hypotheses' best arc log P_c at this
// step (0 when nothing is inside an FST). Ranking uses the accumulated
// score; the final n-best is ordered by accumulated score divided by the
// length penalty ((5+|Y|)/6)^alpha with |Y| the emitted token count.

#ifndef FSTBIAS_DECODER_H_
#define FSTBIAS_DECODER_H_

#include <optional>
#include <string>
#include <vector>

#include "fstbias/bias.h"
#include "fstbias/bpe.h"
#include "fstbias/scorer.h"

namespace fstbias {

struct DecoderConfig {
  int beam_size = 8;
  double lambda_c = 0.1;
  double lambda_b = 1.0;
  double length_penalty_alpha = 0.1;
  int max_steps = 64;
  int nbest = 1;
};

// Score components of one emitted token: S = base + lambda_c*context for
// inside-FST steps, S = base + lambda_b*gamma otherwise.
struct StepScore {
  double base = 0.0;
  std::optional<double> context;
  double gamma = 0.0;
  double total = 0.0;
};

// One candidate continuation of a hypothesis inside a bias FST.
struct FstCandidate {
  std::string token;             // arc input label, or the exit tag
  double log_pc = 0.0;           // -(arc weight) or -(final weight)
  StateId next_state = kNoStateId;  // kNoStateId = leaves the FST
};

// Continuations offered by the class FST at this state: one per outgoing
// arc, plus the exit tag when the state is final. Empty for a dead end.
std::vector<FstCandidate> ExpandInFst(const BiasClass& cls, StateId state);

// Eq-level scoring pieces, exposed for direct checking.
double ScoreInsideFst(double log_pb, double log_pc, const DecoderConfig& cfg);
double ScoreOutsideFst(double log_pb, double gamma, const DecoderConfig& cfg);
// Mean of the per-hypothesis best context log-probs; 0 when none.
double GammaFromContributions(const std::vector<double>& contributions);
double LengthPenalty(int token_count, double alpha);

struct Hypothesis {
  std::vector<int> tokens;  // scorer vocabulary ids, end token included
  std::vector<StepScore> step_scores;
  double accum_score = 0.0;  // running sum of step totals
  // (class index, state) while traversing a bias FST.
  std::optional<std::pair<int, StateId>> fst_state;
  bool finished = false;

  // Text assembly: outside steps contribute their BPE token, inside
  // steps contribute the arc's output word(s); tags appear as words.
  struct TextItem {
    bool is_word = false;
    std::string text;
  };
  std::vector<TextItem> display;
};

struct DecodeResult {
  std::vector<std::string> tokens;  // emitted tokens, end token excluded
  std::vector<std::string> words;   // assembled text, tags included
  double accum_score = 0.0;
  double ranked_score = 0.0;  // accum / length penalty
  std::vector<StepScore> step_scores;
};

// Per-step search diagnostics.
struct StepTrace {
  int kappa = 0;
  double gamma = 0.0;
};

class Decoder {
 public:
  // The scorer vocabulary must contain the end token, every class tag and
  // every FST input token (configuration error otherwise).
  Decoder(const Scorer& scorer, std::vector<BiasClass> classes, BpeModel bpe,
          DecoderConfig config);

  // N-best decode; throws DataError when no hypothesis survives.
  std::vector<DecodeResult> Decode(const std::string& utt_id,
                                   std::vector<StepTrace>* trace = nullptr)
      const;

  const DecoderConfig& config() const { return config_; }

 private:
  const Scorer& scorer_;
  std::vector<BiasClass> classes_;
  BpeModel bpe_;
  DecoderConfig config_;
  int end_token_ = -1;
  std::map<std::string, int> token_ids_;
  std::map<int, int> enter_tag_class_;  // enter-tag token id -> class index
  std::vector<int> exit_tag_ids_;       // per class
};

}  // namespace fstbias

#endif  // FSTBIAS_DECODER_H_
