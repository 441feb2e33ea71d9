// Copyright 2026 The FedSec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FEDSEC_LLM_SCORER_H_
#define FEDSEC_LLM_SCORER_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fedsec/coordinator.h"

namespace fedsec {

inline constexpr std::string_view kScorerEndpointEnv = "FEDSEC_SCORER_ENDPOINT";
inline constexpr std::string_view kScorerTokenEnv = "FEDSEC_SCORER_TOKEN";

struct ExternalScorerConfig {
  // http://host[:port][/path]
  std::string endpoint;
  std::string token;
  double timeout_s = 10.0;
  std::string prompt_id = "node_scoring_v1";
};

// Versioned prompt text sent as the "instructions" field.
std::string_view PromptTemplate(std::string_view prompt_id);

// Request body: {"round", "prompt_id", "instructions", "summaries": [...]}.
std::string BuildScoringRequest(int round,
                                std::span<const NodeSummary> summaries,
                                std::span<const int> flagged,
                                std::string_view prompt_id);

// Parses a JSON array of `expected` reals in [0, 1]. Returns nullopt and sets
// `error` on any violation.
std::optional<std::vector<double>> ParseScoreReply(std::string_view body,
                                                   std::size_t expected,
                                                   std::string* error);

// Scores nodes through an HTTP JSON endpoint. Any transport error, malformed
// reply, wrong length or out-of-range value falls back to the heuristic
// scores for that round and reports the event; it never throws.
class ExternalLlmScorer : public NodeScorer {
 public:
  ExternalLlmScorer(ExternalScorerConfig config, ScoreKnobs fallback_knobs);

  Result Score(int round, std::span<const NodeSummary> summaries,
               std::span<const int> flagged) override;

  int fallback_count() const { return fallback_count_; }

 private:
  ExternalScorerConfig config_;
  HeuristicScorer fallback_;
  int fallback_count_ = 0;
};

// Fills endpoint/token from the environment when unset in `config`.
ExternalScorerConfig WithEnvironment(ExternalScorerConfig config);

}  // namespace fedsec

#endif  // FEDSEC_LLM_SCORER_H_
