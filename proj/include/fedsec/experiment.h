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

#ifndef FEDSEC_EXPERIMENT_H_
#define FEDSEC_EXPERIMENT_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fedsec/baselines.h"
#include "fedsec/config.h"
#include "fedsec/metrics.h"

namespace fedsec {

using RecordSink = std::function<void(const MetricsRecord&)>;

struct RunSummary {
  MethodId method = MethodId::kVfl;
  std::uint64_t seed = 0;
  int rounds = 0;
  int full_smc_rounds = 0;
  int fallback_events = 0;
  double mean_latency_ms = 0.0;
  double final_accuracy = 0.0;
  double final_adv_accuracy = 0.0;
  // Minimum number of participants seen in any round.
  int min_participants = 0;
  // Longest run of consecutive skipped rounds for any node.
  int max_silent_streak = 0;
  std::vector<std::string> warnings;

  double TriggerRate() const {
    return rounds == 0 ? 0.0 : static_cast<double>(full_smc_rounds) / rounds;
  }
};

// Runs `config.rounds` synchronous rounds of `method` with `seed`. Every
// round: local training (with the adversarial composite loss when the method
// asks for it), summaries, a round plan, masking or encryption per the
// round's mode, aggregation, clean and adversarial evaluation, and latency
// accounting. One record per round goes to `sink`. Errors are rethrown with
// the round (and node, where applicable) prepended.
RunSummary RunExperiment(const ExperimentConfig& config, MethodId method,
                         std::uint64_t seed, const RecordSink& sink);

// Every (method, seed) pair in method-major order.
std::vector<RunSummary> RunSweep(const ExperimentConfig& config,
                                 const std::vector<MethodId>& methods,
                                 const std::vector<std::uint64_t>& seeds,
                                 const RecordSink& sink);

}  // namespace fedsec

#endif  // FEDSEC_EXPERIMENT_H_
