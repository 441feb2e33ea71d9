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

#ifndef FEDSEC_COORDINATOR_H_
#define FEDSEC_COORDINATOR_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fedsec/aggregation.h"

namespace fedsec {

// Per-round, per-node metadata the coordinator reasons over.
struct NodeSummary {
  int node_id = 0;
  // Validation accuracy from the node's previous round; cold start 0.5.
  double performance = 0.5;
  // L2 norm of the node's uploaded update.
  double update_l2 = 0.0;
  // Cosine distance in [0, 2] to the previous global update direction.
  double drift = 0.0;
  double delay_ms = 0.0;
  int rounds_since_upload = 0;
};

struct CoordinatorConfig {
  double alpha = 5.0;
  double z_threshold = 3.0;
  double drift_cap = 1.5;
  double tau_part = 1e-6;
  int max_silent = 5;
  double tau_risk = 3.0;
  double w_drift = 0.2;
  double w_flag = 1.0;
  double cold_start_performance = 0.5;
  // Baseline runs only: permit PLAIN when the risk is exactly zero.
  bool allow_plain = false;
};

// Output of one coordinator step.
struct RoundPlan {
  WeightVector weights;           // covers exactly the participants
  std::vector<int> participation; // f_i per node, indexed by node id
  AggregationMode mode = AggregationMode::kMasked;
  double risk = 0.0;
  std::vector<int> flagged_nodes;  // ascending
  int fallback_events = 0;

  std::vector<int> Participants() const;
};

// exp(alpha * p_i) / sum_j exp(alpha * p_j), computed after subtracting the
// maximum. Throws InvalidArgument on empty input, alpha < 0 or non-finite
// performances. `node_ids` defaults to 0..N-1 when empty.
WeightVector SoftmaxWeights(std::span<const double> performances, double alpha,
                            std::vector<int> node_ids = {});

struct ScoreKnobs {
  double w_drift = 0.2;
  double w_flag = 1.0;
};

// performance - w_drift * drift - w_flag * [flagged], clamped to [0, 1].
// `flagged` holds node ids.
std::vector<double> HeuristicScores(std::span<const NodeSummary> summaries,
                                    std::span<const int> flagged,
                                    const ScoreKnobs& knobs);

struct AnomalyReport {
  std::vector<int> flagged;     // node ids, ascending
  std::vector<double> z_scores; // aligned with the input summaries
  bool skipped = false;
  std::string warning;

  // max |z|, or 0 when detection was skipped.
  double MaxZ() const;
};

// Robust z-score of update_l2: |x - median| / (1.4826 * MAD + 1e-12).
// A node is flagged iff its z-score exceeds `z_threshold` or its drift
// exceeds `drift_cap`. With fewer than three nodes detection is skipped.
AnomalyReport DetectAnomalies(std::span<const NodeSummary> summaries,
                              double z_threshold, double drift_cap);

// risk > tau_risk -> FULL_SMC, otherwise MASKED; PLAIN only for risk == 0
// when `allow_plain` is set.
AggregationMode DecideMode(double risk, double tau_risk,
                           bool allow_plain = false);

// Lazy-upload gating. Node i skips (f_i = 0) iff its squared update change
// is below tau_part and it has been silent for fewer than max_silent rounds.
// If every node would skip, the node with the largest change (ties to the
// smallest index) is forced in.
std::vector<int> ParticipationGate(std::span<const double> update_delta_l2sq,
                                   double tau_part,
                                   std::span<const int> rounds_since_upload,
                                   int max_silent);

// Produces per-node performance scores in [0, 1].
class NodeScorer {
 public:
  struct Result {
    std::vector<double> scores;
    bool fell_back = false;
    std::string message;
  };
  virtual ~NodeScorer() = default;
  virtual Result Score(int round, std::span<const NodeSummary> summaries,
                       std::span<const int> flagged) = 0;
};

class HeuristicScorer : public NodeScorer {
 public:
  explicit HeuristicScorer(ScoreKnobs knobs) : knobs_(knobs) {}
  Result Score(int round, std::span<const NodeSummary> summaries,
               std::span<const int> flagged) override;

 private:
  ScoreKnobs knobs_;
};

// One coordinator round: anomaly detection, risk-driven mode, participation
// gating and softmax weighting of the participants' scores.
// `summaries` is indexed by node id; `update_delta_l2sq` aligns with it.
RoundPlan PlanRound(int round, std::span<const NodeSummary> summaries,
                    std::span<const double> update_delta_l2sq,
                    const CoordinatorConfig& config, NodeScorer& scorer);

}  // namespace fedsec

#endif  // FEDSEC_COORDINATOR_H_
