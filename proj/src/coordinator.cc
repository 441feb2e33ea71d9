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

#include "fedsec/coordinator.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "fedsec/errors.h"

namespace fedsec {
namespace {

constexpr double kMadConsistency = 1.4826;
constexpr double kMadGuard = 1e-12;
constexpr std::size_t kMinDetectionNodes = 3;

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

bool Contains(std::span<const int> ids, int id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

}  // namespace

std::vector<int> RoundPlan::Participants() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < participation.size(); ++i) {
    if (participation[i] != 0) out.push_back(static_cast<int>(i));
  }
  return out;
}

WeightVector SoftmaxWeights(std::span<const double> performances, double alpha,
                            std::vector<int> node_ids) {
  if (performances.empty()) {
    throw InvalidArgument("SoftmaxWeights: no performances");
  }
  if (!(alpha >= 0.0)) throw InvalidArgument("SoftmaxWeights: alpha < 0");
  for (double p : performances) {
    if (!std::isfinite(p)) {
      throw InvalidArgument("SoftmaxWeights: non-finite performance");
    }
  }
  if (node_ids.empty()) {
    node_ids.resize(performances.size());
    std::iota(node_ids.begin(), node_ids.end(), 0);
  }
  const double mx = *std::max_element(performances.begin(), performances.end());
  std::vector<double> w(performances.size());
  double z = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::exp(alpha * (performances[i] - mx));
    z += w[i];
  }
  for (double& v : w) v /= z;
  return WeightVector(std::move(w), std::move(node_ids));
}

std::vector<double> HeuristicScores(std::span<const NodeSummary> summaries,
                                    std::span<const int> flagged,
                                    const ScoreKnobs& knobs) {
  std::vector<double> scores;
  scores.reserve(summaries.size());
  for (const NodeSummary& s : summaries) {
    double v = s.performance - knobs.w_drift * s.drift;
    if (Contains(flagged, s.node_id)) v -= knobs.w_flag;
    scores.push_back(std::clamp(v, 0.0, 1.0));
  }
  return scores;
}

double AnomalyReport::MaxZ() const {
  if (skipped || z_scores.empty()) return 0.0;
  return *std::max_element(z_scores.begin(), z_scores.end());
}

AnomalyReport DetectAnomalies(std::span<const NodeSummary> summaries,
                              double z_threshold, double drift_cap) {
  AnomalyReport report;
  if (summaries.size() < kMinDetectionNodes) {
    report.skipped = true;
    report.z_scores.assign(summaries.size(), 0.0);
    report.warning = "anomaly detection skipped: " +
                     std::to_string(summaries.size()) +
                     " nodes, at least 3 required";
    return report;
  }
  if (!(z_threshold > 0.0)) {
    throw InvalidArgument("DetectAnomalies: z_threshold must be > 0");
  }
  std::vector<double> norms;
  norms.reserve(summaries.size());
  for (const NodeSummary& s : summaries) norms.push_back(s.update_l2);
  const double med = Median(norms);
  std::vector<double> dev;
  dev.reserve(norms.size());
  for (double x : norms) dev.push_back(std::fabs(x - med));
  const double mad = Median(dev);
  const double denom = kMadConsistency * mad + kMadGuard;
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    const double z = dev[i] / denom;
    report.z_scores.push_back(z);
    if (z > z_threshold || summaries[i].drift > drift_cap) {
      report.flagged.push_back(summaries[i].node_id);
    }
  }
  std::sort(report.flagged.begin(), report.flagged.end());
  return report;
}

AggregationMode DecideMode(double risk, double tau_risk, bool allow_plain) {
  if (risk > tau_risk) return AggregationMode::kFullSmc;
  if (risk == 0.0 && allow_plain) return AggregationMode::kPlain;
  return AggregationMode::kMasked;
}

std::vector<int> ParticipationGate(std::span<const double> update_delta_l2sq,
                                   double tau_part,
                                   std::span<const int> rounds_since_upload,
                                   int max_silent) {
  if (update_delta_l2sq.size() != rounds_since_upload.size()) {
    throw InvalidArgument("ParticipationGate: length mismatch");
  }
  const std::size_t n = update_delta_l2sq.size();
  std::vector<int> f(n, 1);
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (update_delta_l2sq[i] < tau_part && rounds_since_upload[i] < max_silent) {
      f[i] = 0;
    } else {
      any = true;
    }
  }
  if (!any && n > 0) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (update_delta_l2sq[i] > update_delta_l2sq[best]) best = i;
    }
    f[best] = 1;
  }
  return f;
}

NodeScorer::Result HeuristicScorer::Score(int /*round*/,
                                          std::span<const NodeSummary> summaries,
                                          std::span<const int> flagged) {
  return {HeuristicScores(summaries, flagged, knobs_), false, {}};
}

RoundPlan PlanRound(int round, std::span<const NodeSummary> summaries,
                    std::span<const double> update_delta_l2sq,
                    const CoordinatorConfig& config, NodeScorer& scorer) {
  if (summaries.empty()) throw InvalidArgument("PlanRound: no summaries");
  RoundPlan plan;
  const AnomalyReport report =
      DetectAnomalies(summaries, config.z_threshold, config.drift_cap);
  plan.flagged_nodes = report.flagged;
  plan.risk = report.MaxZ();
  plan.mode = DecideMode(plan.risk, config.tau_risk, config.allow_plain);

  std::vector<int> since;
  since.reserve(summaries.size());
  for (const NodeSummary& s : summaries) since.push_back(s.rounds_since_upload);
  plan.participation = ParticipationGate(update_delta_l2sq, config.tau_part,
                                         since, config.max_silent);

  NodeScorer::Result scored = scorer.Score(round, summaries, plan.flagged_nodes);
  if (scored.fell_back) plan.fallback_events = 1;

  std::vector<double> perf;
  std::vector<int> ids;
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    if (plan.participation[i] == 0) continue;
    perf.push_back(scored.scores[i]);
    ids.push_back(summaries[i].node_id);
  }
  plan.weights = SoftmaxWeights(perf, config.alpha, std::move(ids));
  return plan;
}

}  // namespace fedsec
