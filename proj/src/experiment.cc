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

#include "fedsec/experiment.h"

#include <algorithm>
#include <exception>
#include <iostream>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <thread>
#include <utility>

#include "fedsec/adversarial.h"
#include "fedsec/aggregation.h"
#include "fedsec/coordinator.h"
#include "fedsec/data.h"
#include "fedsec/errors.h"
#include "fedsec/llm_scorer.h"
#include "fedsec/masking.h"
#include "fedsec/model.h"
#include "fedsec/paillier.h"
#include "fedsec/simnet.h"

namespace fedsec {
namespace {

struct NodeState {
  NodeData data;
  FeatureBox box;
  bool poisoned = false;
  double performance = 0.5;
  std::optional<ParamVector> last_uploaded;
  int rounds_since_upload = 0;
  int silent_streak = 0;
  double last_delay_ms = 0.0;
};

struct LocalResult {
  ParamVector model;   // the node's own model after local training
  ParamVector update;  // what it uploads: model - global, possibly poisoned
  double validation_accuracy = 0.0;
};

std::uint64_t U64(int v) { return static_cast<std::uint64_t>(v); }

LocalResult TrainNode(const ExperimentConfig& config,
                      const PipelineConfig& pipe, const ModelSpec& model,
                      const ParamVector& global, const NodeState& node,
                      int node_id, int round, std::uint64_t seed) {
  Rng rng = MakeRng(seed, Stream::kNodeTrain, {U64(node_id), U64(round)});
  const Dataset& train = node.data.train;
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  // Near-equal batches: a short tail batch of one or two samples would make
  // the update norm spike and trip the anomaly detector.
  const auto batch = static_cast<std::size_t>(config.hyper.batch_size);
  const std::size_t num_batches =
      std::max<std::size_t>(1, (order.size() + batch - 1) / batch);

  ParamVector theta = global;
  for (int epoch = 0; epoch < config.local_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t b = 0; b < num_batches; ++b) {
      const std::size_t start = b * order.size() / num_batches;
      const std::size_t stop = (b + 1) * order.size() / num_batches;
      const Dataset mb = train.Subset(
          std::span<const std::size_t>(order).subspan(start, stop - start));
      const ParamVector grad =
          pipe.adversarial_training
              ? TotalLoss(model, theta, mb, config.perturb, config.hyper.lambda,
                          &node.box)
                    .grad
              : LossAndGradient(model, theta, mb).grad;
      theta = LocalSgdStep(theta, grad, config.hyper.eta);
    }
  }

  LocalResult out;
  out.update = theta - global;
  if (node.poisoned && (config.attack.kind == AttackKind::kGradScale ||
                        config.attack.kind == AttackKind::kGradNegate)) {
    out.update = PoisonUpdate(out.update, config.attack);
  }
  if (pipe.dp) {
    Rng dp_rng = MakeRng(seed, Stream::kDpNoise, {U64(node_id), U64(round)});
    out.update = DpNoise(out.update, pipe.dp->clip, pipe.dp->sigma, dp_rng);
  }
  const Dataset& val =
      node.data.validation.empty() ? node.data.train : node.data.validation;
  out.validation_accuracy = Evaluate(model, theta, val).accuracy;
  out.model = std::move(theta);
  return out;
}

std::vector<LocalResult> TrainAllNodes(const ExperimentConfig& config,
                                       const PipelineConfig& pipe,
                                       const ModelSpec& model,
                                       const ParamVector& global,
                                       const std::vector<NodeState>& nodes,
                                       int round, std::uint64_t seed) {
  const std::size_t n = nodes.size();
  std::vector<LocalResult> results(n);
  std::vector<std::exception_ptr> errors(n);
  auto work = [&](std::size_t i) {
    try {
      results[i] = TrainNode(config, pipe, model, global, nodes[i],
                             static_cast<int>(i), round, seed);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const auto threads =
      std::min<std::size_t>(static_cast<std::size_t>(config.threads), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < n; i += threads) work(i);
      });
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw Error("round " + std::to_string(round) + " node " +
                  std::to_string(i) + ": " + e.what());
    }
  }
  return results;
}

AggregationMode FixedMode(ModePolicy policy) {
  switch (policy) {
    case ModePolicy::kFixedPlain:
      return AggregationMode::kPlain;
    case ModePolicy::kFixedMasked:
      return AggregationMode::kMasked;
    case ModePolicy::kFixedFullSmc:
    case ModePolicy::kRiskAdaptive:
      return AggregationMode::kFullSmc;
  }
  return AggregationMode::kPlain;
}

std::unique_ptr<NodeScorer> MakeScorer(const ExperimentConfig& config) {
  const ScoreKnobs knobs{config.coordinator.w_drift, config.coordinator.w_flag};
  if (config.scorer == ScorerKind::kExternalLlm) {
    return std::make_unique<ExternalLlmScorer>(WithEnvironment(config.external),
                                               knobs);
  }
  return std::make_unique<HeuristicScorer>(knobs);
}

}  // namespace

RunSummary RunExperiment(const ExperimentConfig& config, MethodId method,
                         std::uint64_t seed, const RecordSink& sink) {
  ValidateConfig(config);
  RunSummary summary;
  summary.method = method;
  summary.seed = seed;
  if (config.rounds == 0) return summary;

  FederatedData fed = LoadOrSynthesize(config, seed);
  summary.warnings = fed.warnings;
  for (const std::string& w : fed.warnings) std::clog << "[fedsec] " << w << '\n';

  const ModelSpec model{config.model_kind, fed.train.feature_dim(),
                        config.hidden_dim, fed.train.num_classes()};
  const PipelineConfig pipe = ConfigureMethod(method, config.dp);
  const int n = config.nodes;

  Rng init_rng = MakeRng(seed, Stream::kInit);
  ParamVector global = InitParams(model, init_rng, config.init_scale);

  Rng poison_rng = MakeRng(seed, Stream::kPoison);
  const std::set<int> poisoned = ChoosePoisonedNodes(config.attack, n, poison_rng);

  std::vector<NodeState> nodes(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    NodeState& s = nodes[static_cast<std::size_t>(i)];
    s.data = fed.nodes[static_cast<std::size_t>(i)];
    s.poisoned = poisoned.count(i) > 0;
    if (s.poisoned && config.attack.kind == AttackKind::kLabelFlip) {
      s.data.train = FlipLabels(s.data.train);
    }
    s.box = FeatureBox::Of(s.data.train);
    s.performance = config.coordinator.cold_start_performance;
  }
  const FeatureBox eval_box = FeatureBox::Of(fed.train);

  std::optional<KeyPair> keys;
  if (pipe.encrypted()) {
    keys = GenerateKeyPair(config.key_bits,
                           DeriveSeed(seed, {U64(static_cast<int>(Stream::kKeygen))}));
  }
  std::unique_ptr<NodeScorer> scorer = MakeScorer(config);
  CoordinatorConfig coord = config.coordinator;
  if (!pipe.participation_gating) coord.tau_part = 0.0;
  const std::vector<LinkProfile> links = config.Links();
  std::optional<ParamVector> prev_global_update;
  double latency_sum = 0.0;
  summary.min_participants = n;

  for (int t = 0; t < config.rounds; ++t) {
    const std::vector<LocalResult> local =
        TrainAllNodes(config, pipe, model, global, nodes, t, seed);

    RoundPlan plan;
    if (pipe.coordinator_weighting) {
      std::vector<NodeSummary> summaries;
      std::vector<double> deltas;
      for (int i = 0; i < n; ++i) {
        const NodeState& s = nodes[static_cast<std::size_t>(i)];
        const LocalResult& r = local[static_cast<std::size_t>(i)];
        NodeSummary ns;
        ns.node_id = i;
        ns.performance = s.performance;
        ns.update_l2 = r.update.L2Norm();
        ns.drift = prev_global_update ? CosineDistance(r.update, *prev_global_update)
                                      : 0.0;
        ns.delay_ms = s.last_delay_ms;
        ns.rounds_since_upload = s.rounds_since_upload;
        summaries.push_back(ns);
        deltas.push_back(s.last_uploaded
                             ? (r.model - *s.last_uploaded).SquaredL2()
                             : std::numeric_limits<double>::infinity());
      }
      plan = PlanRound(t, summaries, deltas, coord, *scorer);
    } else {
      plan.participation.assign(static_cast<std::size_t>(n), 1);
      std::vector<int> ids(static_cast<std::size_t>(n));
      std::iota(ids.begin(), ids.end(), 0);
      plan.weights = WeightVector::Uniform(std::move(ids));
      plan.mode = FixedMode(pipe.mode_policy);
    }

    std::vector<ParamVector> updates;
    for (int id : plan.weights.node_ids()) {
      updates.push_back(local[static_cast<std::size_t>(id)].update);
    }
    ParamVector aggregate;
    try {
      switch (plan.mode) {
        case AggregationMode::kPlain:
          aggregate = WeightedAggregate(updates, plan.weights);
          break;
        case AggregationMode::kMasked:
          aggregate = MaskedWeightedAggregate(
              updates, plan.weights, MaskSchedule{seed, U64(t)},
              config.encoding.scale_bits);
          break;
        case AggregationMode::kFullSmc: {
          std::vector<CipherVector> ciphers;
          for (std::size_t k = 0; k < updates.size(); ++k) {
            const int id = plan.weights.node_ids()[k];
            PaillierRandom prng(DeriveSeed(
                seed, {U64(static_cast<int>(Stream::kEncrypt)), U64(id), U64(t)}));
            try {
              ciphers.push_back(
                  EncodeVector(updates[k], config.encoding, keys->pub, prng));
            } catch (const std::exception& e) {
              throw Error("node " + std::to_string(id) + ": " + e.what());
            }
          }
          aggregate = SecureWeightedAggregate(ciphers, plan.weights, *keys,
                                              config.encoding);
          break;
        }
      }
      global = global + aggregate;
    } catch (const std::exception& e) {
      throw Error("round " + std::to_string(t) + ": aggregation failed: " +
                  e.what());
    }

    RoundTraffic traffic;
    traffic.mode = plan.mode;
    traffic.dim = global.dim();
    traffic.participation = plan.participation;
    const std::size_t up_bytes =
        MessageBytes(PayloadFor(plan.mode), global.dim(), config.key_bits);
    const std::size_t down_bytes = MessageBytes(
        plan.mode == AggregationMode::kFullSmc ? PayloadKind::kCipherVector
                                               : PayloadKind::kPlainVector,
        global.dim(), config.key_bits);
    for (int i = 0; i < n; ++i) {
      const bool in = plan.participation[static_cast<std::size_t>(i)] != 0;
      traffic.uplink_bytes.push_back(in ? up_bytes : 0);
      traffic.downlink_bytes.push_back(in ? down_bytes : 0);
    }
    Rng net_rng = MakeRng(seed, Stream::kNetwork, {U64(t)});
    const RoundLatency latency =
        ComputeRoundLatency(traffic, links, config.cost, &net_rng);

    int participants = 0;
    for (int i = 0; i < n; ++i) {
      NodeState& s = nodes[static_cast<std::size_t>(i)];
      const LocalResult& r = local[static_cast<std::size_t>(i)];
      s.performance = r.validation_accuracy;
      if (plan.participation[static_cast<std::size_t>(i)] != 0) {
        ++participants;
        s.last_uploaded = r.model;
        s.rounds_since_upload = 0;
        s.silent_streak = 0;
        const NodeLatency& nl = latency.per_node[static_cast<std::size_t>(i)];
        s.last_delay_ms = nl.uplink_ms + nl.compute_ms + nl.downlink_ms;
      } else {
        ++s.rounds_since_upload;
        ++s.silent_streak;
        summary.max_silent_streak =
            std::max(summary.max_silent_streak, s.silent_streak);
      }
    }
    summary.min_participants = std::min(summary.min_participants, participants);
    prev_global_update = aggregate;

    const EvalResult eval = Evaluate(model, global, fed.test);
    MetricsRecord rec;
    rec.seed = seed;
    rec.method = std::string(ToString(method));
    rec.round = t;
    rec.global_accuracy = eval.accuracy;
    rec.global_loss = eval.mean_loss;
    rec.adv_accuracy =
        AdversarialAccuracy(model, global, fed.test, config.eval_perturb, &eval_box);
    rec.round_latency_ms = latency.round_ms;
    rec.uplink_bytes = latency.uplink_bytes;
    rec.mode = std::string(ToString(plan.mode));
    rec.flagged_count = static_cast<int>(plan.flagged_nodes.size());
    rec.fallback_events = plan.fallback_events;
    sink(rec);

    ++summary.rounds;
    if (plan.mode == AggregationMode::kFullSmc) ++summary.full_smc_rounds;
    summary.fallback_events += plan.fallback_events;
    latency_sum += latency.round_ms;
    summary.final_accuracy = eval.accuracy;
    summary.final_adv_accuracy = rec.adv_accuracy;
  }
  summary.mean_latency_ms = latency_sum / summary.rounds;
  return summary;
}

std::vector<RunSummary> RunSweep(const ExperimentConfig& config,
                                 const std::vector<MethodId>& methods,
                                 const std::vector<std::uint64_t>& seeds,
                                 const RecordSink& sink) {
  std::vector<RunSummary> out;
  for (MethodId m : methods) {
    for (std::uint64_t s : seeds) out.push_back(RunExperiment(config, m, s, sink));
  }
  return out;
}

}  // namespace fedsec
