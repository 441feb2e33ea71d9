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

#include <cstdlib>
#include <numeric>
#include <string>
#include <vector>

#include "fedsec/errors.h"
#include "gtest/gtest.h"

namespace fedsec {
namespace {

ExperimentConfig Small() {
  ExperimentConfig c;
  c.nodes = 5;
  c.rounds = 12;
  c.key_bits = 256;
  c.data.synth.num_samples = 600;
  return c;
}

std::vector<MetricsRecord> Collect(const ExperimentConfig& c, MethodId m,
                                   std::uint64_t seed, RunSummary* summary = nullptr) {
  std::vector<MetricsRecord> out;
  const RunSummary s =
      RunExperiment(c, m, seed, [&](const MetricsRecord& r) { out.push_back(r); });
  if (summary != nullptr) *summary = s;
  return out;
}

TEST(ExperimentTest, ZeroRoundsEmitsNothing) {
  ExperimentConfig c = Small();
  c.rounds = 0;
  RunSummary s;
  EXPECT_TRUE(Collect(c, MethodId::kOurs, 1, &s).empty());
  EXPECT_EQ(s.rounds, 0);
  EXPECT_EQ(s.TriggerRate(), 0.0);
}

TEST(ExperimentTest, RecordsAreConsistentWithSummary) {
  RunSummary s;
  const std::vector<MetricsRecord> recs = Collect(Small(), MethodId::kOurs, 2, &s);
  ASSERT_EQ(recs.size(), 12u);
  int full = 0;
  double latency = 0.0;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(recs[i].round, static_cast<int>(i));
    EXPECT_EQ(recs[i].method, "OURS");
    EXPECT_EQ(recs[i].seed, 2u);
    EXPECT_TRUE(recs[i].mode == "MASKED" || recs[i].mode == "FULL_SMC") << recs[i].mode;
    EXPECT_GE(recs[i].global_accuracy, 0.0);
    EXPECT_LE(recs[i].global_accuracy, 1.0);
    EXPECT_LE(recs[i].adv_accuracy, recs[i].global_accuracy);
    EXPECT_GT(recs[i].round_latency_ms, 0.0);
    EXPECT_EQ(recs[i].fallback_events, 0);
    full += recs[i].mode == "FULL_SMC";
    latency += recs[i].round_latency_ms;
  }
  EXPECT_EQ(s.full_smc_rounds, full);
  EXPECT_NEAR(s.mean_latency_ms, latency / recs.size(), 1e-9);
  EXPECT_EQ(s.final_accuracy, recs.back().global_accuracy);
  EXPECT_GE(s.min_participants, 1);
}

TEST(ExperimentTest, ReproducibleAcrossRunsAndThreadCounts) {
  ExperimentConfig c = Small();
  c.attack = {AttackKind::kGradScale, 0.2, 10.0};
  for (MethodId m : AllMethods()) {
    const std::vector<MetricsRecord> a = Collect(c, m, 7);
    EXPECT_EQ(a, Collect(c, m, 7)) << ToString(m);
    ExperimentConfig threaded = c;
    threaded.threads = 3;
    EXPECT_EQ(a, Collect(threaded, m, 7)) << ToString(m);
  }
  EXPECT_NE(Collect(c, MethodId::kVfl, 7), Collect(c, MethodId::kVfl, 8));
}

TEST(ExperimentTest, MethodsShareDataAndInitialization) {
  // With a plain zero-noise pipeline the fixed-mode baselines differ only in
  // how the aggregate is computed, so their accuracy traces nearly agree.
  const ExperimentConfig c = Small();
  const std::vector<MetricsRecord> vfl = Collect(c, MethodId::kVfl, 3);
  const std::vector<MetricsRecord> smc = Collect(c, MethodId::kSmcFl, 3);
  const std::vector<MetricsRecord> he = Collect(c, MethodId::kHeFl, 3);
  for (std::size_t i = 0; i < vfl.size(); ++i) {
    EXPECT_NEAR(smc[i].global_loss, vfl[i].global_loss, 1e-5);
    EXPECT_NEAR(he[i].global_loss, vfl[i].global_loss, 1e-5);
    EXPECT_EQ(smc[i].mode, "MASKED");
  }
}

TEST(ExperimentTest, CoordinatorResistsScaledUpdates) {
  ExperimentConfig c;
  c.attack = {AttackKind::kGradScale, 0.2, 10.0};
  RunSummary ours, vfl;
  Collect(c, MethodId::kOurs, 1, &ours);
  Collect(c, MethodId::kVfl, 1, &vfl);
  EXPECT_GT(ours.final_accuracy, vfl.final_accuracy + 0.05);
  EXPECT_GT(ours.full_smc_rounds, 0);
}

TEST(ExperimentTest, UnreachableScorerFallsBackEveryRound) {
  ::unsetenv("FEDSEC_SCORER_ENDPOINT");
  ExperimentConfig c = Small();
  c.scorer = ScorerKind::kExternalLlm;
  c.external.endpoint = "http://127.0.0.1:1/score";
  c.external.timeout_s = 0.5;
  RunSummary s;
  const std::vector<MetricsRecord> recs = Collect(c, MethodId::kOurs, 1, &s);
  EXPECT_EQ(s.fallback_events, c.rounds);
  for (const MetricsRecord& r : recs) EXPECT_EQ(r.fallback_events, 1);
  // The fallback uses the built-in scorer, so the trajectory is unchanged.
  const std::vector<MetricsRecord> base = Collect(Small(), MethodId::kOurs, 1);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(recs[i].global_accuracy, base[i].global_accuracy);
  }
}

TEST(ExperimentTest, ErrorsAreDiagnosed) {
  ExperimentConfig c = Small();
  c.nodes = 0;
  EXPECT_THROW(Collect(c, MethodId::kVfl, 1), ConfigError);
  c = Small();
  c.nodes = 40;
  c.data.synth.num_samples = 50;
  c.data.synth.non_iid_skew = 0.05;
  EXPECT_THROW(Collect(c, MethodId::kVfl, 1), ConfigError);
  c = Small();
  c.data.source = DataSourceKind::kCsv;
  c.data.csv_path = "/nonexistent/train.csv";
  EXPECT_THROW(Collect(c, MethodId::kVfl, 1), IoError);
}

TEST(SweepTest, MethodMajorOrder) {
  ExperimentConfig c = Small();
  c.rounds = 2;
  std::vector<std::string> order;
  const std::vector<RunSummary> s = RunSweep(
      c, {MethodId::kVfl, MethodId::kHeFl}, {1, 2},
      [&](const MetricsRecord& r) { order.push_back(r.method + std::to_string(r.seed)); });
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(order, (std::vector<std::string>{"VFL1", "VFL1", "VFL2", "VFL2", "HE_FL1",
                                             "HE_FL1", "HE_FL2", "HE_FL2"}));
}

}  // namespace
}  // namespace fedsec
