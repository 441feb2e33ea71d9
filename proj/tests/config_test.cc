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

#include "fedsec/config.h"

#include <string>

#include "fedsec/errors.h"
#include "gtest/gtest.h"

namespace fedsec {
namespace {

void ExpectSamePerturb(const PerturbSpec& a, const PerturbSpec& b) {
  EXPECT_EQ(a.epsilon, b.epsilon);
  EXPECT_EQ(a.p_norm, b.p_norm);
  EXPECT_EQ(a.steps, b.steps);
  EXPECT_EQ(a.step_size, b.step_size);
}

// The shipped reference file lists every key at its built-in default.
TEST(ConfigTest, ReferenceFileMatchesDefaults) {
  const ExperimentConfig c = LoadConfig(FEDSEC_REFERENCE_CONFIG);
  const ExperimentConfig d;
  EXPECT_EQ(c.method, d.method);
  EXPECT_EQ(c.nodes, d.nodes);
  EXPECT_EQ(c.rounds, d.rounds);
  EXPECT_EQ(c.local_epochs, d.local_epochs);
  EXPECT_EQ(c.threads, d.threads);
  EXPECT_EQ(c.seeds, d.seeds);
  EXPECT_EQ(c.output, d.output);
  EXPECT_EQ(c.format, d.format);
  EXPECT_EQ(c.model_kind, d.model_kind);
  EXPECT_EQ(c.hidden_dim, d.hidden_dim);
  EXPECT_EQ(c.init_scale, d.init_scale);
  EXPECT_EQ(c.hyper.eta, d.hyper.eta);
  EXPECT_EQ(c.hyper.lambda, d.hyper.lambda);
  EXPECT_EQ(c.hyper.batch_size, d.hyper.batch_size);
  ExpectSamePerturb(c.perturb, d.perturb);
  ExpectSamePerturb(c.eval_perturb, d.eval_perturb);
  EXPECT_EQ(c.attack.kind, d.attack.kind);
  EXPECT_EQ(c.attack.poison_fraction, d.attack.poison_fraction);
  EXPECT_EQ(c.attack.scale, d.attack.scale);
  EXPECT_EQ(c.key_bits, d.key_bits);
  EXPECT_EQ(c.encoding.scale_bits, d.encoding.scale_bits);
  EXPECT_EQ(c.encoding.clamp_abs, d.encoding.clamp_abs);
  const CoordinatorConfig& k = c.coordinator;
  const CoordinatorConfig& dk = d.coordinator;
  EXPECT_EQ(k.alpha, dk.alpha);
  EXPECT_EQ(k.z_threshold, dk.z_threshold);
  EXPECT_EQ(k.drift_cap, dk.drift_cap);
  EXPECT_EQ(k.tau_part, dk.tau_part);
  EXPECT_EQ(k.max_silent, dk.max_silent);
  EXPECT_EQ(k.tau_risk, dk.tau_risk);
  EXPECT_EQ(k.w_drift, dk.w_drift);
  EXPECT_EQ(k.w_flag, dk.w_flag);
  EXPECT_EQ(k.cold_start_performance, dk.cold_start_performance);
  EXPECT_EQ(k.allow_plain, dk.allow_plain);
  EXPECT_EQ(c.scorer, d.scorer);
  EXPECT_EQ(c.external.endpoint, d.external.endpoint);
  EXPECT_EQ(c.external.timeout_s, d.external.timeout_s);
  EXPECT_EQ(c.dp.clip, d.dp.clip);
  EXPECT_EQ(c.dp.sigma, d.dp.sigma);
  EXPECT_EQ(c.link.base_ms, d.link.base_ms);
  EXPECT_EQ(c.link.bytes_per_ms, d.link.bytes_per_ms);
  EXPECT_EQ(c.link.jitter_ms, d.link.jitter_ms);
  EXPECT_TRUE(c.link_overrides.empty());
  EXPECT_EQ(c.cost.encrypt_ms_per_elem, d.cost.encrypt_ms_per_elem);
  EXPECT_EQ(c.cost.decrypt_ms_per_elem, d.cost.decrypt_ms_per_elem);
  EXPECT_EQ(c.cost.homadd_ms_per_elem, d.cost.homadd_ms_per_elem);
  EXPECT_EQ(c.cost.mask_ms_per_elem, d.cost.mask_ms_per_elem);
  EXPECT_EQ(c.data.source, d.data.source);
  EXPECT_EQ(c.data.test_fraction, d.data.test_fraction);
  EXPECT_EQ(c.data.validation_fraction, d.data.validation_fraction);
  EXPECT_EQ(c.data.synth.num_samples, d.data.synth.num_samples);
  EXPECT_EQ(c.data.synth.input_dim, d.data.synth.input_dim);
  EXPECT_EQ(c.data.synth.num_classes, d.data.synth.num_classes);
  EXPECT_EQ(c.data.synth.cluster_separation, d.data.synth.cluster_separation);
  EXPECT_EQ(c.data.synth.label_noise, d.data.synth.label_noise);
  EXPECT_EQ(c.data.synth.non_iid_skew, d.data.synth.non_iid_skew);
}

TEST(ConfigTest, ParsesValues) {
  const ExperimentConfig c = ParseConfig(
      "# comment\n"
      "[experiment]\nmethod = HE_FL\nnodes = 3\nrounds = 7\nseeds = 4..6\n"
      "format = jsonl\n"
      "[model]\nkind = mlp1\nhidden_dim = 5\n"
      "[eval]\np_norm = 2\nepsilon = 0.3\n"
      "[attack]\nkind = grad_scale\npoison_fraction = 0.2\n"
      "[coordinator]\nallow_plain = true\n");
  EXPECT_EQ(c.method, MethodId::kHeFl);
  EXPECT_EQ(c.nodes, 3);
  EXPECT_EQ(c.rounds, 7);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{4, 5, 6}));
  EXPECT_EQ(c.format, OutputFormat::kJsonl);
  EXPECT_EQ(c.model_kind, ModelKind::kMlp1);
  EXPECT_EQ(c.hidden_dim, 5u);
  EXPECT_EQ(c.eval_perturb.p_norm, PNorm::kTwo);
  EXPECT_EQ(c.eval_perturb.epsilon, 0.3);
  EXPECT_EQ(c.attack.kind, AttackKind::kGradScale);
  EXPECT_TRUE(c.coordinator.allow_plain);
}

TEST(ConfigTest, LinkOverridesApplyOnTopOfDefaults) {
  const ExperimentConfig c = ParseConfig(
      "[link.2]\nbase_ms = 80\n"
      "[experiment]\nnodes = 4\n"
      "[link]\nbytes_per_ms = 50\n");
  const std::vector<LinkProfile> links = c.Links();
  ASSERT_EQ(links.size(), 4u);
  EXPECT_EQ(links[0].base_ms, 20.0);
  EXPECT_EQ(links[0].bytes_per_ms, 50.0);
  EXPECT_EQ(links[2].base_ms, 80.0);
  EXPECT_EQ(links[2].bytes_per_ms, 50.0);
  EXPECT_THROW(ParseConfig("[experiment]\nnodes = 2\n[link.5]\nbase_ms = 1\n"),
               ConfigError);
}

TEST(ConfigTest, RejectsUnknownOrBadEntries) {
  EXPECT_THROW(ParseConfig("[experiment]\nnodez = 3\n"), ConfigError);
  EXPECT_THROW(ParseConfig("[experimnt]\nnodes = 3\n"), ConfigError);
  EXPECT_THROW(ParseConfig("[experiment]\nnodes = three\n"), ConfigError);
  EXPECT_THROW(ParseConfig("[experiment]\nmethod = FEDAVG\n"), ConfigError);
  EXPECT_THROW(ParseConfig("[experiment]\nnodes = 0\n"), ConfigError);
  EXPECT_THROW(ParseConfig("[perturb]\np_norm = 1\n"), ConfigError);
  EXPECT_THROW(ParseConfig("[data]\nnon_iid_skew = 0\n"), ConfigError);
  EXPECT_THROW(ParseConfig("[coordinator]\nallow_plain = maybe\n"), ConfigError);
  EXPECT_THROW(ParseConfig("[data]\nsource = csv\n"), ConfigError);
  EXPECT_THROW(LoadConfig("/nonexistent/dir/cfg.ini"), IoError);
}

TEST(ConfigTest, WraparoundGuard) {
  // 2^16 weights * 2^24 scale * 64 clamp needs about 46 bits below n/2.
  EXPECT_NO_THROW(ParseConfig("[crypto]\nkey_bits = 64\n"));
  EXPECT_THROW(ParseConfig("[crypto]\nkey_bits = 64\nscale_bits = 40\n"), ConfigError);
  EXPECT_NO_THROW(ParseConfig("[crypto]\nkey_bits = 64\nscale_bits = 8\nclamp_abs = 4\n"));
  EXPECT_THROW(ParseConfig("[crypto]\nkey_bits = 48\n"), ConfigError);
}

TEST(SeedListTest, Forms) {
  EXPECT_EQ(ParseSeedList("7"), (std::vector<std::uint64_t>{7}));
  EXPECT_EQ(ParseSeedList("1,3, 9"), (std::vector<std::uint64_t>{1, 3, 9}));
  EXPECT_EQ(ParseSeedList("2..4"), (std::vector<std::uint64_t>{2, 3, 4}));
  EXPECT_THROW(ParseSeedList(""), ConfigError);
  EXPECT_THROW(ParseSeedList("5..2"), ConfigError);
  EXPECT_THROW(ParseSeedList("1,x"), ConfigError);
}

}  // namespace
}  // namespace fedsec
