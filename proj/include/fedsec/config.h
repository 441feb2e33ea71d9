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

#ifndef FEDSEC_CONFIG_H_
#define FEDSEC_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fedsec/adversarial.h"
#include "fedsec/baselines.h"
#include "fedsec/coordinator.h"
#include "fedsec/llm_scorer.h"
#include "fedsec/model.h"
#include "fedsec/paillier.h"
#include "fedsec/simnet.h"

namespace fedsec {

// Local optimisation knobs. The perturbation budget lives in PerturbSpec and
// the weighting sensitivity in CoordinatorConfig.
struct Hyperparams {
  double eta = 1.5;
  double lambda = 0.5;
  int batch_size = 32;
  std::uint64_t seed = 1;
};

struct SynthSpec {
  int num_samples = 2000;
  int input_dim = 8;
  int num_classes = 2;
  double cluster_separation = 2.5;
  double label_noise = 0.05;
  double non_iid_skew = 10.0;  // Dirichlet concentration
};

enum class DataSourceKind { kSynth, kCsv };

struct DataConfig {
  DataSourceKind source = DataSourceKind::kSynth;
  std::string csv_path;
  SynthSpec synth;
  double test_fraction = 0.2;
  double validation_fraction = 0.2;
};

enum class ScorerKind { kHeuristic, kExternalLlm };

enum class OutputFormat { kCsv, kJsonl };

struct ExperimentConfig {
  MethodId method = MethodId::kOurs;
  int nodes = 10;
  int rounds = 100;
  int local_epochs = 1;
  int threads = 1;
  std::vector<std::uint64_t> seeds = {1};
  std::string output = "metrics.csv";
  OutputFormat format = OutputFormat::kCsv;

  ModelKind model_kind = ModelKind::kLogReg;
  std::size_t hidden_dim = 16;
  double init_scale = 0.05;
  Hyperparams hyper;

  PerturbSpec perturb;
  PerturbSpec eval_perturb{0.1, PNorm::kInf, 3, 0.05};
  AttackConfig attack;

  std::size_t key_bits = 512;
  FixedPointEncoding encoding;

  CoordinatorConfig coordinator;
  ScorerKind scorer = ScorerKind::kHeuristic;
  ExternalScorerConfig external;

  DpSettings dp;

  LinkProfile link;
  std::map<int, LinkProfile> link_overrides;
  CostModel cost;

  DataConfig data;

  // Link profile of every node, defaults plus overrides.
  std::vector<LinkProfile> Links() const;
};

// Parses the INI-style text. Unknown sections or keys and malformed values
// raise ConfigError naming the offending key. The result is validated.
ExperimentConfig ParseConfig(const std::string& text);
ExperimentConfig LoadConfig(const std::string& path);

// Range checks plus the no-wraparound guard for the configured key size.
void ValidateConfig(const ExperimentConfig& config);

// "1..5", "1,3,9" or "7".
std::vector<std::uint64_t> ParseSeedList(const std::string& text);

}  // namespace fedsec

#endif  // FEDSEC_CONFIG_H_
