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

#ifndef FEDSEC_BASELINES_H_
#define FEDSEC_BASELINES_H_

#include <optional>
#include <string_view>
#include <vector>

#include "fedsec/param_vector.h"
#include "fedsec/random.h"

namespace fedsec {

enum class MethodId { kOurs, kVfl, kDpFl, kSmcFl, kHeFl };

std::string_view ToString(MethodId id);
// Accepts OURS, VFL, DP_FL, SMC_FL, HE_FL (case-insensitive, '-' or '_').
std::optional<MethodId> ParseMethod(std::string_view name);
std::vector<MethodId> AllMethods();

enum class ModePolicy { kFixedPlain, kFixedMasked, kFixedFullSmc, kRiskAdaptive };

struct DpSettings {
  double clip = 1.0;
  double sigma = 0.1;
};

// What a method's round pipeline does. Everything else (data, model, initial
// parameters, poisoning schedule, network) is shared across methods.
struct PipelineConfig {
  MethodId method = MethodId::kVfl;
  ModePolicy mode_policy = ModePolicy::kFixedPlain;
  bool coordinator_weighting = false;
  bool anomaly_detection = false;
  bool participation_gating = false;
  bool adversarial_training = false;
  std::optional<DpSettings> dp;

  bool encrypted() const {
    return mode_policy == ModePolicy::kFixedFullSmc ||
           mode_policy == ModePolicy::kRiskAdaptive;
  }
};

// VFL: plain uniform averaging. DP_FL: VFL plus clipped Gaussian noise.
// SMC_FL: pairwise masking every round. HE_FL: Paillier every round.
// OURS: coordinator weighting, detection, gating, adversarial training and
// risk-switched masking/Paillier.
PipelineConfig ConfigureMethod(MethodId id, const DpSettings& dp);

// Clip to L2 norm <= clip, then add N(0, (sigma * clip)^2) per coordinate.
// Throws InvalidArgument if clip <= 0 or sigma < 0.
ParamVector DpNoise(const ParamVector& update, double clip, double sigma,
                    Rng& rng);

}  // namespace fedsec

#endif  // FEDSEC_BASELINES_H_
