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

#include "fedsec/baselines.h"

#include <algorithm>
#include <cctype>
#include <string>
#include <utility>

#include "fedsec/errors.h"

namespace fedsec {

std::string_view ToString(MethodId id) {
  switch (id) {
    case MethodId::kOurs:
      return "OURS";
    case MethodId::kVfl:
      return "VFL";
    case MethodId::kDpFl:
      return "DP_FL";
    case MethodId::kSmcFl:
      return "SMC_FL";
    case MethodId::kHeFl:
      return "HE_FL";
  }
  return "?";
}

std::optional<MethodId> ParseMethod(std::string_view name) {
  std::string norm;
  for (char c : name) {
    norm.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(
                                        static_cast<unsigned char>(c))));
  }
  for (MethodId id : AllMethods()) {
    if (norm == ToString(id)) return id;
  }
  return std::nullopt;
}

std::vector<MethodId> AllMethods() {
  return {MethodId::kVfl, MethodId::kDpFl, MethodId::kSmcFl, MethodId::kHeFl,
          MethodId::kOurs};
}

PipelineConfig ConfigureMethod(MethodId id, const DpSettings& dp) {
  PipelineConfig p;
  p.method = id;
  switch (id) {
    case MethodId::kVfl:
      break;
    case MethodId::kDpFl:
      p.dp = dp;
      break;
    case MethodId::kSmcFl:
      p.mode_policy = ModePolicy::kFixedMasked;
      break;
    case MethodId::kHeFl:
      p.mode_policy = ModePolicy::kFixedFullSmc;
      break;
    case MethodId::kOurs:
      p.mode_policy = ModePolicy::kRiskAdaptive;
      p.coordinator_weighting = true;
      p.anomaly_detection = true;
      p.participation_gating = true;
      p.adversarial_training = true;
      break;
  }
  return p;
}

ParamVector DpNoise(const ParamVector& update, double clip, double sigma,
                    Rng& rng) {
  if (!(clip > 0.0)) throw InvalidArgument("DpNoise: clip must be > 0");
  if (!(sigma >= 0.0)) throw InvalidArgument("DpNoise: sigma must be >= 0");
  std::vector<double> out = update.vec();
  const double norm = update.L2Norm();
  if (norm > clip) {
    const double s = clip / norm;
    for (double& v : out) v *= s;
  }
  if (sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, sigma * clip);
    for (double& v : out) v += noise(rng);
  }
  return ParamVector(std::move(out));
}

}  // namespace fedsec
