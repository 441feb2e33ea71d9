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

#ifndef FEDSEC_ADVERSARIAL_H_
#define FEDSEC_ADVERSARIAL_H_

#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include "fedsec/model.h"
#include "fedsec/param_vector.h"
#include "fedsec/random.h"

namespace fedsec {

enum class PNorm { kInf, kTwo };

// Projected gradient ascent on the cross-entropy. With steps == 1 and
// step_size >= epsilon under the L-inf norm this is a single signed-gradient
// (FGSM) step.
struct PerturbSpec {
  double epsilon = 0.1;
  PNorm p_norm = PNorm::kInf;
  int steps = 3;
  double step_size = 0.05;
};

// Per-feature bounds adversarial inputs are clamped into.
struct FeatureBox {
  std::vector<double> lo;
  std::vector<double> hi;

  static FeatureBox Of(const Dataset& data);
};

// x' = x + delta with ||delta||_p <= epsilon. After each projection the
// input is clamped to `box` widened to contain x, which can only shrink
// |delta| coordinatewise, so the budget is preserved.
std::vector<double> Perturb(const ModelSpec& model, const ParamVector& theta,
                            const Sample& sample, const PerturbSpec& spec,
                            const FeatureBox* box = nullptr);

// KL(p || q) for two distributions on the same support.
double KlDivergence(std::span<const double> p, std::span<const double> q);

struct CompositeLoss {
  double value = 0.0;
  double clean_loss = 0.0;
  double adv_loss = 0.0;
  ParamVector grad;
};

// Mean over the batch of CE(f(x), y) + lambda * KL(f(x) || f(x')), where the
// clean distribution f(x) is a fixed target (no gradient flows through it) and
// x' are the supplied adversarial inputs, aligned with the batch.
CompositeLoss TotalLossAt(const ModelSpec& model, const ParamVector& theta,
                          const Dataset& batch,
                          std::span<const std::vector<double>> adv_inputs,
                          double lambda);

// Computes fresh adversarial inputs for the batch with `spec`, then
// TotalLossAt. Throws InvalidArgument when lambda < 0 or the batch is empty.
CompositeLoss TotalLoss(const ModelSpec& model, const ParamVector& theta,
                        const Dataset& batch, const PerturbSpec& spec,
                        double lambda, const FeatureBox* box = nullptr);

// Accuracy of the model on perturbed copies of `data`.
double AdversarialAccuracy(const ModelSpec& model, const ParamVector& theta,
                           const Dataset& data, const PerturbSpec& spec,
                           const FeatureBox* box = nullptr);

enum class AttackKind { kNone, kLabelFlip, kGradScale, kGradNegate };

std::string_view ToString(AttackKind kind);

struct AttackConfig {
  AttackKind kind = AttackKind::kNone;
  double poison_fraction = 0.0;
  double scale = 10.0;
};

// floor(poison_fraction * num_nodes) node ids, chosen from `rng`.
std::set<int> ChoosePoisonedNodes(const AttackConfig& cfg, int num_nodes,
                                  Rng& rng);

// GRAD_SCALE -> scale * g, GRAD_NEGATE -> -g, LABEL_FLIP -> g (the flip
// happens in the data). Throws InvalidArgument for kNone.
ParamVector PoisonUpdate(const ParamVector& honest, const AttackConfig& cfg);

// Cyclic label permutation y -> (y + 1) mod C.
Dataset FlipLabels(const Dataset& data);

}  // namespace fedsec

#endif  // FEDSEC_ADVERSARIAL_H_
