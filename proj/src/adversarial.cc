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

#include "fedsec/adversarial.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "fedsec/errors.h"

namespace fedsec {
namespace {

double Sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

double Norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void Project(std::vector<double>& delta, const PerturbSpec& spec) {
  if (spec.p_norm == PNorm::kInf) {
    for (double& d : delta) d = std::clamp(d, -spec.epsilon, spec.epsilon);
    return;
  }
  const double n = Norm2(delta);
  if (n > spec.epsilon) {
    const double s = spec.epsilon / n;
    for (double& d : delta) d *= s;
  }
}

}  // namespace

FeatureBox FeatureBox::Of(const Dataset& data) {
  FeatureBox box;
  const std::size_t m = data.feature_dim();
  box.lo.assign(m, std::numeric_limits<double>::infinity());
  box.hi.assign(m, -std::numeric_limits<double>::infinity());
  for (const Sample& s : data.samples()) {
    for (std::size_t k = 0; k < m; ++k) {
      box.lo[k] = std::min(box.lo[k], s.features[k]);
      box.hi[k] = std::max(box.hi[k], s.features[k]);
    }
  }
  return box;
}

std::vector<double> Perturb(const ModelSpec& model, const ParamVector& theta,
                            const Sample& sample, const PerturbSpec& spec,
                            const FeatureBox* box) {
  const std::vector<double>& x = sample.features;
  if (!(spec.epsilon > 0.0) || spec.steps < 1) return x;
  const std::size_t m = x.size();
  std::vector<double> delta(m, 0.0);
  std::vector<double> xadv = x;
  std::vector<double> grad(m);
  Sample probe{xadv, sample.label};
  for (int step = 0; step < spec.steps; ++step) {
    probe.features = xadv;
    InputLossGradient(model, theta, probe, grad);
    if (spec.p_norm == PNorm::kInf) {
      for (std::size_t k = 0; k < m; ++k) {
        delta[k] += spec.step_size * Sign(grad[k]);
      }
    } else {
      const double gn = Norm2(grad);
      if (gn > 0.0) {
        for (std::size_t k = 0; k < m; ++k) {
          delta[k] += spec.step_size * grad[k] / gn;
        }
      }
    }
    Project(delta, spec);
    for (std::size_t k = 0; k < m; ++k) {
      double v = x[k] + delta[k];
      if (box != nullptr) {
        v = std::clamp(v, std::min(box->lo[k], x[k]),
                       std::max(box->hi[k], x[k]));
      }
      xadv[k] = v;
      delta[k] = v - x[k];
    }
  }
  return xadv;
}

double KlDivergence(std::span<const double> p, std::span<const double> q) {
  double kl = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] > 0.0) kl += p[k] * (std::log(p[k]) - std::log(q[k]));
  }
  return kl;
}

CompositeLoss TotalLossAt(const ModelSpec& model, const ParamVector& theta,
                          const Dataset& batch,
                          std::span<const std::vector<double>> adv_inputs,
                          double lambda) {
  if (batch.empty()) throw InvalidArgument("TotalLoss: empty batch");
  if (!(lambda >= 0.0)) throw InvalidArgument("TotalLoss: lambda < 0");
  if (adv_inputs.size() != batch.size()) {
    throw InvalidArgument("TotalLoss: adversarial inputs do not match batch");
  }
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  std::vector<double> grad(theta.dim(), 0.0);
  double clean = 0.0;
  double adv = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Sample& s = batch[i];
    const auto y = static_cast<std::size_t>(s.label);
    const std::vector<double> logits = Logits(model, theta, s.features);
    const std::vector<double> log_p = LogSoftmax(logits);
    const std::vector<double> p = Softmax(logits);
    clean -= log_p[y];
    std::vector<double> dclean = p;
    dclean[y] -= 1.0;
    Backprop(model, theta, s.features, dclean, inv_n, grad, {});
    if (lambda == 0.0) continue;

    const std::vector<double> adv_logits = Logits(model, theta, adv_inputs[i]);
    const std::vector<double> log_q = LogSoftmax(adv_logits);
    const std::vector<double> q = Softmax(adv_logits);
    double kl = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (p[k] > 0.0) kl += p[k] * (log_p[k] - log_q[k]);
    }
    adv += kl;
    // d KL(p || softmax(z')) / dz' = q - p with p held fixed.
    std::vector<double> dadv(q.size());
    for (std::size_t k = 0; k < q.size(); ++k) dadv[k] = q[k] - p[k];
    Backprop(model, theta, adv_inputs[i], dadv, lambda * inv_n, grad, {});
  }
  CompositeLoss out;
  out.clean_loss = clean * inv_n;
  out.adv_loss = adv * inv_n;
  out.value = out.clean_loss + lambda * out.adv_loss;
  out.grad = ParamVector(std::move(grad));
  return out;
}

CompositeLoss TotalLoss(const ModelSpec& model, const ParamVector& theta,
                        const Dataset& batch, const PerturbSpec& spec,
                        double lambda, const FeatureBox* box) {
  if (batch.empty()) throw InvalidArgument("TotalLoss: empty batch");
  std::vector<std::vector<double>> adv;
  adv.reserve(batch.size());
  for (const Sample& s : batch.samples()) {
    adv.push_back(lambda == 0.0 ? s.features
                                : Perturb(model, theta, s, spec, box));
  }
  return TotalLossAt(model, theta, batch, adv, lambda);
}

double AdversarialAccuracy(const ModelSpec& model, const ParamVector& theta,
                           const Dataset& data, const PerturbSpec& spec,
                           const FeatureBox* box) {
  if (data.empty()) throw InvalidArgument("AdversarialAccuracy: empty data");
  std::size_t correct = 0;
  for (const Sample& s : data.samples()) {
    const std::vector<double> xadv = Perturb(model, theta, s, spec, box);
    if (Argmax(Logits(model, theta, xadv)) == s.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

std::string_view ToString(AttackKind kind) {
  switch (kind) {
    case AttackKind::kNone:
      return "NONE";
    case AttackKind::kLabelFlip:
      return "LABEL_FLIP";
    case AttackKind::kGradScale:
      return "GRAD_SCALE";
    case AttackKind::kGradNegate:
      return "GRAD_NEGATE";
  }
  return "?";
}

std::set<int> ChoosePoisonedNodes(const AttackConfig& cfg, int num_nodes,
                                  Rng& rng) {
  std::set<int> out;
  if (cfg.kind == AttackKind::kNone || num_nodes <= 0) return out;
  const auto count = static_cast<int>(
      std::floor(cfg.poison_fraction * static_cast<double>(num_nodes) + 1e-9));
  std::vector<int> ids(static_cast<std::size_t>(num_nodes));
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), rng);
  out.insert(ids.begin(), ids.begin() + std::clamp(count, 0, num_nodes));
  return out;
}

ParamVector PoisonUpdate(const ParamVector& honest, const AttackConfig& cfg) {
  switch (cfg.kind) {
    case AttackKind::kNone:
      throw InvalidArgument("PoisonUpdate: attack kind is NONE");
    case AttackKind::kLabelFlip:
      return honest;
    case AttackKind::kGradScale:
      return cfg.scale * honest;
    case AttackKind::kGradNegate:
      return -1.0 * honest;
  }
  return honest;
}

Dataset FlipLabels(const Dataset& data) {
  std::vector<Sample> out = data.samples();
  for (Sample& s : out) s.label = (s.label + 1) % data.num_classes();
  return Dataset::MaybeEmpty(std::move(out), data.num_classes(),
                             data.feature_dim());
}

}  // namespace fedsec
