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

#include "fedsec/model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "fedsec/errors.h"

namespace fedsec {

Dataset::Dataset(std::vector<Sample> samples, int num_classes)
    : samples_(std::move(samples)), num_classes_(num_classes) {
  if (samples_.empty()) throw InvalidArgument("Dataset: no samples");
  if (num_classes_ < 2) {
    throw InvalidArgument("Dataset: num_classes must be at least 2");
  }
  feature_dim_ = samples_.front().features.size();
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const Sample& s = samples_[i];
    if (s.features.size() != feature_dim_) {
      throw InvalidArgument("Dataset: sample " + std::to_string(i) +
                            " has feature dimension " +
                            std::to_string(s.features.size()) + ", expected " +
                            std::to_string(feature_dim_));
    }
    if (s.label < 0 || s.label >= num_classes_) {
      throw InvalidArgument("Dataset: sample " + std::to_string(i) +
                            " has invalid label " + std::to_string(s.label));
    }
  }
}

Dataset Dataset::MaybeEmpty(std::vector<Sample> samples, int num_classes,
                            std::size_t feature_dim) {
  if (!samples.empty()) return Dataset(std::move(samples), num_classes);
  Dataset d;
  d.num_classes_ = num_classes;
  d.feature_dim_ = feature_dim;
  return d;
}

std::vector<std::size_t> Dataset::ClassCounts() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes_), 0);
  for (const Sample& s : samples_) ++counts[static_cast<std::size_t>(s.label)];
  return counts;
}

Dataset Dataset::Subset(std::span<const std::size_t> indices) const {
  std::vector<Sample> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(samples_.at(i));
  return MaybeEmpty(std::move(out), num_classes_, feature_dim_);
}

std::size_t ModelSpec::ParamCount() const {
  const std::size_t c = static_cast<std::size_t>(num_classes);
  switch (kind) {
    case ModelKind::kLogReg:
      return input_dim * c + c;
    case ModelKind::kMlp1:
      return input_dim * hidden_dim + hidden_dim + hidden_dim * c + c;
  }
  return 0;
}

void CheckModelInput(const ModelSpec& model, const ParamVector& theta,
                     std::size_t input_dim) {
  if (theta.dim() != model.ParamCount()) {
    throw InvalidArgument("model: theta has dimension " +
                          std::to_string(theta.dim()) + ", model expects " +
                          std::to_string(model.ParamCount()));
  }
  if (input_dim != model.input_dim) {
    throw InvalidArgument("model: input has dimension " +
                          std::to_string(input_dim) + ", model expects " +
                          std::to_string(model.input_dim));
  }
}

namespace {

// Affine map out = W x + b with W row-major [rows][cols] at `w`.
void Affine(const double* w, const double* b, std::span<const double> x,
            std::size_t rows, std::span<double> out) {
  const std::size_t cols = x.size();
  for (std::size_t r = 0; r < rows; ++r) {
    double s = b[r];
    const double* row = w + r * cols;
    for (std::size_t c = 0; c < cols; ++c) s += row[c] * x[c];
    out[r] = s;
  }
}

}  // namespace

std::vector<double> Logits(const ModelSpec& model, const ParamVector& theta,
                           std::span<const double> x) {
  CheckModelInput(model, theta, x.size());
  const std::size_t m = model.input_dim;
  const std::size_t c = static_cast<std::size_t>(model.num_classes);
  const double* p = theta.values().data();
  std::vector<double> logits(c);
  if (model.kind == ModelKind::kLogReg) {
    Affine(p, p + m * c, x, c, logits);
    return logits;
  }
  const std::size_t h = model.hidden_dim;
  std::vector<double> hidden(h);
  Affine(p, p + m * h, x, h, hidden);
  for (double& v : hidden) v = std::tanh(v);
  const double* w2 = p + m * h + h;
  Affine(w2, w2 + h * c, hidden, c, logits);
  return logits;
}

std::vector<double> Softmax(std::span<const double> logits) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double z = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    out[k] = std::exp(logits[k] - mx);
    z += out[k];
  }
  for (double& v : out) v /= z;
  return out;
}

std::vector<double> LogSoftmax(std::span<const double> logits) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double l : logits) z += std::exp(l - mx);
  const double lse = mx + std::log(z);
  std::vector<double> out(logits.size());
  for (std::size_t k = 0; k < logits.size(); ++k) out[k] = logits[k] - lse;
  return out;
}

std::vector<double> Forward(const ModelSpec& model, const ParamVector& theta,
                            std::span<const double> x) {
  return Softmax(Logits(model, theta, x));
}

int Argmax(std::span<const double> v) {
  int best = 0;
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (v[k] > v[static_cast<std::size_t>(best)]) best = static_cast<int>(k);
  }
  return best;
}

void Backprop(const ModelSpec& model, const ParamVector& theta,
              std::span<const double> x, std::span<const double> dlogits,
              double scale, std::span<double> grad_theta,
              std::span<double> grad_x) {
  CheckModelInput(model, theta, x.size());
  const std::size_t m = model.input_dim;
  const std::size_t c = static_cast<std::size_t>(model.num_classes);
  const double* p = theta.values().data();
  const bool want_theta = !grad_theta.empty();
  const bool want_x = !grad_x.empty();
  if (want_x) std::fill(grad_x.begin(), grad_x.end(), 0.0);

  if (model.kind == ModelKind::kLogReg) {
    for (std::size_t r = 0; r < c; ++r) {
      const double g = dlogits[r];
      if (want_theta) {
        double* gw = grad_theta.data() + r * m;
        for (std::size_t k = 0; k < m; ++k) gw[k] += scale * g * x[k];
        grad_theta[m * c + r] += scale * g;
      }
      if (want_x) {
        const double* w = p + r * m;
        for (std::size_t k = 0; k < m; ++k) grad_x[k] += g * w[k];
      }
    }
    return;
  }

  const std::size_t h = model.hidden_dim;
  std::vector<double> hidden(h);
  Affine(p, p + m * h, x, h, hidden);
  for (double& v : hidden) v = std::tanh(v);
  const double* w2 = p + m * h + h;
  const std::size_t w2_off = m * h + h;
  const std::size_t b2_off = w2_off + h * c;

  std::vector<double> dhidden(h, 0.0);
  for (std::size_t r = 0; r < c; ++r) {
    const double g = dlogits[r];
    const double* row = w2 + r * h;
    for (std::size_t j = 0; j < h; ++j) dhidden[j] += g * row[j];
    if (want_theta) {
      double* gw = grad_theta.data() + w2_off + r * h;
      for (std::size_t j = 0; j < h; ++j) gw[j] += scale * g * hidden[j];
      grad_theta[b2_off + r] += scale * g;
    }
  }
  for (std::size_t j = 0; j < h; ++j) {
    const double dpre = dhidden[j] * (1.0 - hidden[j] * hidden[j]);
    if (want_theta) {
      double* gw = grad_theta.data() + j * m;
      for (std::size_t k = 0; k < m; ++k) gw[k] += scale * dpre * x[k];
      grad_theta[m * h + j] += scale * dpre;
    }
    if (want_x) {
      const double* w = p + j * m;
      for (std::size_t k = 0; k < m; ++k) grad_x[k] += dpre * w[k];
    }
  }
}

double InputLossGradient(const ModelSpec& model, const ParamVector& theta,
                         const Sample& sample, std::span<double> grad_x) {
  const std::vector<double> logits = Logits(model, theta, sample.features);
  std::vector<double> dlogits = Softmax(logits);
  const double loss = -LogSoftmax(logits)[static_cast<std::size_t>(sample.label)];
  dlogits[static_cast<std::size_t>(sample.label)] -= 1.0;
  Backprop(model, theta, sample.features, dlogits, 1.0, {}, grad_x);
  return loss;
}

LossAndGrad LossAndGradient(const ModelSpec& model, const ParamVector& theta,
                            const Dataset& batch) {
  if (batch.empty()) throw InvalidArgument("LossAndGradient: empty batch");
  std::vector<double> grad(theta.dim(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  for (const Sample& s : batch.samples()) {
    const std::vector<double> logits = Logits(model, theta, s.features);
    std::vector<double> dlogits = Softmax(logits);
    const auto y = static_cast<std::size_t>(s.label);
    loss -= LogSoftmax(logits)[y];
    dlogits[y] -= 1.0;
    Backprop(model, theta, s.features, dlogits, inv_n, grad, {});
  }
  // Rounding can leave a perfect fit at -0.0 or a hair below zero.
  loss = std::max(0.0, loss * inv_n);
  return {loss, ParamVector(std::move(grad))};
}

ParamVector LocalSgdStep(const ParamVector& theta, const ParamVector& grad,
                         double eta) {
  CheckSameDim(theta, grad, "LocalSgdStep");
  if (!(eta >= 0.0)) throw InvalidArgument("LocalSgdStep: eta must be >= 0");
  std::vector<double> out(theta.dim());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = theta[k] - eta * grad[k];
  return ParamVector(std::move(out));
}

EvalResult Evaluate(const ModelSpec& model, const ParamVector& theta,
                    const Dataset& data) {
  if (data.empty()) throw InvalidArgument("Evaluate: empty dataset");
  std::size_t correct = 0;
  double loss = 0.0;
  for (const Sample& s : data.samples()) {
    const std::vector<double> logits = Logits(model, theta, s.features);
    if (Argmax(logits) == s.label) ++correct;
    loss -= LogSoftmax(logits)[static_cast<std::size_t>(s.label)];
  }
  const double n = static_cast<double>(data.size());
  return {static_cast<double>(correct) / n, loss / n};
}

ParamVector InitParams(const ModelSpec& model, Rng& rng, double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  std::vector<double> v(model.ParamCount());
  for (double& x : v) x = dist(rng);
  return ParamVector(std::move(v));
}

}  // namespace fedsec
