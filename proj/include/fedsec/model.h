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

#ifndef FEDSEC_MODEL_H_
#define FEDSEC_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fedsec/param_vector.h"
#include "fedsec/random.h"

namespace fedsec {

struct Sample {
  std::vector<double> features;
  int label = 0;
};

// A labelled set of samples with a fixed feature dimension. Construction
// validates that it is non-empty, the dimension is constant and every label
// is below `num_classes`.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<Sample> samples, int num_classes);

  // Same as the constructor but permits an empty sample list (used for node
  // validation splits that may legitimately be empty).
  static Dataset MaybeEmpty(std::vector<Sample> samples, int num_classes,
                            std::size_t feature_dim);

  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  int num_classes() const { return num_classes_; }
  std::size_t feature_dim() const { return feature_dim_; }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  const std::vector<Sample>& samples() const { return samples_; }

  // Class histogram, length num_classes().
  std::vector<std::size_t> ClassCounts() const;

  Dataset Subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<Sample> samples_;
  int num_classes_ = 0;
  std::size_t feature_dim_ = 0;
};

enum class ModelKind { kLogReg, kMlp1 };

// Parameter layout:
//   LOGREG: W[C][m] row-major, then b[C].
//   MLP1:   W1[h][m], b1[h], W2[C][h], b2[C]; tanh hidden activation.
struct ModelSpec {
  ModelKind kind = ModelKind::kLogReg;
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  int num_classes = 2;

  std::size_t ParamCount() const;
  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

struct LossAndGrad {
  double loss = 0.0;
  ParamVector grad;
};

struct EvalResult {
  double accuracy = 0.0;
  double mean_loss = 0.0;
};

// Pre-softmax scores.
std::vector<double> Logits(const ModelSpec& model, const ParamVector& theta,
                           std::span<const double> x);

// Softmax output head; entries sum to 1.
std::vector<double> Forward(const ModelSpec& model, const ParamVector& theta,
                            std::span<const double> x);

std::vector<double> Softmax(std::span<const double> logits);
std::vector<double> LogSoftmax(std::span<const double> logits);

// Smallest index among maximal entries.
int Argmax(std::span<const double> v);

// Backpropagates an upstream gradient on the logits for input `x`.
// Accumulates `scale * d(logits . dlogits)/d theta` into `grad_theta` (when
// non-empty) and writes the input gradient into `grad_x` (when non-empty).
void Backprop(const ModelSpec& model, const ParamVector& theta,
              std::span<const double> x, std::span<const double> dlogits,
              double scale, std::span<double> grad_theta,
              std::span<double> grad_x);

// Cross-entropy of a single example and its gradient w.r.t. the input.
double InputLossGradient(const ModelSpec& model, const ParamVector& theta,
                         const Sample& sample, std::span<double> grad_x);

// Mean cross-entropy over `batch` and its gradient w.r.t. theta.
LossAndGrad LossAndGradient(const ModelSpec& model, const ParamVector& theta,
                            const Dataset& batch);

// theta - eta * grad.
ParamVector LocalSgdStep(const ParamVector& theta, const ParamVector& grad,
                         double eta);

EvalResult Evaluate(const ModelSpec& model, const ParamVector& theta,
                    const Dataset& data);

// Uniform in [-scale, scale] per coordinate.
ParamVector InitParams(const ModelSpec& model, Rng& rng, double scale = 0.05);

// Validates dims of theta against the model and of x against input_dim.
void CheckModelInput(const ModelSpec& model, const ParamVector& theta,
                     std::size_t input_dim);

}  // namespace fedsec

#endif  // FEDSEC_MODEL_H_
