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

#ifndef FEDSEC_PARAM_VECTOR_H_
#define FEDSEC_PARAM_VECTOR_H_

#include <cstddef>
#include <span>
#include <vector>

namespace fedsec {

// Flat, fixed-dimension vector of model parameters or gradients. This is the
// unit every aggregation rule operates on.
class ParamVector {
 public:
  ParamVector() = default;
  // Throws InvalidArgument if any entry is NaN or infinite.
  explicit ParamVector(std::vector<double> values);
  static ParamVector Zeros(std::size_t dim);

  std::size_t dim() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double operator[](std::size_t k) const { return values_[k]; }
  double& operator[](std::size_t k) { return values_[k]; }

  std::span<const double> values() const { return values_; }
  std::span<double> mutable_values() { return values_; }
  const std::vector<double>& vec() const { return values_; }

  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  bool AllFinite() const;
  double L2Norm() const;
  double SquaredL2() const;

  friend bool operator==(const ParamVector&, const ParamVector&) = default;

 private:
  std::vector<double> values_;
};

ParamVector operator+(const ParamVector& a, const ParamVector& b);
ParamVector operator-(const ParamVector& a, const ParamVector& b);
ParamVector operator*(double s, const ParamVector& a);

double Dot(const ParamVector& a, const ParamVector& b);

// 1 - cos(a, b), in [0, 2]. Zero when either vector is zero.
double CosineDistance(const ParamVector& a, const ParamVector& b);

// Throws InvalidArgument naming `what` when dims differ.
void CheckSameDim(const ParamVector& a, const ParamVector& b,
                  const char* what);

}  // namespace fedsec

#endif  // FEDSEC_PARAM_VECTOR_H_
