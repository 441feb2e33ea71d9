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

#include "fedsec/param_vector.h"

#include <cmath>
#include <string>
#include <utility>

#include "fedsec/errors.h"

namespace fedsec {

ParamVector::ParamVector(std::vector<double> values)
    : values_(std::move(values)) {
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw InvalidArgument("ParamVector: non-finite entry at index " +
                            std::to_string(k));
    }
  }
}

ParamVector ParamVector::Zeros(std::size_t dim) {
  return ParamVector(std::vector<double>(dim, 0.0));
}

bool ParamVector::AllFinite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double ParamVector::SquaredL2() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return s;
}

double ParamVector::L2Norm() const { return std::sqrt(SquaredL2()); }

void CheckSameDim(const ParamVector& a, const ParamVector& b,
                  const char* what) {
  if (a.dim() != b.dim()) {
    throw InvalidArgument(std::string(what) + ": dimension mismatch (" +
                          std::to_string(a.dim()) + " vs " +
                          std::to_string(b.dim()) + ")");
  }
}

ParamVector operator+(const ParamVector& a, const ParamVector& b) {
  CheckSameDim(a, b, "operator+");
  std::vector<double> out(a.dim());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] + b[k];
  return ParamVector(std::move(out));
}

ParamVector operator-(const ParamVector& a, const ParamVector& b) {
  CheckSameDim(a, b, "operator-");
  std::vector<double> out(a.dim());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] - b[k];
  return ParamVector(std::move(out));
}

ParamVector operator*(double s, const ParamVector& a) {
  std::vector<double> out(a.dim());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = s * a[k];
  return ParamVector(std::move(out));
}

double Dot(const ParamVector& a, const ParamVector& b) {
  CheckSameDim(a, b, "Dot");
  double s = 0.0;
  for (std::size_t k = 0; k < a.dim(); ++k) s += a[k] * b[k];
  return s;
}

double CosineDistance(const ParamVector& a, const ParamVector& b) {
  const double na = a.L2Norm();
  const double nb = b.L2Norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  double cos = Dot(a, b) / (na * nb);
  if (cos > 1.0) cos = 1.0;
  if (cos < -1.0) cos = -1.0;
  return 1.0 - cos;
}

}  // namespace fedsec
