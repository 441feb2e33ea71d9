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

#include "fedsec/aggregation.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "fedsec/errors.h"

namespace fedsec {
namespace {

constexpr double kWeightSumTolerance = 1e-9;

// Indices of `w` ordered by ascending node id.
std::vector<std::size_t> CanonicalOrder(const WeightVector& w) {
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return w.node_ids()[a] < w.node_ids()[b];
  });
  return order;
}

template <typename T>
void CheckCounts(std::span<const T> updates, const WeightVector& w,
                 const char* what) {
  if (updates.empty()) {
    throw InvalidArgument(std::string(what) + ": no updates");
  }
  if (updates.size() != w.size()) {
    throw InvalidArgument(std::string(what) + ": " +
                          std::to_string(updates.size()) + " updates but " +
                          std::to_string(w.size()) + " weights");
  }
}

}  // namespace

std::string_view ToString(AggregationMode mode) {
  switch (mode) {
    case AggregationMode::kPlain:
      return "PLAIN";
    case AggregationMode::kMasked:
      return "MASKED";
    case AggregationMode::kFullSmc:
      return "FULL_SMC";
  }
  return "?";
}

WeightVector::WeightVector(std::vector<double> weights,
                           std::vector<int> node_ids)
    : weights_(std::move(weights)), node_ids_(std::move(node_ids)) {
  if (weights_.size() != node_ids_.size()) {
    throw InvalidArgument("WeightVector: weights/node_ids length mismatch");
  }
  if (weights_.empty()) throw InvalidArgument("WeightVector: empty");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InvalidArgument("WeightVector: weights must be finite and >= 0");
    }
    sum += w;
  }
  if (std::fabs(sum - 1.0) > kWeightSumTolerance) {
    throw InvalidArgument("WeightVector: weights sum to " +
                          std::to_string(sum) + ", expected 1");
  }
  if (std::set<int>(node_ids_.begin(), node_ids_.end()).size() !=
      node_ids_.size()) {
    throw InvalidArgument("WeightVector: duplicate node id");
  }
}

WeightVector WeightVector::Uniform(std::vector<int> node_ids) {
  const double w = 1.0 / static_cast<double>(node_ids.size());
  std::vector<double> weights(node_ids.size(), w);
  return WeightVector(std::move(weights), std::move(node_ids));
}

double WeightVector::WeightOf(int node_id) const {
  for (std::size_t i = 0; i < node_ids_.size(); ++i) {
    if (node_ids_[i] == node_id) return weights_[i];
  }
  return 0.0;
}

ParamVector FedAvg(std::span<const ParamVector> updates) {
  if (updates.empty()) throw InvalidArgument("FedAvg: no updates");
  std::vector<int> ids(updates.size());
  std::iota(ids.begin(), ids.end(), 0);
  return WeightedAggregate(updates, WeightVector::Uniform(std::move(ids)));
}

ParamVector WeightedAggregate(std::span<const ParamVector> updates,
                              const WeightVector& w) {
  CheckCounts(updates, w, "WeightedAggregate");
  const std::size_t dim = updates.front().dim();
  for (const ParamVector& u : updates) {
    CheckSameDim(u, updates.front(), "WeightedAggregate");
  }
  std::vector<double> out(dim, 0.0);
  for (std::size_t i : CanonicalOrder(w)) {
    const double wi = w[i];
    const ParamVector& u = updates[i];
    for (std::size_t k = 0; k < dim; ++k) out[k] += wi * u[k];
  }
  return ParamVector(std::move(out));
}

std::vector<mpz_class> QuantizeWeights(const WeightVector& w) {
  std::vector<mpz_class> out;
  out.reserve(w.size());
  for (double wi : w.weights()) {
    out.emplace_back(std::nearbyint(std::ldexp(wi, kWeightBits)));
  }
  return out;
}

CipherVector HomomorphicWeightedSum(const PublicKey& pk,
                                    std::span<const CipherVector> ciphers,
                                    const WeightVector& w) {
  CheckCounts(ciphers, w, "HomomorphicWeightedSum");
  const std::size_t dim = ciphers.front().dim();
  for (const CipherVector& c : ciphers) {
    if (c.dim() != dim) {
      throw InvalidArgument("HomomorphicWeightedSum: dimension mismatch");
    }
  }
  const std::vector<mpz_class> k = QuantizeWeights(w);
  CipherVector acc;
  acc.encoding = ciphers.front().encoding;
  acc.entries.assign(dim, EncryptedZero());
  for (std::size_t i : CanonicalOrder(w)) {
    if (k[i] == 0) continue;
    for (std::size_t d = 0; d < dim; ++d) {
      acc.entries[d] = AddCiphertexts(
          pk, acc.entries[d], ScalarMul(pk, ciphers[i].entries[d], k[i]));
    }
  }
  return acc;
}

ParamVector SecureWeightedAggregate(std::span<const CipherVector> ciphers,
                                    const WeightVector& w, const KeyPair& keys,
                                    const FixedPointEncoding& enc) {
  CheckCounts(ciphers, w, "SecureWeightedAggregate");
  const std::vector<mpz_class> k = QuantizeWeights(w);
  mpz_class total = 0;
  for (const mpz_class& ki : k) total += ki;
  CheckNoWraparound(keys.pub, total, enc);
  const CipherVector sum = HomomorphicWeightedSum(keys.pub, ciphers, w);
  const std::vector<mpz_class> plain = DecryptVector(keys, sum);
  return DecodeVector(plain, enc, keys.pub, kWeightBits);
}

double SecureAggregationBound(std::size_t num_nodes, double max_abs_update,
                              const FixedPointEncoding& enc) {
  const double n = static_cast<double>(num_nodes);
  return n * std::ldexp(1.0, -kWeightBits) * max_abs_update +
         n * std::ldexp(1.0, -enc.scale_bits);
}

ParamVector MaskedWeightedAggregate(std::span<const ParamVector> updates,
                                    const WeightVector& w,
                                    const MaskSchedule& schedule,
                                    int scale_bits) {
  CheckCounts(updates, w, "MaskedWeightedAggregate");
  std::vector<ParamVector> scaled;
  std::vector<int> ids;
  for (std::size_t i : CanonicalOrder(w)) {
    scaled.push_back(w[i] * updates[i]);
    ids.push_back(w.node_ids()[i]);
  }
  if (scaled.size() == 1) {
    return DecodeRing(EncodeRing(scaled.front(), scale_bits), scale_bits);
  }
  return MaskedSum(scaled, ids, schedule, scale_bits);
}

}  // namespace fedsec
