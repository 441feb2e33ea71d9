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

#ifndef FEDSEC_AGGREGATION_H_
#define FEDSEC_AGGREGATION_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "fedsec/masking.h"
#include "fedsec/paillier.h"
#include "fedsec/param_vector.h"

namespace fedsec {

enum class AggregationMode { kPlain, kMasked, kFullSmc };

std::string_view ToString(AggregationMode mode);

// Convex aggregation weights keyed by node id. Construction checks that the
// weights are non-negative, sum to 1 within 1e-9 and that ids are unique.
class WeightVector {
 public:
  WeightVector() = default;
  WeightVector(std::vector<double> weights, std::vector<int> node_ids);

  static WeightVector Uniform(std::vector<int> node_ids);

  std::size_t size() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<int>& node_ids() const { return node_ids_; }
  double operator[](std::size_t i) const { return weights_[i]; }

  // Weight assigned to `node_id`, 0 if absent.
  double WeightOf(int node_id) const;

 private:
  std::vector<double> weights_;
  std::vector<int> node_ids_;
};

// Number of fractional bits weights are quantized to before homomorphic
// scalar multiplication.
inline constexpr int kWeightBits = 16;

// Plain mean. Shares the weighted code path with uniform weights.
ParamVector FedAvg(std::span<const ParamVector> updates);

// sum_i w_i * updates[i], where updates[i] belongs to w.node_ids()[i].
// Accumulation runs in ascending node-id order, so permuting (updates,
// weights) jointly gives a bitwise identical result.
ParamVector WeightedAggregate(std::span<const ParamVector> updates,
                              const WeightVector& w);

// round(w_i * 2^kWeightBits) per node.
std::vector<mpz_class> QuantizeWeights(const WeightVector& w);

// Server side of the encrypted path: sum_i k_i (x) c_i, in node-id order.
CipherVector HomomorphicWeightedSum(const PublicKey& pk,
                                    std::span<const CipherVector> ciphers,
                                    const WeightVector& w);

// Encrypted weighted aggregation followed by decryption and decoding. Throws
// ConfigError if the wraparound guard fails for these weights.
ParamVector SecureWeightedAggregate(std::span<const CipherVector> ciphers,
                                    const WeightVector& w, const KeyPair& keys,
                                    const FixedPointEncoding& enc);

// Per-coordinate error bound of SecureWeightedAggregate against the plaintext
// WeightedAggregate: N * 2^-16 * max_abs_update + N * 2^-scale_bits.
double SecureAggregationBound(std::size_t num_nodes, double max_abs_update,
                              const FixedPointEncoding& enc);

// Masked path: every node scales its update by its public weight, then the
// pairwise-masked shares are summed. With a single participant there is
// nothing to mask against and the weighted update is returned directly.
ParamVector MaskedWeightedAggregate(std::span<const ParamVector> updates,
                                    const WeightVector& w,
                                    const MaskSchedule& schedule,
                                    int scale_bits);

}  // namespace fedsec

#endif  // FEDSEC_AGGREGATION_H_
