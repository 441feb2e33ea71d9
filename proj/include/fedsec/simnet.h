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

#ifndef FEDSEC_SIMNET_H_
#define FEDSEC_SIMNET_H_

// Virtual-time network model. Every message is charged
//   base_ms + bytes / bytes_per_ms + U(0, jitter_ms)
// and crypto work is charged per vector element from a CostModel. Rounds are
// synchronous: the slowest participant gates aggregation, and the slowest
// download gates the end of the round.

#include <cstddef>
#include <span>
#include <vector>

#include "fedsec/aggregation.h"
#include "fedsec/random.h"

namespace fedsec {

struct LinkProfile {
  double base_ms = 20.0;
  double bytes_per_ms = 125.0;
  double jitter_ms = 2.0;
};

// Virtual compute charges in milliseconds per vector element.
struct CostModel {
  double encrypt_ms_per_elem = 0.32;
  double decrypt_ms_per_elem = 0.30;
  double homadd_ms_per_elem = 0.004;
  double mask_ms_per_elem = 0.00003;
};

enum class PayloadKind { kPlainVector, kMaskedVector, kCipherVector };

inline constexpr std::size_t kMessageHeaderBytes = 16;

// PLAIN/MASKED: 8 * dim + 16. CIPHER: ceil(2 * key_bits / 8) * dim + 16.
std::size_t MessageBytes(PayloadKind kind, std::size_t dim,
                         std::size_t key_bits);

PayloadKind PayloadFor(AggregationMode mode);

struct NodeLatency {
  double uplink_ms = 0.0;
  double compute_ms = 0.0;
  double downlink_ms = 0.0;  // includes decryption of the aggregate
};

struct RoundLatency {
  double round_ms = 0.0;
  double aggregation_ms = 0.0;
  std::size_t uplink_bytes = 0;
  std::vector<NodeLatency> per_node;
};

struct RoundTraffic {
  AggregationMode mode = AggregationMode::kPlain;
  std::size_t dim = 0;
  std::vector<int> participation;           // f_i, indexed by node id
  std::vector<std::size_t> uplink_bytes;    // indexed by node id
  std::vector<std::size_t> downlink_bytes;  // indexed by node id
};

// Throws ConfigError if a participant has no link profile. Jitter draws come
// from `rng` in ascending node order (uplink, then downlink); pass nullptr
// for zero jitter.
RoundLatency ComputeRoundLatency(const RoundTraffic& traffic,
                                 std::span<const LinkProfile> links,
                                 const CostModel& cost, Rng* rng);

}  // namespace fedsec

#endif  // FEDSEC_SIMNET_H_
