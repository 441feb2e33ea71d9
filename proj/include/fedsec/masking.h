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

#ifndef FEDSEC_MASKING_H_
#define FEDSEC_MASKING_H_

// Lightweight pairwise additive masking, the cheap alternative to Paillier.
//
// Each update is fixed-point encoded into the ring Z_{2^64}. For every pair of
// participants (i, j) with i < j a mask is expanded from a seed derived from
// (experiment seed, round, i, j); node i adds it and node j subtracts it.
// Ring arithmetic wraps, so the masks cancel exactly in the sum and the
// unmasked result equals the sum of the encoded updates bit for bit.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fedsec/param_vector.h"

namespace fedsec {

using RingVector = std::vector<std::uint64_t>;

struct MaskSchedule {
  std::uint64_t experiment_seed = 0;
  std::uint64_t round = 0;
};

struct MaskShare {
  std::pair<int, int> node_pair;  // first < second
  RingVector mask;
};

// Round-to-nearest fixed point into two's complement Z_{2^64}. Throws
// CryptoError when |x| * 2^scale_bits does not fit in 62 bits.
RingVector EncodeRing(const ParamVector& v, int scale_bits);
ParamVector DecodeRing(std::span<const std::uint64_t> v, int scale_bits);

// Reproducible mask for the pair (i, j); requires i != j. The pair is
// canonicalized so PairMask(i, j) == PairMask(j, i).
MaskShare PairMask(const MaskSchedule& schedule, int i, int j,
                   std::size_t dim);

// The masked upload of `node_id` among `cohort` (which must contain it).
RingVector MaskedShare(const ParamVector& update, int node_id,
                       std::span<const int> cohort,
                       const MaskSchedule& schedule, int scale_bits);

// Server-side: wrapping sum of shares, decoded.
ParamVector UnmaskSum(std::span<const RingVector> shares, int scale_bits);

// Full protocol in one call. `updates[k]` belongs to `node_ids[k]`. Requires
// at least two nodes (InvalidArgument otherwise) and equal dimensions.
ParamVector MaskedSum(std::span<const ParamVector> updates,
                      std::span<const int> node_ids,
                      const MaskSchedule& schedule, int scale_bits);

}  // namespace fedsec

#endif  // FEDSEC_MASKING_H_
