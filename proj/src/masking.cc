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

#include "fedsec/masking.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "fedsec/errors.h"
#include "fedsec/random.h"

namespace fedsec {
namespace {

constexpr double kRingLimit = 4611686018427387904.0;  // 2^62

}  // namespace

RingVector EncodeRing(const ParamVector& v, int scale_bits) {
  RingVector out(v.dim());
  for (std::size_t k = 0; k < v.dim(); ++k) {
    const double scaled = std::nearbyint(std::ldexp(v[k], scale_bits));
    if (!(std::fabs(scaled) < kRingLimit)) {
      throw CryptoError("EncodeRing: coordinate " + std::to_string(k) +
                        " overflows the 64-bit ring");
    }
    out[k] = static_cast<std::uint64_t>(static_cast<std::int64_t>(scaled));
  }
  return out;
}

ParamVector DecodeRing(std::span<const std::uint64_t> v, int scale_bits) {
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    out[k] = std::ldexp(static_cast<double>(static_cast<std::int64_t>(v[k])),
                        -scale_bits);
  }
  return ParamVector(std::move(out));
}

MaskShare PairMask(const MaskSchedule& schedule, int i, int j,
                   std::size_t dim) {
  if (i == j) throw InvalidArgument("PairMask: i == j");
  const int lo = std::min(i, j);
  const int hi = std::max(i, j);
  Rng rng(DeriveSeed(schedule.experiment_seed,
                     {static_cast<std::uint64_t>(Stream::kMask), schedule.round,
                      static_cast<std::uint64_t>(lo),
                      static_cast<std::uint64_t>(hi)}));
  MaskShare share{{lo, hi}, RingVector(dim)};
  for (std::uint64_t& m : share.mask) m = rng();
  return share;
}

RingVector MaskedShare(const ParamVector& update, int node_id,
                       std::span<const int> cohort,
                       const MaskSchedule& schedule, int scale_bits) {
  if (std::find(cohort.begin(), cohort.end(), node_id) == cohort.end()) {
    throw InvalidArgument("MaskedShare: node " + std::to_string(node_id) +
                          " not in cohort");
  }
  RingVector share = EncodeRing(update, scale_bits);
  for (int other : cohort) {
    if (other == node_id) continue;
    const MaskShare pm = PairMask(schedule, node_id, other, update.dim());
    const bool adds = node_id == pm.node_pair.first;
    for (std::size_t k = 0; k < share.size(); ++k) {
      share[k] = adds ? share[k] + pm.mask[k] : share[k] - pm.mask[k];
    }
  }
  return share;
}

ParamVector UnmaskSum(std::span<const RingVector> shares, int scale_bits) {
  if (shares.empty()) throw InvalidArgument("UnmaskSum: no shares");
  RingVector total(shares.front().size(), 0);
  for (const RingVector& s : shares) {
    if (s.size() != total.size()) {
      throw InvalidArgument("UnmaskSum: dimension mismatch");
    }
    for (std::size_t k = 0; k < total.size(); ++k) total[k] += s[k];
  }
  return DecodeRing(total, scale_bits);
}

ParamVector MaskedSum(std::span<const ParamVector> updates,
                      std::span<const int> node_ids,
                      const MaskSchedule& schedule, int scale_bits) {
  if (updates.size() < 2) {
    throw InvalidArgument(
        "MaskedSum: at least two nodes required for masks to cancel");
  }
  if (updates.size() != node_ids.size()) {
    throw InvalidArgument("MaskedSum: updates/node_ids length mismatch");
  }
  for (const ParamVector& u : updates) {
    CheckSameDim(u, updates.front(), "MaskedSum");
  }
  std::vector<RingVector> shares;
  shares.reserve(updates.size());
  for (std::size_t k = 0; k < updates.size(); ++k) {
    shares.push_back(
        MaskedShare(updates[k], node_ids[k], node_ids, schedule, scale_bits));
  }
  return UnmaskSum(shares, scale_bits);
}

}  // namespace fedsec
