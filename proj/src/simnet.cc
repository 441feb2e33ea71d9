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

#include "fedsec/simnet.h"

#include <algorithm>
#include <string>

#include "fedsec/errors.h"

namespace fedsec {
namespace {

double MessageMs(const LinkProfile& link, std::size_t bytes, Rng* rng) {
  double ms = link.base_ms + static_cast<double>(bytes) / link.bytes_per_ms;
  if (rng != nullptr && link.jitter_ms > 0.0) {
    std::uniform_real_distribution<double> jitter(0.0, link.jitter_ms);
    ms += jitter(*rng);
  }
  return ms;
}

}  // namespace

std::size_t MessageBytes(PayloadKind kind, std::size_t dim,
                         std::size_t key_bits) {
  switch (kind) {
    case PayloadKind::kPlainVector:
    case PayloadKind::kMaskedVector:
      return 8 * dim + kMessageHeaderBytes;
    case PayloadKind::kCipherVector:
      return ((2 * key_bits + 7) / 8) * dim + kMessageHeaderBytes;
  }
  return 0;
}

PayloadKind PayloadFor(AggregationMode mode) {
  switch (mode) {
    case AggregationMode::kPlain:
      return PayloadKind::kPlainVector;
    case AggregationMode::kMasked:
      return PayloadKind::kMaskedVector;
    case AggregationMode::kFullSmc:
      return PayloadKind::kCipherVector;
  }
  return PayloadKind::kPlainVector;
}

RoundLatency ComputeRoundLatency(const RoundTraffic& traffic,
                                 std::span<const LinkProfile> links,
                                 const CostModel& cost, Rng* rng) {
  const std::size_t n = traffic.participation.size();
  if (traffic.uplink_bytes.size() != n || traffic.downlink_bytes.size() != n) {
    throw InvalidArgument("ComputeRoundLatency: traffic vectors misaligned");
  }
  std::size_t participants = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (traffic.participation[i] == 0) continue;
    ++participants;
    if (i >= links.size()) {
      throw ConfigError("simnet: no link profile for node " +
                        std::to_string(i));
    }
    const LinkProfile& l = links[i];
    if (!(l.bytes_per_ms > 0.0) || l.base_ms < 0.0 || l.jitter_ms < 0.0) {
      throw ConfigError("simnet: invalid link profile for node " +
                        std::to_string(i));
    }
  }

  const auto dim = static_cast<double>(traffic.dim);
  double node_compute = 0.0;
  double node_decrypt = 0.0;
  RoundLatency out;
  switch (traffic.mode) {
    case AggregationMode::kPlain:
      break;
    case AggregationMode::kMasked:
      // One pairwise mask per peer.
      node_compute = cost.mask_ms_per_elem * dim *
                     static_cast<double>(participants > 0 ? participants - 1 : 0);
      break;
    case AggregationMode::kFullSmc:
      node_compute = cost.encrypt_ms_per_elem * dim;
      node_decrypt = cost.decrypt_ms_per_elem * dim;
      out.aggregation_ms =
          cost.homadd_ms_per_elem * dim * static_cast<double>(participants);
      break;
  }

  out.per_node.assign(n, NodeLatency{});
  double max_up = 0.0;
  double max_down = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (traffic.participation[i] == 0) continue;
    NodeLatency& nl = out.per_node[i];
    nl.uplink_ms = MessageMs(links[i], traffic.uplink_bytes[i], rng);
    nl.compute_ms = node_compute;
    out.uplink_bytes += traffic.uplink_bytes[i];
    max_up = std::max(max_up, nl.uplink_ms + nl.compute_ms);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (traffic.participation[i] == 0) continue;
    NodeLatency& nl = out.per_node[i];
    nl.downlink_ms =
        MessageMs(links[i], traffic.downlink_bytes[i], rng) + node_decrypt;
    max_down = std::max(max_down, nl.downlink_ms);
  }
  out.round_ms = max_up + out.aggregation_ms + max_down;
  return out;
}

}  // namespace fedsec
